// Copyright 2026 The toepnorm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TOEPNORM_BOUNDS_HPP
#define TOEPNORM_BOUNDS_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "toepnorm/lti.hpp"

namespace toepnorm {

// Universal constants of the finite-section lower bound, written out from the
// explicit form 3*sqrt(2)*pi*(2 + 3*pi^4) and 9*sqrt(2)*pi^2.
inline const double kSectionBoundC1 =
    3.0 * std::sqrt(2.0) * kPi * (2.0 + 3.0 * kPi * kPi * kPi * kPi);
inline const double kSectionBoundC2 = 9.0 * std::sqrt(2.0) * kPi * kPi;

enum class SmoothnessMethod { decay_bound, exact_fir };

/// Quadratic dominance of the squared peak:
/// sup|a|^2 - |a(e^{j theta})|^2 <= l_const * (theta - theta0)^2 for all theta.
struct SmoothnessCertificate {
  double l_const;
  double theta0;
  SmoothnessMethod method;
};

/// Terms of the finite-section norm lower bound, kept separate for reporting:
/// ||T_n|| >= m_norm - term_n2 - term_n3.
struct BoundBreakdown {
  double m_norm;
  double term_n2;
  double term_n3;
  double lower_bound;
  double c1;
  double c2;
};

struct GapBoundReport {
  double gamma;
  double g_gamma_norm;
  double gap_bound;
  long n;
  BoundBreakdown breakdown;
};

/// Smoothness constant from a (D, C, rho) coefficient envelope:
/// L = (D C (1 - rho^2) + C^2 rho) / (1 - rho)^4.
inline SmoothnessCertificate smoothness_from_decay(const DecayCertificate& cert,
                                                   double theta0 = 0.0) {
  if (!(cert.rho >= 0.0 && cert.rho < 1.0))
    throw std::domain_error("smoothness_from_decay: rho must lie in [0,1)");
  const double l = detail::decay_smoothness_constant(cert.d_bound, cert.c_const, cert.rho);
  return SmoothnessCertificate{l, theta0, SmoothnessMethod::decay_bound};
}

inline SmoothnessCertificate smoothness_from_decay(const LtiSystem& sys,
                                                   const DecayCertificate& cert) {
  return smoothness_from_decay(cert, hinf_norm(sys).theta0);
}

/// Exact FIR variant: L = sum_{k>=1} k^2 |b_k| with b the autocorrelation of
/// the coefficients, a bound on half the curvature of |a|^2.
inline SmoothnessCertificate smoothness_exact_fir(const std::vector<double>& coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("smoothness_exact_fir: empty input");
  const double l = detail::fir_curvature_constant(coeffs);
  const double theta0 = hinf_norm(LtiSystem(Fir{coeffs})).theta0;
  return SmoothnessCertificate{l, theta0, SmoothnessMethod::exact_fir};
}

/// Lower bound on ||T_n(a)|| for a symbol with peak m_norm, smoothness L and
/// coefficient envelope (C, rho):
///   m_norm - C1 L / (m_norm n^2) - C2 C^2 / (m_norm (1+rho) (1-rho)^5 n^3).
inline BoundBreakdown section_norm_lower_bound(double m_norm, double l_const, double c_const,
                                               double rho, long n) {
  if (n < 3) throw std::invalid_argument("section_norm_lower_bound: n must be >= 3");
  if (!(m_norm > 0.0))
    throw std::invalid_argument("section_norm_lower_bound: m_norm must be > 0");
  if (!(rho >= 0.0 && rho < 1.0))
    throw std::domain_error("section_norm_lower_bound: rho must lie in [0,1)");
  const double nn = static_cast<double>(n);
  const double om = 1.0 - rho;
  const double om5 = om * om * om * om * om;
  const double term_n2 = kSectionBoundC1 * l_const / (m_norm * nn * nn);
  const double term_n3 =
      kSectionBoundC2 * c_const * c_const / (m_norm * (1.0 + rho) * om5 * nn * nn * nn);
  return BoundBreakdown{m_norm,           term_n2,         term_n3,
                        m_norm - term_n2 - term_n3, kSectionBoundC1, kSectionBoundC2};
}

/// Bound on ||G||_inf - ||T_n(g)|| at a fixed scaling radius gamma, composed
/// from the decay certificate (C = scaled norm, rho = gamma), the smoothness
/// constant it implies, and the section lower bound.
inline GapBoundReport finite_section_gap_bound(const LtiSystem& sys, double gamma, long n,
                                               std::optional<double> d_override = {}) {
  if (n < 3) throw std::invalid_argument("finite_section_gap_bound: n must be >= 3");
  const double hinf = hinf_norm(sys).norm;
  const double c = scaled_hinf_norm(sys, gamma);  // validates gamma
  const double d = d_override.value_or(std::abs(detail::impulse_coeffs(sys, 1)[0]));
  const double l = detail::decay_smoothness_constant(d, c, gamma);
  BoundBreakdown bb = section_norm_lower_bound(hinf, l, c, gamma, n);
  return GapBoundReport{gamma, c, bb.term_n2 + bb.term_n3, n, bb};
}

class BoundTooWeakError : public std::runtime_error {
 public:
  BoundTooWeakError(const std::string& msg, GapBoundReport last)
      : std::runtime_error(msg), report(last) {}
  GapBoundReport report;
};

namespace detail {

template <typename F>
std::pair<double, double> golden_min(F&& f, double lo, double hi, double rel_xtol) {
  const double invphi = 0.6180339887498949;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  double bx = f1 <= f2 ? x1 : x2;
  double bf = std::min(f1, f2);
  while (hi - lo > rel_xtol * std::max(std::abs(bx), 1e-12)) {
    if (f1 > f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = f(x2);
      if (f2 < bf) { bf = f2; bx = x2; }
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = f(x1);
      if (f1 < bf) { bf = f1; bx = x1; }
    }
  }
  return {bx, bf};
}

}  // namespace detail

/// Caches the per-gamma ingredients of the gap bound for one system so that
/// sweeps over n reuse them. The bound at fixed gamma is A/n^2 + B/n^3.
class GammaOptimizer {
 public:
  explicit GammaOptimizer(LtiSystem sys, std::optional<double> d_override = {},
                          std::size_t grid_points = 200)
      : sys_(std::move(sys)) {
    hinf_ = hinf_norm(sys_).norm;
    d_ = d_override ? *d_override : std::abs(detail::impulse_coeffs(sys_, 1)[0]);
    const double rho = sys_.stability_radius();
    const double lo = rho + 1e-6;
    const double hi = 1.0 - 1e-6;
    if (!(lo < hi)) throw std::domain_error("GammaOptimizer: empty gamma interval");
    // Geometric spacing in 1 - gamma concentrates points near 1.
    const double ulo = 1.0 - lo;
    const double uhi = 1.0 - hi;
    grid_.reserve(grid_points);
    for (std::size_t i = 0; i < grid_points; ++i) {
      const double frac = static_cast<double>(i) / static_cast<double>(grid_points - 1);
      const double gamma = 1.0 - ulo * std::pow(uhi / ulo, frac);
      grid_.push_back(make_point(gamma));
    }
  }

  double hinf() const { return hinf_; }
  const LtiSystem& system() const { return sys_; }

  GapBoundReport bound_at(double gamma, long n) const {
    const auto p = make_point(gamma);
    return report_of(p, n);
  }

  /// Grid scan plus golden refinement around the grid minimum; deterministic,
  /// ties resolve to the smaller gamma.
  std::pair<double, GapBoundReport> optimize(long n) const {
    if (n < 3) throw std::invalid_argument("GammaOptimizer: n must be >= 3");
    const double nn = static_cast<double>(n);
    std::size_t best_i = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      const double v = grid_[i].a / (nn * nn) + grid_[i].b / (nn * nn * nn);
      if (v < best) {
        best = v;
        best_i = i;
      }
    }
    Point best_point = grid_[best_i];

    const double lo = grid_[best_i == 0 ? 0 : best_i - 1].gamma;
    const double hi = grid_[std::min(best_i + 1, grid_.size() - 1)].gamma;
    if (hi > lo) {
      Point refined = best_point;
      double refined_best = best;
      auto value = [&](double gamma) {
        const Point p = make_point(gamma);
        const double v = p.a / (nn * nn) + p.b / (nn * nn * nn);
        if (v < refined_best) {
          refined_best = v;
          refined = p;
        }
        return v;
      };
      detail::golden_min(value, lo, hi, 1e-4);
      if (refined_best < best) {
        best = refined_best;
        best_point = refined;
      }
    }
    return {best_point.gamma, report_of(best_point, n)};
  }

 private:
  struct Point {
    double gamma;
    double c;  // scaled norm at gamma
    double a;  // n^-2 coefficient
    double b;  // n^-3 coefficient
  };

  Point make_point(double gamma) const {
    const double c = scaled_hinf_norm(sys_, gamma);
    const double om = 1.0 - gamma;
    const double om4 = om * om * om * om;
    const double a =
        kSectionBoundC1 * (d_ * c * (1.0 - gamma * gamma) + c * c * gamma) / (hinf_ * om4);
    const double b = kSectionBoundC2 * c * c / (hinf_ * (1.0 + gamma) * om4 * om);
    return Point{gamma, c, a, b};
  }

  GapBoundReport report_of(const Point& p, long n) const {
    const double l = detail::decay_smoothness_constant(d_, p.c, p.gamma);
    BoundBreakdown bb = section_norm_lower_bound(hinf_, l, p.c, p.gamma, n);
    return GapBoundReport{p.gamma, p.c, bb.term_n2 + bb.term_n3, n, bb};
  }

  LtiSystem sys_;
  double hinf_ = 0.0;
  double d_ = 0.0;
  std::vector<Point> grid_;
};

inline std::pair<double, GapBoundReport> optimize_gamma(const LtiSystem& sys, long n) {
  return GammaOptimizer(sys).optimize(n);
}

/// Smallest n >= 3 whose optimized gap bound is <= eps, by doubling plus
/// binary search. The gap itself never exceeds ||G||_inf, so eps at or above
/// the norm is satisfied at the minimum section size already.
inline long required_length(const LtiSystem& sys, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("required_length: eps must be > 0");
  constexpr long kCap = 1000000000L;

  const GammaOptimizer opt(sys);
  if (eps >= opt.hinf()) return 3;

  auto bound = [&](long n) { return opt.optimize(n).second.gap_bound; };
  if (bound(3) <= eps) return 3;

  long lo = 3;
  long hi = 3;
  for (;;) {
    if (hi >= kCap) {
      const auto [gs, rep] = opt.optimize(kCap);
      (void)gs;
      if (rep.gap_bound <= eps) {
        hi = kCap;
        break;
      }
      throw BoundTooWeakError("required_length: bound too weak at the n cap", rep);
    }
    hi = std::min(kCap, hi * 2);
    if (bound(hi) <= eps) break;
    lo = hi;
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (bound(mid) <= eps)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace toepnorm

#endif  // TOEPNORM_BOUNDS_HPP
