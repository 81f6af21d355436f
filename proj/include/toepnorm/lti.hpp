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

#ifndef TOEPNORM_LTI_HPP
#define TOEPNORM_LTI_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

namespace toepnorm {

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when a system (or a descriptor for one) has spectral radius >= 1.
class UnstableSystemError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Finite impulse response: G(z) = g0 + g1 z^-1 + ... + gd z^-d.
struct Fir {
  std::vector<double> coeffs;
};

/// G(z) = c / (z - rho) + d0, a single real pole at rho in (0,1).
/// Impulse response: g0 = d0, gk = c * rho^(k-1) for k >= 1.
struct SinglePole {
  double rho;
  double c;
  double d0;
};

/// G(z) = c^T (zI - A)^-1 b + d0.
struct StateSpace {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  double d0;
};

namespace detail {

inline double spectral_radius(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace detail

/// A stable, causal, real SISO LTI system in one of three structured forms.
/// Immutable after construction; construction validates stability.
class LtiSystem {
 public:
  using Form = std::variant<Fir, SinglePole, StateSpace>;

  explicit LtiSystem(Fir f) : form_(std::move(f)), stability_radius_(0.0) {
    const auto& fir = std::get<Fir>(form_);
    if (fir.coeffs.empty())
      throw std::invalid_argument("Fir: at least one coefficient required");
  }

  explicit LtiSystem(SinglePole p) : form_(p), stability_radius_(p.rho) {
    if (p.rho >= 1.0) throw UnstableSystemError("SinglePole: pole modulus must be < 1");
    if (!(p.rho > 0.0)) throw std::invalid_argument("SinglePole: rho must lie in (0,1)");
    if (!(p.c > 0.0)) throw std::invalid_argument("SinglePole: c must be > 0");
    if (p.d0 < 0.0) throw std::invalid_argument("SinglePole: d0 must be >= 0");
  }

  explicit LtiSystem(StateSpace s) : form_(std::move(s)) {
    const auto& ss = std::get<StateSpace>(form_);
    const auto n = ss.A.rows();
    if (n < 1 || ss.A.cols() != n)
      throw std::invalid_argument("StateSpace: A must be square and non-empty");
    if (ss.b.size() != n || ss.c.size() != n)
      throw std::invalid_argument("StateSpace: b and c must match the state dimension");
    stability_radius_ = detail::spectral_radius(ss.A);
    if (!(stability_radius_ < 1.0))
      throw UnstableSystemError("StateSpace: spectral radius of A must be < 1");
  }

  const Form& form() const { return form_; }

  /// Largest pole modulus: 0 for FIR, rho for the single pole form,
  /// spectral radius of A for state space.
  double stability_radius() const { return stability_radius_; }

  bool is_fir() const { return std::holds_alternative<Fir>(form_); }

 private:
  Form form_;
  double stability_radius_;
};

inline double stability_radius(const LtiSystem& sys) { return sys.stability_radius(); }

/// Truncated impulse response together with a bound on the dropped l1 tail.
struct ImpulseSequence {
  std::vector<double> coeffs;
  double tail_bound;
};

/// Witnesses |g0| <= d_bound and |gk| <= c_const * rho^(k-1) for k >= 1.
struct DecayCertificate {
  double d_bound;
  double c_const;
  double rho;
};

struct HinfResult {
  double norm;
  double theta0;
  std::size_t grid_size;
  double error_bound;
};

namespace detail {

inline std::vector<double> impulse_coeffs(const LtiSystem& sys, std::size_t n_terms) {
  std::vector<double> g(n_terms, 0.0);
  std::visit(
      [&](const auto& form) {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, Fir>) {
          const std::size_t m = std::min(n_terms, form.coeffs.size());
          std::copy_n(form.coeffs.begin(), m, g.begin());
        } else if constexpr (std::is_same_v<T, SinglePole>) {
          g[0] = form.d0;
          double p = form.c;
          for (std::size_t k = 1; k < n_terms; ++k) {
            g[k] = p;
            p *= form.rho;
          }
        } else {
          g[0] = form.d0;
          Eigen::VectorXd state = form.b;
          for (std::size_t k = 1; k < n_terms; ++k) {
            g[k] = form.c.dot(state);
            state = form.A * state;
          }
        }
      },
      sys.form());
  return g;
}

}  // namespace detail

/// Evaluates G at z = radius * e^(j theta) from the structured form.
/// Requires radius > stability_radius(sys).
inline std::complex<double> frequency_response(const LtiSystem& sys, double theta,
                                               double radius = 1.0) {
  if (!(radius > sys.stability_radius()) || !(radius > 0.0))
    throw std::domain_error("frequency_response: radius must exceed the stability radius");
  const std::complex<double> z = std::polar(radius, theta);
  return std::visit(
      [&](const auto& form) -> std::complex<double> {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, Fir>) {
          const std::complex<double> zinv = 1.0 / z;
          std::complex<double> acc(0.0, 0.0);
          for (auto it = form.coeffs.rbegin(); it != form.coeffs.rend(); ++it)
            acc = acc * zinv + *it;
          return acc;
        } else if constexpr (std::is_same_v<T, SinglePole>) {
          return form.c / (z - form.rho) + form.d0;
        } else {
          Eigen::MatrixXcd m = -form.A.template cast<std::complex<double>>();
          m.diagonal().array() += z;
          const Eigen::VectorXcd x =
              m.partialPivLu().solve(form.b.template cast<std::complex<double>>());
          return form.c.template cast<std::complex<double>>().dot(x) + form.d0;
        }
      },
      sys.form());
}

namespace detail {

struct CircleSup {
  double value;
  double theta;
  double spacing;  // grid spacing actually used (full-circle spacing 2*pi/M)
};

template <typename F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double xtol) {
  const double invphi = 0.6180339887498949;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  double bx = f1 >= f2 ? x1 : x2;
  double bf = std::max(f1, f2);
  while (hi - lo > xtol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = f(x2);
      if (f2 > bf) { bf = f2; bx = x2; }
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = f(x1);
      if (f1 > bf) { bf = f1; bx = x1; }
    }
  }
  return {bx, bf};
}

/// Max of |G| over the circle of the given radius. Real coefficients make
/// |G(r e^{j theta})| even in theta, so scanning [0, pi] covers the circle.
/// `points` is the number of samples on [0, pi]; grid maxima tied within
/// 1e-12 resolve to the smallest theta >= 0.
inline CircleSup circle_sup(const LtiSystem& sys, double radius, std::size_t points) {
  points = std::max<std::size_t>(points, 3);
  const double denom = static_cast<double>(points - 1);
  auto eval = [&](double th) { return std::abs(frequency_response(sys, th, radius)); };

  double best = -1.0;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < points; ++i) {
    const double f = eval(kPi * static_cast<double>(i) / denom);
    if (f > best + 1e-12) {
      best = f;
      best_i = i;
    }
  }
  const double lo = kPi * static_cast<double>(best_i == 0 ? 0 : best_i - 1) / denom;
  const double hi = kPi * static_cast<double>(std::min(best_i + 1, points - 1)) / denom;
  const auto [rx, rf] = golden_max(eval, lo, hi, 1e-10);

  CircleSup out;
  out.spacing = 2.0 * kPi / (2.0 * denom);  // equivalent full-circle spacing
  if (rf > best) {
    out.value = rf;
    out.theta = rx;
  } else {
    out.value = best;
    out.theta = kPi * static_cast<double>(best_i) / denom;
  }
  return out;
}

/// Smallest N >= 1 with c * base^(N-1) / (1 - base) <= target.
inline std::size_t geometric_tail_length(double c, double base, double target,
                                         std::size_t cap = 16384) {
  if (c <= 0.0 || base <= 0.0) return 1;
  if (base >= 1.0) return cap;
  if (c / (1.0 - base) <= target) return 1;
  if (target <= 0.0) return cap;
  const double steps = std::log(target * (1.0 - base) / c) / std::log(base);
  if (!(steps > 0.0)) return 1;
  if (steps > static_cast<double>(cap)) return cap;
  return std::min<std::size_t>(cap, 1 + static_cast<std::size_t>(std::ceil(steps)));
}

/// Quadratic dominance constant of peak deficit for a (D, C, rho) envelope:
/// sup |a|^2 - |a(e^{j theta})|^2 <= L (theta - theta0)^2.
inline double decay_smoothness_constant(double d_bound, double c_const, double rho) {
  const double om = 1.0 - rho;
  return (d_bound * c_const * (1.0 - rho * rho) + c_const * c_const * rho) /
         (om * om * om * om);
}

/// Exact FIR variant: L = sum_{k>=1} k^2 |b_k| with b_k the autocorrelation.
inline double fir_curvature_constant(const std::vector<double>& g) {
  double l = 0.0;
  for (std::size_t lag = 1; lag < g.size(); ++lag) {
    double b = 0.0;
    for (std::size_t k = lag; k < g.size(); ++k) b += g[k] * g[k - lag];
    l += static_cast<double>(lag) * static_cast<double>(lag) * std::abs(b);
  }
  return l;
}

inline double default_scaling_radius(const LtiSystem& sys) {
  return 0.5 * (1.0 + sys.stability_radius());
}

/// Crude sup of |G| on a circle, used only to size grids and tail bounds.
inline double rough_sup(const LtiSystem& sys, double radius) {
  return circle_sup(sys, radius, 1025).value;
}

/// Coefficient envelope |gk| <= c_const * base^(k-1) for tail and grid sizing.
/// Exact for the structured forms where available.
struct DecayEnvelope {
  double c_const;
  double base;
};

inline DecayEnvelope decay_envelope(const LtiSystem& sys) {
  return std::visit(
      [&](const auto& form) -> DecayEnvelope {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, Fir>) {
          return {0.0, 0.0};  // finite support, no tail
        } else if constexpr (std::is_same_v<T, SinglePole>) {
          return {form.c, form.rho};
        } else {
          const double g = default_scaling_radius(sys);
          return {g * rough_sup(sys, g), g};
        }
      },
      sys.form());
}

inline std::size_t truncation_length(const LtiSystem& sys, double rel_target = 1e-12,
                                     std::size_t cap = 16384) {
  if (sys.is_fir()) return std::get<Fir>(sys.form()).coeffs.size();
  const DecayEnvelope env = decay_envelope(sys);
  const double scale = std::max(rough_sup(sys, 1.0), 1e-300);
  return geometric_tail_length(env.c_const, env.base, rel_target * scale, cap);
}

}  // namespace detail

/// Exact impulse response prefix g0..g_{n_terms-1} plus an l1 tail bound.
inline ImpulseSequence impulse_response(const LtiSystem& sys, std::size_t n_terms) {
  if (n_terms == 0) throw std::invalid_argument("impulse_response: n_terms must be >= 1");
  ImpulseSequence out;
  out.coeffs = detail::impulse_coeffs(sys, n_terms);
  if (sys.is_fir()) {
    const auto& c = std::get<Fir>(sys.form()).coeffs;
    double tail = 0.0;
    for (std::size_t k = n_terms; k < c.size(); ++k) tail += std::abs(c[k]);
    out.tail_bound = tail;
  } else {
    const auto env = detail::decay_envelope(sys);
    out.tail_bound = env.c_const * std::pow(env.base, static_cast<double>(n_terms) - 1.0) /
                     (1.0 - env.base);
  }
  return out;
}

/// H-infinity norm by dense frequency grid plus golden-section refinement.
/// Grid density follows max(4096, 16 N) with N the truncation length and is
/// enlarged (up to 2^22 points) until the reported error bound meets tol.
inline HinfResult hinf_norm(const LtiSystem& sys, double tol = 1e-9) {
  if (!(tol > 0.0)) throw std::invalid_argument("hinf_norm: tol must be > 0");

  // Curvature constant for the grid error bound.
  double curvature = 0.0;
  if (sys.is_fir()) {
    curvature = detail::fir_curvature_constant(std::get<Fir>(sys.form()).coeffs);
  } else if (const auto* sp = std::get_if<SinglePole>(&sys.form())) {
    curvature = detail::decay_smoothness_constant(sp->d0, sp->c, sp->rho);
  } else {
    const auto env = detail::decay_envelope(sys);
    const double d = std::abs(detail::impulse_coeffs(sys, 1)[0]);
    curvature = detail::decay_smoothness_constant(d, env.c_const, env.base);
  }

  const std::size_t n_trunc = detail::truncation_length(sys);
  std::size_t m_full = std::max<std::size_t>(4096, 16 * n_trunc);

  detail::CircleSup sup{};
  double err = 0.0;
  for (;;) {
    const std::size_t points = m_full / 2 + 1;
    sup = detail::circle_sup(sys, 1.0, points);
    const double half = kPi / static_cast<double>(m_full);
    err = std::sqrt(sup.value * sup.value + curvature * half * half) - sup.value;
    if (err <= tol || m_full >= (std::size_t{1} << 22)) break;
    m_full *= 4;
  }
  return HinfResult{sup.value, sup.theta, m_full / 2 + 1, err};
}

/// Norm of the radially scaled system: gamma * sup_theta |G(gamma e^{j theta})|.
/// Requires stability_radius < gamma < 1.
inline double scaled_hinf_norm(const LtiSystem& sys, double gamma) {
  const double rho = sys.stability_radius();
  if (!(gamma > rho && gamma < 1.0))
    throw std::domain_error("scaled_hinf_norm: gamma must lie in (stability radius, 1)");

  std::size_t n_trunc;
  if (sys.is_fir()) {
    n_trunc = std::get<Fir>(sys.form()).coeffs.size();
  } else {
    // The scaled system has coefficient envelope base rho/gamma.
    const auto env = detail::decay_envelope(sys);
    const double base = env.base / gamma;
    const double rough = gamma * detail::rough_sup(sys, gamma);
    n_trunc = detail::geometric_tail_length(env.c_const, base,
                                            1e-12 * std::max(rough, 1e-300));
  }
  const std::size_t m_full =
      std::min<std::size_t>(std::max<std::size_t>(4096, 16 * n_trunc), std::size_t{1} << 18);
  return gamma * detail::circle_sup(sys, gamma, m_full / 2 + 1).value;
}

/// Decay certificate from evaluation on the radius-gamma circle:
/// (D, C, rho) = (|g0|, scaled norm at gamma, gamma).
inline DecayCertificate decay_certificate(const LtiSystem& sys, double gamma) {
  const double c = scaled_hinf_norm(sys, gamma);  // also validates gamma
  const double d = std::abs(detail::impulse_coeffs(sys, 1)[0]);
  return DecayCertificate{d, c, gamma};
}

/// Structurally exact certificate where the form admits one: the single pole
/// form always, FIR only up to length 2 (rho = 0 kills all later lags).
inline std::optional<DecayCertificate> exact_decay_certificate(const LtiSystem& sys) {
  if (const auto* sp = std::get_if<SinglePole>(&sys.form()))
    return DecayCertificate{sp->d0, sp->c, sp->rho};
  if (const auto* fir = std::get_if<Fir>(&sys.form())) {
    if (fir->coeffs.size() == 1) return DecayCertificate{std::abs(fir->coeffs[0]), 0.0, 0.0};
    if (fir->coeffs.size() == 2)
      return DecayCertificate{std::abs(fir->coeffs[0]), std::abs(fir->coeffs[1]), 0.0};
  }
  return std::nullopt;
}

}  // namespace toepnorm

#endif  // TOEPNORM_LTI_HPP
