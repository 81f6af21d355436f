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

#ifndef TOEPNORM_VERIFY_HPP
#define TOEPNORM_VERIFY_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "toepnorm/bounds.hpp"
#include "toepnorm/io.hpp"
#include "toepnorm/lti.hpp"
#include "toepnorm/toeplitz.hpp"

namespace toepnorm {

/// Knobs for the self-check suite. The constant scales exist so a test
/// harness can corrupt the bound constants and watch the soundness check
/// fail; production callers leave them at 1.
struct VerifyOptions {
  double c1_scale = 1.0;
  double c2_scale = 1.0;
  std::uint64_t seed = 20260808;
};

namespace detail {

class CheckReporter {
 public:
  explicit CheckReporter(std::ostream& os) : os_(os) {}

  void pass(const std::string& name, const std::string& detail) {
    os_ << "[ ok ] " << name << ": " << detail << '\n';
  }
  void fail(const std::string& name, const std::string& detail) {
    os_ << "[FAIL] " << name << ": " << detail << '\n';
    ok_ = false;
  }
  void check(bool cond, const std::string& name, const std::string& detail) {
    if (cond)
      pass(name, detail);
    else
      fail(name, detail);
  }
  bool ok() const { return ok_; }

 private:
  std::ostream& os_;
  bool ok_ = true;
};

inline std::vector<double> random_coeffs(std::mt19937_64& gen, std::size_t len) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(len);
  for (auto& x : c) x = u(gen);
  return c;
}

}  // namespace detail

/// Runs the full identity and invariant suite, one line per check.
/// Returns false if any check fails.
inline bool run_verify(std::ostream& os, const VerifyOptions& opts = {}) {
  detail::CheckReporter rep(os);
  std::mt19937_64 gen(opts.seed);

  // Adjoint matvec identity <Tx, y> == <x, T^T y>.
  {
    double worst = 0.0;
    std::uniform_int_distribution<std::size_t> pick_n(2, 64);
    std::uniform_int_distribution<std::size_t> pick_len(1, 8);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = pick_n(gen);
      ToeplitzSection sec(detail::random_coeffs(gen, pick_len(gen)), n);
      std::vector<double> x(n), y(n);
      for (auto& v : x) v = gauss(gen);
      for (auto& v : y) v = gauss(gen);
      const auto tx = toeplitz_matvec(sec, x);
      const auto tty = adjoint_matvec(sec, y);
      double lhs = 0.0, rhs = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        lhs += tx[i] * y[i];
        rhs += x[i] * tty[i];
        scale += std::abs(tx[i] * y[i]);
      }
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(scale, 1.0));
    }
    rep.check(worst <= 1e-12, "adjoint-identity",
              "max relative defect " + format_double(worst));
  }

  // Direct vs transform-based matvec agreement.
  {
    double worst = 0.0;
    std::uniform_int_distribution<std::size_t> pick_n(2, 1024);
    std::uniform_int_distribution<std::size_t> pick_len(1, 8);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = pick_n(gen);
      ToeplitzSection sec(detail::random_coeffs(gen, pick_len(gen)), n);
      std::vector<double> x(n);
      for (auto& v : x) v = gauss(gen);
      const auto yd = toeplitz_matvec(sec, x, MatvecPath::direct);
      const auto yt = toeplitz_matvec(sec, x, MatvecPath::transform);
      double diff = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        diff = std::max(diff, std::abs(yd[i] - yt[i]));
        scale = std::max(scale, std::abs(yd[i]));
      }
      worst = std::max(worst, diff / std::max(scale, 1.0));
    }
    rep.check(worst <= 1e-12, "matvec-paths", "max relative gap " + format_double(worst));
  }

  // Power iteration stays below the dense oracle and converges to it.
  {
    bool ok = true;
    double worst_rel = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      ToeplitzSection sec(detail::random_coeffs(gen, 6), 48);
      const double exact = operator_norm_dense(sec);
      const NormEstimate est = operator_norm_power(sec, 1e-12, 100000, opts.seed + trial);
      if (est.value > exact + 1e-12) ok = false;
      worst_rel = std::max(worst_rel, std::abs(est.value - exact) / std::max(exact, 1e-300));
    }
    rep.check(ok && worst_rel <= 1e-8, "power-vs-dense",
              "worst relative error " + format_double(worst_rel));
  }

  // Product identity residual for banded symbols.
  {
    double worst = 0.0;
    std::uniform_int_distribution<long> pick_n(2, 64);
    std::uniform_int_distribution<long> pick_band(0, 4);
    for (int trial = 0; trial < 50; ++trial) {
      const long n = pick_n(gen);
      const long ba = pick_band(gen);
      const long bb = pick_band(gen);
      LaurentSymbol a{detail::random_coeffs(gen, static_cast<std::size_t>(2 * ba + 1)), -ba};
      LaurentSymbol b{detail::random_coeffs(gen, static_cast<std::size_t>(2 * bb + 1)), -bb};
      const long band = std::max(a.band(), b.band());
      worst = std::max(worst, widom_residual(a, b, n, n + 2 * band));
    }
    rep.check(worst <= 1e-10, "widom-identity", "max residual " + format_double(worst));
  }

  // Squared trig polynomial coefficients and the l2 lower bound.
  {
    bool ok = true;
    std::string note = "coefficient pattern and l2 bound hold for m,t <= 16";
    for (std::size_t m = 1; m <= 16 && ok; ++m) {
      const TrigPolynomial p = trig_poly(m, 2);
      for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
        const double want = k <= m ? static_cast<double>(k) + 1.0
                                   : static_cast<double>(2 * m - k) + 1.0;
        if (p.coeffs[k] != want) {
          ok = false;
          note = "squared polynomial coefficients differ at m=" + std::to_string(m);
          break;
        }
      }
    }
    for (std::size_t m = 1; m <= 16 && ok; ++m) {
      for (std::size_t t = 1; t <= 16; ++t) {
        const auto chk = trig_poly_l2_check(m, t);
        if (!(chk.exact >= chk.lower)) {
          ok = false;
          note = "l2 bound violated at m=" + std::to_string(m) + " t=" + std::to_string(t);
          break;
        }
      }
    }
    rep.check(ok, "trig-poly", note);
  }

  // Closed-form tridiagonal top eigenvalue vs a dense eigensolve.
  {
    double worst = 0.0;
    for (const double a0 : {0.5, 1.0, 2.0}) {
      for (const double a1 : {0.0, 1.0, 1.5}) {
        for (const std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{5},
                                    std::size_t{16}, std::size_t{64}}) {
          const auto ni = static_cast<Eigen::Index>(n);
          Eigen::MatrixXd k = Eigen::MatrixXd::Zero(ni, ni);
          for (Eigen::Index i = 0; i < ni; ++i) {
            k(i, i) = a0 * a0 + a1 * a1;
            if (i + 1 < ni) {
              k(i, i + 1) = a0 * a1;
              k(i + 1, i) = a0 * a1;
            }
          }
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
          worst = std::max(worst, std::abs(es.eigenvalues().maxCoeff() -
                                           tridiag_lambda_max(a0, a1, n)));
        }
      }
    }
    rep.check(worst <= 1e-12, "tridiag-closed-form", "max defect " + format_double(worst));
  }

  // Scalar inequalities used by the sharpness argument, on dense grids.
  {
    bool ok = true;
    std::string note = "all grids pass at 1e-10";
    const double kq = (8.0 / (kPi * kPi)) * (2.0 - std::sqrt(2.0));
    for (int i = 0; i <= 4096; ++i) {
      const double x = (kPi / 4.0) * i / 4096.0;
      if (1.0 - std::cos(x) < kq * x * x - 1e-10) {
        ok = false;
        note = "1-cos(x) quadratic minorant fails at x=" + format_double(x);
        break;
      }
    }
    if (ok) {
      for (double s = 0.25; s <= 16.0 && ok; s *= 2.0) {
        for (double t = 0.25; t <= 16.0; t *= 1.5) {
          if (std::sqrt(t) > std::sqrt(s) + (t - s) / (2.0 * std::sqrt(s)) + 1e-10) {
            ok = false;
            note = "concavity tangent fails at s=" + format_double(s);
            break;
          }
        }
      }
    }
    if (ok) {
      for (int i = -4096; i <= 4096; ++i) {
        const double th = (kPi / 2.0) * i / 4096.0;
        if (std::abs(std::sin(th)) < (2.0 / kPi) * std::abs(th) - 1e-10) {
          ok = false;
          note = "sine minorant fails at theta=" + format_double(th);
          break;
        }
      }
    }
    if (ok) {
      for (int t = 1; t <= 64 && ok; t *= 2) {
        for (int i = -2048; i <= 2048; ++i) {
          const double th = (0.5 / t) * i / 2048.0;
          const double ratio = th == 0.0 ? t : std::sin(t * th) / std::sin(th);
          if (ratio < -1e-10 || ratio > t + 1e-10) {
            ok = false;
            note = "Dirichlet ratio bound fails at t=" + std::to_string(t);
            break;
          }
        }
      }
    }
    rep.check(ok, "inequality-grid", note);
  }

  // Partial sums of k^2 rho^(k-1) and k^2 rho^k against their closed forms.
  {
    double worst = 0.0;
    for (int r = 1; r <= 9; ++r) {
      const double rho = 0.1 * r;
      long double s1 = 0.0L, s2 = 0.0L;
      long double p = 1.0L;  // rho^(k-1)
      for (int k = 1; k <= 4000; ++k) {
        const long double term = static_cast<long double>(k) * k * p;
        s1 += term;
        s2 += term * rho;
        p *= rho;
      }
      const double om = 1.0 - rho;
      const double c1 = (1.0 + rho) / (om * om * om);
      const double c2 = rho * (1.0 + rho) / (om * om * om);
      worst = std::max(worst, std::abs(static_cast<double>(s1) - c1) / std::max(c1, 1.0));
      worst = std::max(worst, std::abs(static_cast<double>(s2) - c2) / std::max(c2, 1.0));
    }
    rep.check(worst <= 1e-10, "series-identities",
              "max relative defect " + format_double(worst));
  }

  // Gap-bound soundness spot check; the scales let a harness corrupt the
  // constants and watch this fail. The [1,1] rows sit in the n^-2 regime
  // where the leading constant carries the bound.
  {
    struct Spot {
      LtiSystem sys;
      std::vector<long> ns;
    };
    const std::vector<Spot> spots{
        {LtiSystem(SinglePole{0.5, 1.0, 1.0}), {8, 64, 256}},
        {LtiSystem(Fir{{1.0, 1.0}}), {512, 1024}},
    };
    bool ok = true;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (const auto& spot : spots) {
      const double hinf = hinf_norm(spot.sys).norm;
      const GammaOptimizer opt(spot.sys);
      for (const long n : spot.ns) {
        const ToeplitzSection sec(detail::impulse_coeffs(spot.sys, static_cast<std::size_t>(n)),
                                  static_cast<std::size_t>(n));
        const double gap = hinf - operator_norm_dense(sec);
        const auto [gamma_star, report] = opt.optimize(n);
        (void)gamma_star;
        const double bound = opts.c1_scale * report.breakdown.term_n2 +
                             opts.c2_scale * report.breakdown.term_n3;
        worst_margin = std::min(worst_margin, bound - gap);
        if (gap > bound + 1e-9) ok = false;
      }
    }
    rep.check(ok, "soundness-spot", "min bound margin " + format_double(worst_margin));
  }

  return rep.ok();
}

}  // namespace toepnorm

#endif  // TOEPNORM_VERIFY_HPP
