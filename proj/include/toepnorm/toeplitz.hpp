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

#ifndef TOEPNORM_TOEPLITZ_HPP
#define TOEPNORM_TOEPLITZ_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "toepnorm/fft.hpp"

namespace toepnorm {

/// Causal (lower triangular) n x n Toeplitz section. Entry (j,k) is
/// symbol[j-k] for j >= k and 0 otherwise; symbol entries beyond the stored
/// prefix are zero.
struct ToeplitzSection {
  std::vector<double> symbol;
  std::size_t n;

  ToeplitzSection(std::vector<double> symbol_coeffs, std::size_t size)
      : symbol(std::move(symbol_coeffs)), n(size) {
    if (n < 1) throw std::invalid_argument("ToeplitzSection: n must be >= 1");
    if (symbol.empty()) throw std::invalid_argument("ToeplitzSection: empty symbol");
  }
};

enum class MatvecPath { automatic, direct, transform };

/// Direct convolution below this size, transform-based above.
inline constexpr std::size_t kDirectMatvecLimit = 256;

/// Dense-oracle size guard.
inline constexpr std::size_t kDenseNormLimit = 2048;

class DenseLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<double> matvec_direct(const ToeplitzSection& sec,
                                         const std::vector<double>& x) {
  const std::size_t n = sec.n;
  const std::size_t len = std::min(sec.symbol.size(), n);
  std::vector<double> y(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double xk = x[k];
    if (xk == 0.0) continue;
    const std::size_t jmax = std::min(n, k + len);
    for (std::size_t j = k; j < jmax; ++j) y[j] += sec.symbol[j - k] * xk;
  }
  return y;
}

/// Transform path state: the padded symbol spectrum is fixed per section, so
/// repeated matvecs (power iteration) reuse it.
class MatvecEngine {
 public:
  MatvecEngine(const ToeplitzSection& sec, MatvecPath path)
      : sec_(sec),
        transform_(path == MatvecPath::transform ||
                   (path == MatvecPath::automatic && sec.n > kDirectMatvecLimit)) {
    if (transform_) {
      padded_ = next_pow2(2 * sec.n);
      std::vector<double> head(sec.symbol.begin(),
                               sec.symbol.begin() +
                                   static_cast<std::ptrdiff_t>(std::min(sec.symbol.size(), sec.n)));
      spectrum_ = fft_of_real(head, padded_);
      work_.resize(padded_);
    }
  }

  std::vector<double> forward(const std::vector<double>& x) {
    if (x.size() != sec_.n)
      throw std::invalid_argument("toeplitz_matvec: dimension mismatch");
    if (!transform_) return matvec_direct(sec_, x);
    std::fill(work_.begin(), work_.end(), std::complex<double>(0.0, 0.0));
    for (std::size_t i = 0; i < sec_.n; ++i) work_[i] = {x[i], 0.0};
    fft_inplace(work_, false);
    for (std::size_t i = 0; i < padded_; ++i) work_[i] *= spectrum_[i];
    fft_inplace(work_, true);
    std::vector<double> y(sec_.n);
    for (std::size_t i = 0; i < sec_.n; ++i) y[i] = work_[i].real();
    return y;
  }

  /// Transpose action through the time-reversal identity J T J = T^T.
  std::vector<double> adjoint(const std::vector<double>& u) {
    std::vector<double> r(u.rbegin(), u.rend());
    std::vector<double> y = forward(r);
    std::reverse(y.begin(), y.end());
    return y;
  }

 private:
  const ToeplitzSection& sec_;
  bool transform_;
  std::size_t padded_ = 0;
  std::vector<std::complex<double>> spectrum_;
  std::vector<std::complex<double>> work_;
};

inline std::vector<double> seeded_unit_gaussian(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v(n);
  double ss = 0.0;
  for (auto& x : v) {
    x = gauss(gen);
    ss += x * x;
  }
  const double nrm = std::sqrt(ss);
  if (nrm == 0.0) {
    v.assign(n, 0.0);
    v[0] = 1.0;
    return v;
  }
  for (auto& x : v) x /= nrm;
  return v;
}

inline double norm2(const std::vector<double>& v) {
  double ss = 0.0;
  for (double x : v) ss += x * x;
  return std::sqrt(ss);
}

}  // namespace detail

/// y_j = sum_{k<=j} symbol[j-k] x_k.
inline std::vector<double> toeplitz_matvec(const ToeplitzSection& sec,
                                           const std::vector<double>& x,
                                           MatvecPath path = MatvecPath::automatic) {
  detail::MatvecEngine eng(sec, path);
  return eng.forward(x);
}

/// T^T u computed as flip(T flip(u)).
inline std::vector<double> adjoint_matvec(const ToeplitzSection& sec,
                                          const std::vector<double>& u,
                                          MatvecPath path = MatvecPath::automatic) {
  detail::MatvecEngine eng(sec, path);
  return eng.adjoint(u);
}

inline Eigen::MatrixXd dense_matrix(const ToeplitzSection& sec) {
  const auto n = static_cast<Eigen::Index>(sec.n);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  const auto len = static_cast<Eigen::Index>(std::min(sec.symbol.size(), sec.n));
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index d = 0; d < len && k + d < n; ++d) t(k + d, k) = sec.symbol[d];
  return t;
}

namespace detail {

/// Gram matrix T^T T assembled in O(n^2) from prefix cross-correlations:
/// (T^T T)_{ij} = sum_{m=0}^{n-1-max(i,j)} g_{m+|i-j|} g_m.
inline Eigen::MatrixXd gram_matrix(const ToeplitzSection& sec) {
  const std::size_t n = sec.n;
  const std::size_t len = std::min(sec.symbol.size(), n);
  auto g = [&](std::size_t idx) { return idx < len ? sec.symbol[idx] : 0.0; };
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
  for (std::size_t d = 0; d < std::min(n, len); ++d) {
    double acc = 0.0;
    for (std::size_t j = n; j-- > d;) {
      acc += g(n - 1 - j + d) * g(n - 1 - j);
      m(static_cast<Eigen::Index>(j - d), static_cast<Eigen::Index>(j)) = acc;
      m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j - d)) = acc;
    }
  }
  return m;
}

}  // namespace detail

/// Largest singular value via a dense symmetric eigensolve of T^T T.
/// The oracle path; O(n^3) and guarded by dense_limit.
inline double operator_norm_dense(const ToeplitzSection& sec,
                                  std::size_t dense_limit = kDenseNormLimit) {
  if (sec.n > dense_limit)
    throw DenseLimitError("operator_norm_dense: section size exceeds the dense limit");
  const Eigen::MatrixXd m = detail::gram_matrix(sec);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const double lmax = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(lmax, 0.0));
}

struct NormEstimate {
  double value;
  std::size_t iterations;
  bool converged;
  double residual;  // last relative change of the estimate
};

/// Power iteration on T^T T from a seeded Gaussian start. The estimate
/// ||T v|| of a unit vector v never exceeds the true operator norm.
/// Convergence requires the relative change to stay below tol for a window
/// of consecutive iterations; a single sub-tol step can be a coincidence of
/// rounding on an otherwise drifting plateau.
inline NormEstimate operator_norm_power(const ToeplitzSection& sec, double tol = 1e-12,
                                        std::size_t max_iters = 200000,
                                        std::uint64_t seed = 1) {
  if (!(tol > 0.0)) throw std::invalid_argument("operator_norm_power: tol must be > 0");
  constexpr std::size_t kStableWindow = 64;
  detail::MatvecEngine eng(sec, MatvecPath::automatic);

  std::vector<double> v = detail::seeded_unit_gaussian(sec.n, seed);
  std::vector<double> w = eng.forward(v);
  double value_prev = detail::norm2(w);
  double value = value_prev;
  double residual = std::numeric_limits<double>::infinity();
  std::size_t stable = 0;

  for (std::size_t k = 1; k <= max_iters; ++k) {
    std::vector<double> z = eng.adjoint(w);
    const double zn = detail::norm2(z);
    if (zn == 0.0) return NormEstimate{0.0, k, true, 0.0};
    for (auto& x : z) x /= zn;
    v = std::move(z);
    w = eng.forward(v);
    value = detail::norm2(w);
    residual = std::abs(value - value_prev) / std::max(value, 1e-300);
    stable = residual < tol ? stable + 1 : 0;
    if (stable >= kStableWindow) return NormEstimate{value, k, true, residual};
    value_prev = value;
  }
  return NormEstimate{value, max_iters, false, residual};
}

// ---------------------------------------------------------------------------
// Verification operations: algebraic identities used by the norm bounds.
// ---------------------------------------------------------------------------

/// Fourier coefficients of (1 + z + ... + z^m)^t. Entries are integers held
/// in doubles: for m = t = 16 the coefficient sum is 17^16, past the 64-bit
/// integer range, and the l2 check only needs floating accuracy.
struct TrigPolynomial {
  std::size_t m;
  std::size_t t;
  std::vector<double> coeffs;  // length m*t + 1
};

inline TrigPolynomial trig_poly(std::size_t m, std::size_t t) {
  if (m < 1 || t < 1) throw std::invalid_argument("trig_poly: m and t must be >= 1");
  std::vector<double> acc{1.0};
  const std::vector<double> base(m + 1, 1.0);
  for (std::size_t rep = 0; rep < t; ++rep) {
    std::vector<double> next(acc.size() + m, 0.0);
    for (std::size_t i = 0; i < acc.size(); ++i)
      for (std::size_t j = 0; j <= m; ++j) next[i + j] += acc[i] * base[j];
    acc = std::move(next);
  }
  return TrigPolynomial{m, t, std::move(acc)};
}

/// Degree m = ceil(n/2 - 1) pairing a section size with the test polynomial
/// used in the lower-bound certification; satisfies 2m < n <= 2(m+1).
inline std::size_t trig_poly_degree_for_section(std::size_t n) {
  if (n < 3) throw std::invalid_argument("trig_poly_degree_for_section: n must be >= 3");
  return (n + 1) / 2 - 1;
}

struct TrigPolyL2Check {
  double exact;  // integral of |p|^2 over the circle: 2 pi sum coeffs^2
  double lower;  // (16 / (9 pi)) t^{-1/2} (m+1)^{2t-1}, same convention
};

inline TrigPolyL2Check trig_poly_l2_check(std::size_t m, std::size_t t) {
  if (m * t > 10000) throw std::invalid_argument("trig_poly_l2_check: m*t too large");
  const TrigPolynomial p = trig_poly(m, t);
  double ss = 0.0;
  for (double c : p.coeffs) ss += c * c;
  const double pi = 3.14159265358979323846;
  const double exact = 2.0 * pi * ss;
  const double lower = (16.0 / (9.0 * pi)) / std::sqrt(static_cast<double>(t)) *
                       std::pow(static_cast<double>(m) + 1.0,
                                2.0 * static_cast<double>(t) - 1.0);
  return TrigPolyL2Check{exact, lower};
}

/// Two-sided (Laurent) symbol over a finite index window.
struct LaurentSymbol {
  std::vector<double> coeffs;
  long min_index;

  static LaurentSymbol causal(std::vector<double> c) { return {std::move(c), 0}; }

  double at(long k) const {
    const long off = k - min_index;
    if (off < 0 || off >= static_cast<long>(coeffs.size())) return 0.0;
    return coeffs[static_cast<std::size_t>(off)];
  }
  long max_index() const { return min_index + static_cast<long>(coeffs.size()) - 1; }
  long band() const { return std::max(std::abs(min_index), std::abs(max_index())); }
};

namespace detail {

inline Eigen::MatrixXd toeplitz_dense(const LaurentSymbol& a, long n) {
  Eigen::MatrixXd t(n, n);
  for (long j = 0; j < n; ++j)
    for (long k = 0; k < n; ++k) t(j, k) = a.at(j - k);
  return t;
}

inline Eigen::MatrixXd hankel_dense(const LaurentSymbol& a, long size) {
  // H(a) = (a_{j+k+1})
  Eigen::MatrixXd h(size, size);
  for (long j = 0; j < size; ++j)
    for (long k = 0; k < size; ++k) h(j, k) = a.at(j + k + 1);
  return h;
}

inline LaurentSymbol reflect(const LaurentSymbol& a) {
  // coefficients of a(z^-1)
  std::vector<double> c(a.coeffs.rbegin(), a.coeffs.rend());
  return LaurentSymbol{std::move(c), -a.max_index()};
}

inline LaurentSymbol convolve(const LaurentSymbol& a, const LaurentSymbol& b) {
  std::vector<double> c(a.coeffs.size() + b.coeffs.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
  return LaurentSymbol{std::move(c), a.min_index + b.min_index};
}

}  // namespace detail

/// Max-abs entry of T_n(a) T_n(b) - T_n(ab) + P_n H(a) H(b~) P_n + W_n H(a~) H(b) W_n,
/// each term built densely. Zero (to roundoff) for banded symbols when the
/// Hankel truncation covers the band, hence the precondition on `truncation`.
inline double widom_residual(const LaurentSymbol& a, const LaurentSymbol& b, long n,
                             long truncation) {
  const long band = std::max(a.band(), b.band());
  if (n < 1) throw std::invalid_argument("widom_residual: n must be >= 1");
  if (truncation < n + 2 * band)
    throw std::invalid_argument("widom_residual: truncation must be >= n + 2*band");

  const Eigen::MatrixXd ta = detail::toeplitz_dense(a, n);
  const Eigen::MatrixXd tb = detail::toeplitz_dense(b, n);
  const Eigen::MatrixXd tab = detail::toeplitz_dense(detail::convolve(a, b), n);

  const Eigen::MatrixXd ha = detail::hankel_dense(a, truncation);
  const Eigen::MatrixXd hb_ref = detail::hankel_dense(detail::reflect(b), truncation);
  const Eigen::MatrixXd ha_ref = detail::hankel_dense(detail::reflect(a), truncation);
  const Eigen::MatrixXd hb = detail::hankel_dense(b, truncation);

  const Eigen::MatrixXd p1 = (ha * hb_ref).topLeftCorner(n, n);
  const Eigen::MatrixXd q = (ha_ref * hb).topLeftCorner(n, n);
  Eigen::MatrixXd p2(n, n);
  for (long j = 0; j < n; ++j)
    for (long k = 0; k < n; ++k) p2(j, k) = q(n - 1 - j, n - 1 - k);

  const Eigen::MatrixXd residual = ta * tb - (tab - p1 - p2);
  return residual.cwiseAbs().maxCoeff();
}

inline double widom_residual(const std::vector<double>& a_causal,
                             const std::vector<double>& b_causal, long n, long truncation) {
  return widom_residual(LaurentSymbol::causal(a_causal), LaurentSymbol::causal(b_causal), n,
                        truncation);
}

/// Closed-form largest eigenvalue of the symmetric tridiagonal matrix with
/// diagonal a0^2 + a1^2 and off-diagonal a0 a1:
///   a0^2 + a1^2 + 2 a0 a1 cos(pi / (n+1)).
inline double tridiag_lambda_max(double a0, double a1, std::size_t n) {
  if (n < 1) throw std::invalid_argument("tridiag_lambda_max: n must be >= 1");
  if (a0 < 0.0 || a1 < 0.0)
    throw std::invalid_argument("tridiag_lambda_max: coefficients must be >= 0");
  const double pi = 3.14159265358979323846;
  return a0 * a0 + a1 * a1 +
         2.0 * a0 * a1 * std::cos(pi / (static_cast<double>(n) + 1.0));
}

}  // namespace toepnorm

#endif  // TOEPNORM_TOEPLITZ_HPP
