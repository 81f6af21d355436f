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

#ifndef TOEPNORM_PROTOCOLS_HPP
#define TOEPNORM_PROTOCOLS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "toepnorm/lti.hpp"
#include "toepnorm/toeplitz.hpp"

namespace toepnorm {

/// Simulated black-box access to a system over a fixed horizon: a query with
/// input u returns the first `horizon` samples of g * u plus fresh Gaussian
/// noise from a seeded stream. With `enforce_unit_input` the measurement
/// model additionally rejects inputs with ||u||_2 > 1.
class QueryOracle {
 public:
  QueryOracle(LtiSystem sys, std::size_t horizon, double noise_sigma, std::uint64_t seed,
              bool enforce_unit_input = false)
      : sys_(std::move(sys)),
        horizon_(horizon),
        sigma_(noise_sigma),
        seed_(seed),
        enforce_(enforce_unit_input),
        conv_(detail::impulse_coeffs(sys_, std::max<std::size_t>(horizon, 1)),
              std::max<std::size_t>(horizon, 1)),
        rng_(seed) {
    if (horizon_ < 1) throw std::invalid_argument("QueryOracle: horizon must be >= 1");
    if (sigma_ < 0.0) throw std::invalid_argument("QueryOracle: sigma must be >= 0");
    engine_.emplace(conv_, MatvecPath::automatic);
  }

  QueryOracle(const QueryOracle&) = delete;
  QueryOracle& operator=(const QueryOracle&) = delete;

  std::vector<double> query(const std::vector<double>& u) {
    if (u.size() != horizon_)
      throw std::invalid_argument("oracle_query: dimension mismatch");
    if (enforce_ && detail::norm2(u) > 1.0 + 1e-12)
      throw std::invalid_argument("oracle_query: ||u||_2 must be <= 1 in this query model");
    std::vector<double> y = engine_->forward(u);
    if (sigma_ > 0.0)
      for (auto& yi : y) yi += sigma_ * gauss_(rng_);
    ++count_;
    return y;
  }

  const LtiSystem& system() const { return sys_; }
  std::size_t horizon() const { return horizon_; }
  double noise_sigma() const { return sigma_; }
  std::uint64_t rng_seed() const { return seed_; }
  std::size_t query_count() const { return count_; }

 private:
  LtiSystem sys_;
  std::size_t horizon_;
  double sigma_;
  std::uint64_t seed_;
  bool enforce_;
  ToeplitzSection conv_;
  std::optional<detail::MatvecEngine> engine_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
  std::size_t count_ = 0;
};

inline std::vector<double> oracle_query(QueryOracle& oracle, const std::vector<double>& u) {
  return oracle.query(u);
}

struct PowerTrace {
  std::vector<double> estimates;  // one norm estimate per iteration
  NormEstimate final;
  std::size_t queries_used;
};

namespace detail {

inline std::vector<double> averaged_query(QueryOracle& oracle, const std::vector<double>& u,
                                          std::size_t repeats) {
  std::vector<double> acc = oracle.query(u);
  for (std::size_t r = 1; r < repeats; ++r) {
    const std::vector<double> y = oracle.query(u);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += y[i];
  }
  if (repeats > 1) {
    const double inv = 1.0 / static_cast<double>(repeats);
    for (auto& x : acc) x *= inv;
  }
  return acc;
}

}  // namespace detail

/// Power iteration on T_n^T T_n realized purely through oracle queries; the
/// adjoint matvec is flip, query, flip. With noise each matvec averages
/// `repeats` fresh queries. Start vector is seeded from the oracle's seed, so
/// a noiseless run reproduces operator_norm_power on the same seed exactly.
inline PowerTrace oracle_power_method(QueryOracle& oracle, std::size_t iters,
                                      std::size_t repeats = 1) {
  if (iters < 1) throw std::invalid_argument("oracle_power_method: iters must be >= 1");
  if (repeats < 1) throw std::invalid_argument("oracle_power_method: repeats must be >= 1");

  const std::size_t n = oracle.horizon();
  std::vector<double> v = detail::seeded_unit_gaussian(n, oracle.rng_seed());

  PowerTrace trace;
  trace.estimates.reserve(iters);
  const std::size_t queries_before = oracle.query_count();

  double value = 0.0;
  double prev = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= iters; ++k) {
    std::vector<double> w = detail::averaged_query(oracle, v, repeats);
    value = detail::norm2(w);
    trace.estimates.push_back(value);

    std::reverse(w.begin(), w.end());
    std::vector<double> z = detail::averaged_query(oracle, w, repeats);
    std::reverse(z.begin(), z.end());

    const double zn = detail::norm2(z);
    if (zn > 0.0) {
      for (auto& x : z) x /= zn;
      v = std::move(z);
    }
    if (k > 1) residual = std::abs(value - prev) / std::max(value, 1e-300);
    prev = value;
  }

  trace.final = NormEstimate{value, iters, true, residual};
  trace.queries_used = oracle.query_count() - queries_before;
  return trace;
}

struct FirLsEstimate {
  double g0_hat;
  double g1_hat;
  double hinf_err_bound;
};

/// Peak norm of the difference of two length-2 FIR responses; for real
/// coefficients this is exactly the sum of coefficient errors.
inline double fir_pair_hinf_error(double g0_hat, double g1_hat, double g0_true,
                                  double g1_true) {
  return std::abs(g0_hat - g0_true) + std::abs(g1_hat - g1_true);
}

/// Identifies a length-2 FIR filter from repeated unit impulses through a
/// horizon-2 oracle, averaging the responses. The reported error bound is
/// measured against the oracle's own system (simulation truth).
inline FirLsEstimate fir_least_squares(QueryOracle& oracle, std::size_t trials) {
  if (trials < 1) throw std::invalid_argument("fir_least_squares: trials must be >= 1");
  if (oracle.horizon() != 2)
    throw std::invalid_argument("fir_least_squares: oracle horizon must be 2");
  const auto* fir = std::get_if<Fir>(&oracle.system().form());
  if (fir == nullptr || fir->coeffs.size() > 2)
    throw std::invalid_argument("fir_least_squares: oracle system must be a length-2 FIR");

  const std::vector<double> impulse{1.0, 0.0};
  double s0 = 0.0;
  double s1 = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::vector<double> y = oracle.query(impulse);
    s0 += y[0];
    s1 += y[1];
  }
  const double g0_hat = s0 / static_cast<double>(trials);
  const double g1_hat = s1 / static_cast<double>(trials);

  const double g0 = fir->coeffs.empty() ? 0.0 : fir->coeffs[0];
  const double g1 = fir->coeffs.size() > 1 ? fir->coeffs[1] : 0.0;
  return FirLsEstimate{g0_hat, g1_hat, fir_pair_hinf_error(g0_hat, g1_hat, g0, g1)};
}

struct GapExperimentRow {
  double a;
  double eps;
  long n_star_toeplitz;
  long trials_fir;
  double fir_err;
  bool hit_dense_limit;
};

namespace detail {

struct SectionGapSearch {
  long n_star;
  bool hit_limit;
};

/// Smallest n with 2a - ||T_n([a,a])|| <= eps, by doubling plus bisection on
/// the monotone gap. Marks the row when the dense limit is reached first.
inline SectionGapSearch section_gap_search(double a, double eps, std::size_t dense_limit) {
  std::map<long, double> memo;
  auto gap = [&](long n) {
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    const ToeplitzSection sec({a, a}, static_cast<std::size_t>(n));
    const double g = 2.0 * a - operator_norm_dense(sec, dense_limit);
    memo.emplace(n, g);
    return g;
  };

  const long limit = static_cast<long>(dense_limit);
  if (gap(1) <= eps) return {1, false};
  long lo = 1;
  long hi = 1;
  for (;;) {
    hi = std::min(limit, hi * 2);
    if (gap(hi) <= eps) break;
    lo = hi;
    if (hi == limit) return {limit, true};
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (gap(mid) <= eps)
      hi = mid;
    else
      lo = mid;
  }
  return {hi, false};
}

}  // namespace detail

/// For each a: section length needed for the norm of T_n([a,a]) to come
/// within eps of 2a, versus the number of noisy trials needed to identify
/// the same filter to error eps. Each trial count probe restarts the noise
/// stream from `seed`, so the identification side is reproducible and does
/// not depend on a.
inline std::vector<GapExperimentRow> gap_experiment(const std::vector<double>& a_values,
                                                    double eps, double sigma,
                                                    std::uint64_t seed,
                                                    std::size_t dense_limit = kDenseNormLimit) {
  if (!(eps > 0.0)) throw std::invalid_argument("gap_experiment: eps must be > 0");
  std::vector<GapExperimentRow> rows;
  rows.reserve(a_values.size());
  for (const double a : a_values) {
    const auto toeplitz_side = detail::section_gap_search(a, eps, dense_limit);

    long trials = 0;
    double err = 0.0;
    for (long t = 1; t <= (1L << 20); t *= 2) {
      QueryOracle oracle(LtiSystem(Fir{{a, a}}), 2, sigma, seed, true);
      const FirLsEstimate est = fir_least_squares(oracle, static_cast<std::size_t>(t));
      if (est.hinf_err_bound <= eps) {
        trials = t;
        err = est.hinf_err_bound;
        break;
      }
    }
    if (trials == 0)
      throw std::runtime_error("gap_experiment: trial search exceeded 2^20 trials");

    rows.push_back(GapExperimentRow{a, eps, toeplitz_side.n_star, trials, err,
                                    toeplitz_side.hit_limit});
  }
  return rows;
}

}  // namespace toepnorm

#endif  // TOEPNORM_PROTOCOLS_HPP
