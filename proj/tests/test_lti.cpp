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

#include <catch2/catch.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "toepnorm/lti.hpp"

using namespace toepnorm;

namespace {

LtiSystem single_pole_111() { return LtiSystem(SinglePole{0.5, 1.0, 1.0}); }

// Independent series evaluation of an FIR response, used as a grid oracle.
std::complex<double> fir_series(const std::vector<double>& g, double theta, double radius) {
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t k = 0; k < g.size(); ++k)
    acc += g[k] * std::pow(std::complex<double>(radius * std::cos(theta),
                                                radius * std::sin(theta)),
                           -static_cast<double>(k));
  return acc;
}

}  // namespace

TEST_CASE("impulse response of the structured forms", "[lti]") {
  SECTION("single pole expands d0, c, c rho, c rho^2, ...") {
    const auto seq = impulse_response(single_pole_111(), 4);
    REQUIRE(seq.coeffs == std::vector<double>{1.0, 1.0, 0.5, 0.25});
  }

  SECTION("FIR pads with zeros and has no tail") {
    const auto seq = impulse_response(LtiSystem(Fir{{1.0, 1.0}}), 4);
    REQUIRE(seq.coeffs == std::vector<double>{1.0, 1.0, 0.0, 0.0});
    REQUIRE(seq.tail_bound == 0.0);
  }

  SECTION("state space iterates c^T A^(k-1) b") {
    Eigen::MatrixXd a(1, 1);
    a << 0.5;
    Eigen::VectorXd b(1), c(1);
    b << 1.0;
    c << 1.0;
    const LtiSystem sys(StateSpace{a, b, c, 0.0});

    // hand-iterated oracle
    std::vector<double> expect{0.0};
    double state = 1.0;  // b
    for (int k = 1; k < 3; ++k) {
      expect.push_back(state);
      state *= 0.5;
    }
    const auto seq = impulse_response(sys, 3);
    REQUIRE(seq.coeffs == expect);
    REQUIRE(seq.coeffs == std::vector<double>{0.0, 1.0, 0.5});
  }

  SECTION("n_terms = 0 is rejected") {
    REQUIRE_THROWS_AS(impulse_response(single_pole_111(), 0), std::invalid_argument);
  }

  SECTION("single pole tail bound dominates the next 100 dropped terms") {
    const std::size_t n = 10;
    const auto seq = impulse_response(single_pole_111(), n);
    double dropped = 0.0;
    for (std::size_t k = n; k <= n + 100; ++k)
      dropped += std::pow(0.5, static_cast<double>(k) - 1.0);
    REQUIRE(dropped <= seq.tail_bound + 1e-15);
  }

  SECTION("FIR tail counts the dropped coefficients") {
    const auto seq = impulse_response(LtiSystem(Fir{{1.0, -2.0, 3.0}}), 2);
    REQUIRE(seq.tail_bound == Approx(3.0));
  }
}

TEST_CASE("frequency response from the structured forms", "[lti]") {
  const auto sys = single_pole_111();

  SECTION("unit circle value at the peak") {
    REQUIRE(std::abs(frequency_response(sys, 0.0, 1.0) - 3.0) < 1e-14);
  }

  SECTION("resolvent evaluation inside the unit circle") {
    REQUIRE(std::abs(frequency_response(sys, 0.0, 0.75) - 5.0) < 1e-14);
  }

  SECTION("FIR cancellation at theta = pi") {
    REQUIRE(std::abs(frequency_response(LtiSystem(Fir{{1.0, 1.0}}), kPi, 1.0)) < 1e-14);
  }

  SECTION("radius at or below the stability radius is rejected") {
    REQUIRE_THROWS_AS(frequency_response(sys, 0.0, 0.5), std::domain_error);
    REQUIRE_THROWS_AS(frequency_response(sys, 0.0, 0.25), std::domain_error);
  }

  SECTION("state space matches a long truncated series") {
    Eigen::MatrixXd a(2, 2);
    a << 0.0, 0.81, 1.0, 0.0;
    Eigen::VectorXd b(2), c(2);
    b << 1.0, 0.5;
    c << 0.25, 1.0;
    const LtiSystem ss(StateSpace{a, b, c, 0.7});
    const auto g = impulse_response(ss, 2000).coeffs;
    for (const double theta : {0.0, 0.3, 1.0, 2.5}) {
      const auto direct = frequency_response(ss, theta, 1.0);
      std::complex<double> series(0.0, 0.0);
      for (std::size_t k = 0; k < g.size(); ++k)
        series += g[k] * std::polar(1.0, -theta * static_cast<double>(k));
      REQUIRE(std::abs(direct - series) < 1e-9);
    }
  }
}

TEST_CASE("stability radius of each form", "[lti]") {
  REQUIRE(stability_radius(LtiSystem(Fir{{3.0, 2.0, 1.0}})) == 0.0);
  REQUIRE(stability_radius(single_pole_111()) == 0.5);

  Eigen::MatrixXd a(2, 2);
  a << 0.0, 0.81, 1.0, 0.0;
  Eigen::VectorXd b(2), c(2);
  b << 1.0, 0.0;
  c << 0.0, 1.0;
  REQUIRE(stability_radius(LtiSystem(StateSpace{a, b, c, 0.0})) == Approx(0.9).margin(1e-12));

  SECTION("unstable state space is rejected at construction") {
    Eigen::MatrixXd bad(1, 1);
    bad << 1.0;
    REQUIRE_THROWS_AS(LtiSystem(StateSpace{bad, b.head(1), c.head(1), 0.0}),
                      UnstableSystemError);
  }

  SECTION("pole modulus outside (0,1) is rejected") {
    REQUIRE_THROWS_AS(LtiSystem(SinglePole{1.0, 1.0, 0.0}), UnstableSystemError);
    REQUIRE_THROWS_AS(LtiSystem(SinglePole{1.5, 1.0, 0.0}), UnstableSystemError);
    REQUIRE_THROWS_AS(LtiSystem(SinglePole{0.0, 1.0, 0.0}), std::invalid_argument);
  }

  SECTION("empty FIR is rejected") {
    REQUIRE_THROWS_AS(LtiSystem(Fir{{}}), std::invalid_argument);
  }
}

TEST_CASE("hinf norm by grid plus refinement", "[lti]") {
  SECTION("nonnegative FIR peaks at zero with norm = coefficient sum") {
    const auto r = hinf_norm(LtiSystem(Fir{{1.0, 1.0}}));
    REQUIRE(r.norm == Approx(2.0).margin(1e-9));
    REQUIRE(r.theta0 == 0.0);
  }

  SECTION("single pole example") {
    const auto r = hinf_norm(single_pole_111());
    REQUIRE(r.norm == Approx(3.0).margin(1e-9));
    REQUIRE(r.theta0 == 0.0);
  }

  SECTION("two-sided peak reports the positive frequency") {
    // |1 - e^{-2j theta}| = 2 |sin theta|, maximal at +/- pi/2.
    const std::vector<double> g{1.0, 0.0, -1.0};
    const auto r = hinf_norm(LtiSystem(Fir{g}));
    REQUIRE(r.norm == Approx(2.0).margin(1e-9));
    REQUIRE(r.theta0 == Approx(kPi / 2.0).margin(1e-6));

    // independent dense-grid oracle over the whole circle
    double best = 0.0;
    for (int i = 0; i < 200001; ++i) {
      const double th = -kPi + 2.0 * kPi * i / 200000.0;
      best = std::max(best, std::abs(fir_series(g, th, 1.0)));
    }
    REQUIRE(r.norm >= best - 1e-6);
  }

  SECTION("norm dominates every sampled frequency up to the error bound") {
    const auto sys = single_pole_111();
    const auto r = hinf_norm(sys);
    for (int i = 0; i <= 9999; ++i) {
      const double th = kPi * i / 9999.0;
      REQUIRE(std::abs(frequency_response(sys, th, 1.0)) <= r.norm + r.error_bound + 1e-12);
    }
  }

  SECTION("tolerance must be positive") {
    REQUIRE_THROWS_AS(hinf_norm(single_pole_111(), 0.0), std::invalid_argument);
  }

  SECTION("state space norm matches a dense series-grid oracle") {
    Eigen::MatrixXd a(2, 2);
    a << 0.0, 0.81, 1.0, 0.0;
    Eigen::VectorXd b(2), c(2);
    b << 1.0, 0.5;
    c << 0.25, 1.0;
    const LtiSystem sys(StateSpace{a, b, c, 0.7});
    const auto r = hinf_norm(sys);

    const auto g = impulse_response(sys, 3000).coeffs;
    double best = 0.0;
    for (int i = 0; i <= 20000; ++i) {
      const double th = kPi * i / 20000.0;
      std::complex<double> acc(0.0, 0.0);
      for (std::size_t k = 0; k < g.size(); ++k)
        acc += g[k] * std::polar(1.0, -th * static_cast<double>(k));
      best = std::max(best, std::abs(acc));
    }
    REQUIRE(r.norm >= best - 1e-6);
    REQUIRE(r.norm <= best + r.error_bound + 1e-6);
  }
}

TEST_CASE("scaled norm on inner circles", "[lti]") {
  const auto sys = single_pole_111();

  SECTION("single pole closed form at gamma = 0.75") {
    REQUIRE(scaled_hinf_norm(sys, 0.75) == Approx(3.75).margin(1e-9));
  }

  SECTION("FIR value matches a dense oracle on the scaled circle") {
    // gamma * sup |1 + (gamma e^{j theta})^{-1}| = gamma * (1 + 1/gamma) = 1 + gamma.
    const std::vector<double> g{1.0, 1.0};
    double best = 0.0;
    for (int i = 0; i <= 100000; ++i) {
      const double th = -kPi + 2.0 * kPi * i / 100000.0;
      best = std::max(best, std::abs(fir_series(g, th, 0.5)));
    }
    REQUIRE(0.5 * best == Approx(1.5).margin(1e-9));
    REQUIRE(scaled_hinf_norm(LtiSystem(Fir{g}), 0.5) == Approx(1.5).margin(1e-9));
  }

  SECTION("approaches the plain norm as gamma approaches one") {
    const double limit = scaled_hinf_norm(sys, 1.0 - 1e-6);
    REQUIRE(limit == Approx(hinf_norm(sys).norm).margin(1e-3));
  }

  SECTION("positive systems peak at zero on every inner circle") {
    for (const double gamma : {0.55, 0.7, 0.85, 0.99}) {
      const double expect = gamma * std::abs(frequency_response(sys, 0.0, gamma));
      REQUIRE(scaled_hinf_norm(sys, gamma) == Approx(expect).margin(1e-12));
    }
  }

  SECTION("gamma outside (stability radius, 1) is rejected") {
    REQUIRE_THROWS_AS(scaled_hinf_norm(sys, 0.5), std::domain_error);
    REQUIRE_THROWS_AS(scaled_hinf_norm(sys, 1.0), std::domain_error);
  }
}

TEST_CASE("decay certificates", "[lti]") {
  const auto sys = single_pole_111();

  SECTION("exact certificate of the single pole form") {
    const auto cert = exact_decay_certificate(sys);
    REQUIRE(cert.has_value());
    REQUIRE(cert->d_bound == 1.0);
    REQUIRE(cert->c_const == 1.0);
    REQUIRE(cert->rho == 0.5);
  }

  SECTION("certificate from the scaled norm at gamma = 0.75") {
    const auto cert = decay_certificate(sys, 0.75);
    REQUIRE(cert.d_bound == 1.0);
    REQUIRE(cert.c_const == Approx(3.75).margin(1e-9));
    REQUIRE(cert.rho == 0.75);
  }

  SECTION("FIR certificate at gamma = 0.5 is valid on the whole prefix") {
    const auto fir = LtiSystem(Fir{{1.0, 1.0}});
    const auto cert = decay_certificate(fir, 0.5);
    REQUIRE(cert.d_bound == 1.0);
    REQUIRE(cert.c_const == Approx(1.5).margin(1e-9));
    const auto g = impulse_response(fir, 200).coeffs;
    for (std::size_t k = 1; k < g.size(); ++k) {
      REQUIRE(std::abs(g[k]) <=
              cert.c_const * std::pow(cert.rho, static_cast<double>(k) - 1.0) + 1e-12);
    }
  }

  SECTION("coefficient envelope holds on a gamma grid for k <= 200") {
    for (const auto& sys_under_test :
         {single_pole_111(), LtiSystem(SinglePole{0.8, 2.0, 0.0}),
          LtiSystem(Fir{{0.3, -1.0, 0.7, 0.2}})}) {
      const double rho = stability_radius(sys_under_test);
      const auto g = impulse_response(sys_under_test, 201).coeffs;
      for (int step = 1; step <= 4; ++step) {
        const double gamma = rho + (1.0 - rho) * step / 5.0;
        const auto cert = decay_certificate(sys_under_test, gamma);
        REQUIRE(std::abs(g[0]) <= cert.d_bound + 1e-12);
        for (std::size_t k = 1; k <= 200; ++k) {
          const double envelope =
              cert.c_const * std::pow(cert.rho, static_cast<double>(k) - 1.0);
          REQUIRE(std::abs(g[k]) <= envelope + 1e-9);
        }
      }
    }
  }

  SECTION("exact single pole certificate is tight on the prefix") {
    const auto cert = *exact_decay_certificate(sys);
    const auto g = impulse_response(sys, 201).coeffs;
    for (std::size_t k = 1; k <= 200; ++k)
      REQUIRE(std::abs(g[k]) <=
              cert.c_const * std::pow(cert.rho, static_cast<double>(k) - 1.0) + 1e-15);
  }

  SECTION("long FIR admits no exact geometric certificate") {
    REQUIRE_FALSE(exact_decay_certificate(LtiSystem(Fir{{1.0, 1.0, 1.0}})).has_value());
  }
}
