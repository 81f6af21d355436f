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

#ifndef TOEPNORM_IO_HPP
#define TOEPNORM_IO_HPP

#include <charconv>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "toepnorm/bounds.hpp"
#include "toepnorm/lti.hpp"
#include "toepnorm/protocols.hpp"
#include "toepnorm/toeplitz.hpp"

namespace toepnorm {

/// Locale-independent shortest-faithful formatting with 17 significant
/// digits, so emitted numbers round-trip to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

// --- system descriptors -----------------------------------------------------
//
// {"type":"fir","coeffs":[...]}
// {"type":"single_pole","rho":r,"c":c,"d0":d}
// {"type":"state_space","A":[[...]],"b":[...],"c":[...],"d0":d}

inline LtiSystem parse_lti_system(const nlohmann::json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "fir") {
      return LtiSystem(Fir{j.at("coeffs").get<std::vector<double>>()});
    }
    if (type == "single_pole") {
      return LtiSystem(SinglePole{j.at("rho").get<double>(), j.at("c").get<double>(),
                                  j.at("d0").get<double>()});
    }
    if (type == "state_space") {
      const auto rows = j.at("A").get<std::vector<std::vector<double>>>();
      const auto bv = j.at("b").get<std::vector<double>>();
      const auto cv = j.at("c").get<std::vector<double>>();
      const auto n = static_cast<Eigen::Index>(rows.size());
      Eigen::MatrixXd a(n, n);
      for (Eigen::Index r = 0; r < n; ++r) {
        if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)].size()) != n)
          throw std::invalid_argument("state_space descriptor: A must be square");
        for (Eigen::Index col = 0; col < n; ++col)
          a(r, col) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
      }
      Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(bv.data(),
                                                            static_cast<Eigen::Index>(bv.size()));
      Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(cv.data(),
                                                            static_cast<Eigen::Index>(cv.size()));
      return LtiSystem(StateSpace{std::move(a), std::move(b), std::move(c),
                                  j.at("d0").get<double>()});
    }
    throw std::invalid_argument("unknown system type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("invalid system descriptor: ") + e.what());
  }
}

inline LtiSystem parse_lti_system(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  return parse_lti_system(j);
}

// --- report serialization ---------------------------------------------------

inline void to_json(nlohmann::json& j, const BoundBreakdown& b) {
  j = nlohmann::json{{"m_norm", b.m_norm},           {"term_n2", b.term_n2},
                     {"term_n3", b.term_n3},         {"lower_bound", b.lower_bound},
                     {"c1", b.c1},                   {"c2", b.c2}};
}

inline void to_json(nlohmann::json& j, const GapBoundReport& r) {
  j = nlohmann::json{{"gamma", r.gamma},
                     {"g_gamma_norm", r.g_gamma_norm},
                     {"gap_bound", r.gap_bound},
                     {"n", r.n},
                     {"breakdown", r.breakdown}};
}

inline void to_json(nlohmann::json& j, const HinfResult& r) {
  j = nlohmann::json{{"norm", r.norm},
                     {"theta0", r.theta0},
                     {"grid_size", r.grid_size},
                     {"error_bound", r.error_bound}};
}

inline void to_json(nlohmann::json& j, const NormEstimate& e) {
  j = nlohmann::json{{"value", e.value},
                     {"iterations", e.iterations},
                     {"converged", e.converged},
                     {"residual", e.residual}};
}

// --- CSV outputs -------------------------------------------------------------

struct SweepRow {
  long n;
  double toeplitz_norm;
  double hinf;
  double gap;
  double theorem1_bound;
  double gamma_star;
};

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "n,toeplitz_norm,hinf_norm,gap,theorem1_bound,gamma_star\n";
  for (const auto& r : rows) {
    os << r.n << ',' << format_double(r.toeplitz_norm) << ',' << format_double(r.hinf) << ','
       << format_double(r.gap) << ',' << format_double(r.theorem1_bound) << ','
       << format_double(r.gamma_star) << '\n';
  }
}

inline void write_gap_csv(std::ostream& os, const std::vector<GapExperimentRow>& rows) {
  os << "a,eps,n_star_toeplitz,trials_fir,fir_err\n";
  for (const auto& r : rows) {
    os << format_double(r.a) << ',' << format_double(r.eps) << ',' << r.n_star_toeplitz << ','
       << r.trials_fir << ',' << format_double(r.fir_err) << '\n';
  }
}

inline void write_trace_csv(std::ostream& os, const PowerTrace& trace) {
  os << "iter,estimate\n";
  for (std::size_t i = 0; i < trace.estimates.size(); ++i)
    os << (i + 1) << ',' << format_double(trace.estimates[i]) << '\n';
}

}  // namespace toepnorm

#endif  // TOEPNORM_IO_HPP
