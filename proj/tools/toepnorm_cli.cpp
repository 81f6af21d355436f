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

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "toepnorm/toepnorm.hpp"

namespace {

struct DescriptorError {
  std::string message;
};

toepnorm::LtiSystem load_system(const std::string& descriptor) {
  try {
    std::string text = descriptor;
    const auto first = descriptor.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || descriptor[first] != '{') {
      std::ifstream in(descriptor);
      if (!in) throw std::invalid_argument("cannot open system descriptor file '" + descriptor + "'");
      std::ostringstream buf;
      buf << in.rdbuf();
      text = buf.str();
    }
    return toepnorm::parse_lti_system(std::string_view(text));
  } catch (const toepnorm::UnstableSystemError& e) {
    throw DescriptorError{std::string("unstable system rejected: ") + e.what()};
  } catch (const std::invalid_argument& e) {
    throw DescriptorError{e.what()};
  }
}

std::vector<long> make_n_list(const std::vector<long>& explicit_n, long nmin, long nmax,
                              long points) {
  std::set<long> values;
  for (long n : explicit_n) values.insert(n);
  if (explicit_n.empty()) {
    if (nmin < 1 || nmax < nmin || points < 1)
      throw std::invalid_argument("invalid n range: require 1 <= nmin <= nmax, points >= 1");
    if (points == 1) {
      values.insert(nmin);
    } else {
      const double lo = std::log(static_cast<double>(nmin));
      const double hi = std::log(static_cast<double>(nmax));
      for (long i = 0; i < points; ++i) {
        const double f = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        values.insert(std::lround(std::exp(f)));
      }
    }
  }
  return {values.begin(), values.end()};
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output file '" + path + "'");
  return file;
}

double section_norm(const toepnorm::LtiSystem& sys, long n, std::uint64_t seed,
                    bool* used_dense = nullptr) {
  const auto sec = toepnorm::toeplitz_section_of(sys, static_cast<std::size_t>(n));
  if (static_cast<std::size_t>(n) <= toepnorm::kDenseNormLimit) {
    if (used_dense) *used_dense = true;
    return toepnorm::operator_norm_dense(sec);
  }
  if (used_dense) *used_dense = false;
  return toepnorm::operator_norm_power(sec, 1e-12, 500000, seed).value;
}

int run(int argc, char** argv) {
  CLI::App app{"Finite Toeplitz sections and H-infinity norms: bounds, sweeps, experiments"};
  app.require_subcommand(1);

  std::string system_spec;
  std::vector<long> n_values;
  long nmin = 3, nmax = 512, points = 20;
  double eps = 0.1;
  double sigma = 0.0;
  double tol = 1e-9;
  double gamma_value = 0.0;
  std::uint64_t seed = 1;
  std::string out_path;
  bool self_verify = false;
  long horizon = 128;
  long iters = 100;
  long repeats = 1;
  std::vector<double> a_values{1.0, 10.0, 100.0};

  auto add_system_flag = [&](CLI::App* cmd) {
    cmd->add_option("--system", system_spec, "system descriptor: JSON file path or inline JSON")
        ->required();
  };
  auto add_n_flags = [&](CLI::App* cmd) {
    cmd->add_option("--n", n_values, "explicit section sizes (overrides the range)");
    cmd->add_option("--nmin", nmin, "smallest section size");
    cmd->add_option("--nmax", nmax, "largest section size");
    cmd->add_option("--points", points, "number of log-spaced sizes in [nmin, nmax]");
  };

  CLI::App* cmd_norm = app.add_subcommand("norm", "H-infinity norm and section norms");
  add_system_flag(cmd_norm);
  cmd_norm->add_option("--n", n_values, "section sizes to evaluate");
  cmd_norm->add_option("--tol", tol, "H-infinity norm tolerance");
  cmd_norm->add_option("--seed", seed, "seed for the power-iteration fallback");

  CLI::App* cmd_sweep = app.add_subcommand("sweep", "gap and bound sweep over section sizes (CSV)");
  add_system_flag(cmd_sweep);
  add_n_flags(cmd_sweep);
  CLI::Option* gamma_opt =
      cmd_sweep->add_option("--gamma", gamma_value, "fixed scaling radius (default: optimized per row)");
  cmd_sweep->add_option("--seed", seed, "seed for power-iteration rows above the dense limit");
  cmd_sweep->add_option("--out", out_path, "output CSV path (default: stdout)");
  cmd_sweep->add_flag("--verify", self_verify, "re-validate every emitted row");

  CLI::App* cmd_required = app.add_subcommand("required-n", "required section length for a target gap");
  add_system_flag(cmd_required);
  cmd_required->add_option("--eps", eps, "target additive gap")->required();

  CLI::App* cmd_power = app.add_subcommand("power", "query-driven power method on a noisy oracle");
  add_system_flag(cmd_power);
  cmd_power->add_option("--n", horizon, "query horizon (section size)");
  cmd_power->add_option("--iters", iters, "power iterations");
  cmd_power->add_option("--repeats", repeats, "queries averaged per matvec");
  cmd_power->add_option("--sigma", sigma, "noise standard deviation");
  cmd_power->add_option("--seed", seed, "oracle seed");
  cmd_power->add_option("--out", out_path, "trace CSV path (default: stdout)");

  CLI::App* cmd_gap = app.add_subcommand("gap", "section length vs identification trials (CSV)");
  cmd_gap->add_option("--a", a_values, "filter amplitudes for G = a + a z^-1");
  cmd_gap->add_option("--eps", eps, "target accuracy");
  cmd_gap->add_option("--sigma", sigma, "noise standard deviation");
  cmd_gap->add_option("--seed", seed, "noise seed");
  cmd_gap->add_option("--out", out_path, "output CSV path (default: stdout)");

  app.add_subcommand("verify", "run the identity and invariant self-checks");

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand("norm")) {
    const auto sys = load_system(system_spec);
    const auto h = toepnorm::hinf_norm(sys, tol);
    std::cout << "hinf_norm " << toepnorm::format_double(h.norm) << "\n"
              << "theta0 " << toepnorm::format_double(h.theta0) << "\n"
              << "error_bound " << toepnorm::format_double(h.error_bound) << "\n";
    std::set<long> wanted(n_values.begin(), n_values.end());
    for (long n : wanted) {
      if (n < 1) throw std::invalid_argument("section sizes must be >= 1");
      bool used_dense = false;
      const double v = section_norm(sys, n, seed, &used_dense);
      std::cout << "n " << n << " toeplitz_norm " << toepnorm::format_double(v) << " method "
                << (used_dense ? "dense" : "power") << "\n";
    }
    return 0;
  }

  if (app.got_subcommand("sweep")) {
    const auto sys = load_system(system_spec);
    const auto ns = make_n_list(n_values, nmin, nmax, points);
    for (long n : ns)
      if (n < 3) throw std::invalid_argument("sweep requires section sizes >= 3");

    const double hinf = toepnorm::hinf_norm(sys).norm;
    const toepnorm::GammaOptimizer opt(sys);
    std::vector<toepnorm::SweepRow> rows;
    rows.reserve(ns.size());
    const bool fixed_gamma = gamma_opt->count() > 0;
    for (long n : ns) {
      const double tnorm = section_norm(sys, n, seed);
      const toepnorm::GapBoundReport report =
          fixed_gamma ? opt.bound_at(gamma_value, n) : opt.optimize(n).second;
      rows.push_back({n, tnorm, hinf, hinf - tnorm, report.gap_bound, report.gamma});
    }

    std::ofstream file;
    toepnorm::write_sweep_csv(open_output(file, out_path), rows);

    if (self_verify) {
      for (const auto& row : rows) {
        const auto recheck = toepnorm::finite_section_gap_bound(sys, row.gamma_star, row.n);
        const bool bound_matches =
            std::abs(recheck.gap_bound - row.theorem1_bound) <=
            1e-9 * std::max(1.0, std::abs(recheck.gap_bound));
        if (!bound_matches || row.gap > row.theorem1_bound + 1e-9) {
          std::cerr << "self-check failed at n=" << row.n << "\n";
          return 1;
        }
      }
      std::cerr << "self-check: ok (" << rows.size() << " rows)\n";
    }
    return 0;
  }

  if (app.got_subcommand("required-n")) {
    const auto sys = load_system(system_spec);
    try {
      const long n = toepnorm::required_length(sys, eps);
      const auto [gamma_star, report] = toepnorm::optimize_gamma(sys, n);
      (void)gamma_star;
      nlohmann::json j = report;
      std::cout << "required_n " << n << "\n" << j.dump(2) << "\n";
      return 0;
    } catch (const toepnorm::BoundTooWeakError& e) {
      nlohmann::json j = e.report;
      std::cerr << "error: " << e.what() << "\n" << j.dump(2) << "\n";
      return 1;
    }
  }

  if (app.got_subcommand("power")) {
    const auto sys = load_system(system_spec);
    if (horizon < 1 || iters < 1 || repeats < 1)
      throw std::invalid_argument("power: --n, --iters and --repeats must be >= 1");
    toepnorm::QueryOracle oracle(sys, static_cast<std::size_t>(horizon), sigma, seed);
    const auto trace = toepnorm::oracle_power_method(oracle, static_cast<std::size_t>(iters),
                                                     static_cast<std::size_t>(repeats));
    std::ofstream file;
    auto& os = open_output(file, out_path);
    toepnorm::write_trace_csv(os, trace);
    os << "# final=" << toepnorm::format_double(trace.final.value)
       << " iterations=" << trace.final.iterations << " queries_used=" << trace.queries_used
       << " samples=" << trace.queries_used * static_cast<std::size_t>(horizon) << "\n";
    return 0;
  }

  if (app.got_subcommand("gap")) {
    const auto rows = toepnorm::gap_experiment(a_values, eps, sigma, seed);
    std::ofstream file;
    toepnorm::write_gap_csv(open_output(file, out_path), rows);
    return 0;
  }

  if (app.got_subcommand("verify")) {
    return toepnorm::run_verify(std::cout) ? 0 : 1;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const DescriptorError& e) {
    std::cerr << "error: " << e.message << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
