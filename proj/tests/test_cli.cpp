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
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct CliResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string base = "/tmp/toepnorm_cli_test_" + std::to_string(counter++);
  const std::string out_path = base + ".out";
  const std::string err_path = base + ".err";
  const std::string cmd =
      std::string(TOEPNORM_CLI_PATH) + " " + args + " >" + out_path + " 2>" + err_path;
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return r;
}

}  // namespace

TEST_CASE("norm subcommand", "[cli]") {
  const auto r = run_cli("norm --system '{\"type\":\"fir\",\"coeffs\":[1,1]}' --n 3");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.find("hinf_norm 2") != std::string::npos);
  REQUIRE(r.out.find("1.8019377") != std::string::npos);
  REQUIRE(r.out.find("method dense") != std::string::npos);

  const auto sp = run_cli("norm --system '{\"type\":\"single_pole\",\"rho\":0.5,\"c\":1,\"d0\":1}'");
  REQUIRE(sp.exit_code == 0);
  REQUIRE(sp.out.find("hinf_norm 3") != std::string::npos);
}

TEST_CASE("descriptor errors exit with code 2", "[cli]") {
  const auto malformed = run_cli("norm --system '{oops'");
  REQUIRE(malformed.exit_code == 2);
  REQUIRE(malformed.err.find("malformed JSON") != std::string::npos);

  const auto unstable =
      run_cli("norm --system '{\"type\":\"state_space\",\"A\":[[1.5]],\"b\":[1],\"c\":[1],\"d0\":0}'");
  REQUIRE(unstable.exit_code == 2);
  REQUIRE(unstable.err.find("unstable") != std::string::npos);
}

TEST_CASE("sweep subcommand emits validated CSV", "[cli]") {
  const std::string sys = "'{\"type\":\"single_pole\",\"rho\":0.5,\"c\":1,\"d0\":1}'";
  const auto r = run_cli("sweep --system " + sys + " --nmin 3 --nmax 96 --points 6 --verify");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.err.find("self-check: ok") != std::string::npos);

  std::istringstream csv(r.out);
  std::string header;
  std::getline(csv, header);
  REQUIRE(header == "n,toeplitz_norm,hinf_norm,gap,theorem1_bound,gamma_star");

  long prev_n = 0;
  int rows = 0;
  std::string line;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(fields, tok, ',')) vals.push_back(std::stod(tok));
    REQUIRE(vals.size() == 6);
    const long n = static_cast<long>(vals[0]);
    REQUIRE(n > prev_n);
    prev_n = n;
    const double gap = vals[3];
    const double bound = vals[4];
    REQUIRE(gap >= -1e-9);
    REQUIRE(gap <= bound + 1e-9);
    ++rows;
  }
  REQUIRE(rows == 6);

  SECTION("byte-deterministic across runs") {
    const auto again = run_cli("sweep --system " + sys + " --nmin 3 --nmax 96 --points 6 --verify");
    REQUIRE(again.out == r.out);
  }
}

TEST_CASE("sweep of the sharp FIR family decays quadratically", "[cli]") {
  const auto r = run_cli(
      "sweep --system '{\"type\":\"fir\",\"coeffs\":[1,1]}' "
      "--n 16 --n 32 --n 64 --n 128 --n 256 --n 512 --n 1024");
  REQUIRE(r.exit_code == 0);

  // regression of log(gap) on log(n) over the emitted rows
  std::istringstream csv(r.out);
  std::string line;
  std::getline(csv, line);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(fields, tok, ',')) vals.push_back(std::stod(tok));
    const double x = std::log(vals[0]);
    const double y = std::log(vals[3]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  REQUIRE(m == 7);
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  REQUIRE(slope >= -2.2);
  REQUIRE(slope <= -1.8);
}

TEST_CASE("degenerate single-row sweep", "[cli]") {
  const auto r = run_cli("sweep --system '{\"type\":\"fir\",\"coeffs\":[1,1]}' --n 3 --verify");
  REQUIRE(r.exit_code == 0);
  int rows = 0;
  std::istringstream csv(r.out);
  std::string line;
  std::getline(csv, line);
  while (std::getline(csv, line))
    if (!line.empty()) ++rows;
  REQUIRE(rows == 1);
}

TEST_CASE("required-n subcommand", "[cli]") {
  const auto r = run_cli(
      "required-n --system '{\"type\":\"single_pole\",\"rho\":0.5,\"c\":1,\"d0\":1}' --eps 0.5");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.find("required_n ") != std::string::npos);
  REQUIRE(r.out.find("gap_bound") != std::string::npos);
  REQUIRE(r.out.find("\"c1\"") != std::string::npos);
}

TEST_CASE("power subcommand traces the estimates", "[cli]") {
  const auto r = run_cli(
      "power --system '{\"type\":\"fir\",\"coeffs\":[1,1]}' --n 32 --iters 40 --seed 5");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.rfind("iter,estimate\n", 0) == 0);
  REQUIRE(r.out.find("# final=") != std::string::npos);
  REQUIRE(r.out.find("queries_used=80") != std::string::npos);
}

TEST_CASE("gap subcommand emits the experiment schema", "[cli]") {
  const auto r = run_cli("gap --a 1 --a 4 --eps 0.2 --sigma 0.1 --seed 3");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.rfind("a,eps,n_star_toeplitz,trials_fir,fir_err\n", 0) == 0);
  int rows = 0;
  std::istringstream csv(r.out);
  std::string line;
  std::getline(csv, line);
  while (std::getline(csv, line))
    if (!line.empty()) ++rows;
  REQUIRE(rows == 2);
}

TEST_CASE("verify subcommand passes and is deterministic", "[cli]") {
  const auto a = run_cli("verify");
  const auto b = run_cli("verify");
  REQUIRE(a.exit_code == 0);
  REQUIRE(a.out.find("[ ok ]") != std::string::npos);
  REQUIRE(a.out.find("[FAIL]") == std::string::npos);
  REQUIRE(a.out == b.out);
}
