// Copyright 2026 The mibound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "mibound/cli.hpp"
#include "mibound/config.hpp"
#include "test_util.hpp"

using mibound::testing::rel;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"mibound"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : storage) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = mibound::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) parts.push_back(field);
  if (!line.empty() && line.back() == sep) parts.emplace_back();
  return parts;
}

// Maps the first CSV column to the remaining fields.
std::map<std::string, std::vector<std::string>> rows(const std::string& csv) {
  std::map<std::string, std::vector<std::string>> table;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    auto parts = split(line, ',');
    if (parts.empty()) continue;
    const std::string key = parts.front();
    parts.erase(parts.begin());
    table[key] = parts;
  }
  return table;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mibound_test_cli_" + name);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
}

}  // namespace

TEST_CASE("bounds on the cos2 builtin") {
  const Run r = run({"bounds", "--model", "cos2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("bound,direction,units,value,ratio_to_van_trees,flags\n", 0) == 0);
  const auto t = rows(r.out);
  REQUIRE(t.count("oracle_mi") == 1);
  REQUIRE(t.count("mi_bound_finite_support") == 1);
  CHECK(std::stod(t.at("mi_bound_finite_support")[2]) ==
        rel(std::log1p(std::numbers::pi / 2), 1e-10));
  CHECK(std::stod(t.at("oracle_mi")[2]) == rel(1.0 - std::log(2.0), 1e-8));
  CHECK(std::stod(t.at("mse_bound_rectangle_closed_form")[2]) ==
        rel(0.087435954158342423, 1e-10));
  // Edge priors have divergent prior information.
  CHECK(t.at("efroimovich_mi_bound")[2].empty());
  CHECK(t.at("efroimovich_mi_bound")[4] == "P divergent");
  CHECK(t.at("van_trees")[4] == "P divergent");
  CHECK(r.err.find("cos2") != std::string::npos);
}

TEST_CASE("bounds in bits divides information rows by ln 2") {
  const auto nats = rows(run({"bounds", "--model", "cos2"}).out);
  const Run bits_run = run({"bounds", "--model", "cos2", "--units", "bits"});
  REQUIRE(bits_run.code == 0);
  const auto bits = rows(bits_run.out);
  CHECK(bits.at("oracle_mi")[1] == "bits");
  CHECK(std::stod(bits.at("mi_bound_finite_support")[2]) ==
        rel(std::stod(nats.at("mi_bound_finite_support")[2]) / std::log(2.0), 1e-10));
  CHECK(bits.at("oracle_bayes_mse")[2] == nats.at("oracle_bayes_mse")[2]);
}

TEST_CASE("gaussian prior rows and van Trees ratios") {
  const Run r = run({"bounds", "--model", "cos2-gaussian"});
  REQUIRE(r.code == 0);
  const auto t = rows(r.out);
  // cos^2 has constant Fisher information 4, so the closed forms apply.
  REQUIRE(t.count("mse_bound_gaussian_simplified") == 1);
  CHECK(std::stod(t.at("mse_bound_gaussian_simplified")[3]) ==
        rel(std::numbers::pi * std::numbers::e / 2, 1e-6));
  CHECK(t.at("efroimovich_mi_bound")[4].empty());
  const double efro = std::stod(t.at("efroimovich_mi_bound")[2]);
  const double oracle = std::stod(t.at("oracle_mi")[2]);
  CHECK(efro >= oracle);
  CHECK(oracle == rel(0.042971740026584206, 1e-6));
}

TEST_CASE("constant-Fisher gaussian exposes the pi e / 2 ratio") {
  const auto path = temp_file("gauss.yaml");
  write_text(path,
             "prior: {kind: gaussian, mean: 0, sigma: 1, points: 4001}\n"
             "model:\n  builtin: noon\n  gates: 1\n");
  const Run r = run({"bounds", "--model", path.string()});
  std::filesystem::remove(path);
  REQUIRE(r.code == 0);
  const auto t = rows(r.out);
  REQUIRE(t.count("mse_bound_gaussian_simplified") == 1);
  CHECK(std::stod(t.at("mse_bound_gaussian_simplified")[3]) ==
        rel(std::numbers::pi * std::numbers::e / 2, 1e-9));
  CHECK(std::stod(t.at("mse_bound_gaussian_exact")[2]) ==
        rel(0.12764619325678957, 1e-9));
}

TEST_CASE("mi subcommand") {
  const Run r = run({"mi", "--model", "cos2"});
  REQUIRE(r.code == 0);
  const auto t = rows(r.out);
  CHECK(std::stod(t.at("mi")[0]) == rel(1.0 - std::log(2.0), 1e-8));
  CHECK(std::stod(t.at("bayes_mse")[0]) == rel(0.41718229885476213, 1e-6));
  const double h_prior = std::stod(t.at("h_prior")[0]);
  CHECK(h_prior == rel(std::log(std::numbers::pi), 1e-9));
  const Run bits = run({"mi", "--model", "cos2", "--units", "bits"});
  CHECK(std::stod(rows(bits.out).at("mi")[0]) ==
        rel((1.0 - std::log(2.0)) / std::log(2.0), 1e-8));
}

TEST_CASE("verify exit codes") {
  SUBCASE("passing run") {
    const Run r = run({"verify", "--count", "5"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("model,outcomes,check,bound,oracle,margin,tolerance,status,flags\n", 0) == 0);
    CHECK(r.out.find(",fail,") == std::string::npos);
  }
  SUBCASE("zero models is a usage error") {
    CHECK(run({"verify", "--count", "0"}).code == 2);
  }
  SUBCASE("forced failure dumps a reproduction") {
    const Run r = run({"verify", "--count", "2", "--mi-tolerance", "-1"});
    CHECK(r.code == 1);
    CHECK(r.err.find("verify: FAIL") != std::string::npos);
    CHECK(r.err.find("reproduction: mibound verify --seed 20260101 --first 0 --count 1") !=
          std::string::npos);
  }
  SUBCASE("single builtin model") {
    CHECK(run({"verify", "--model", "dephasing-qubit"}).code == 0);
  }
}

TEST_CASE("verify is reproducible for a fixed seed") {
  const Run a = run({"verify", "--count", "4", "--seed", "7"});
  const Run b = run({"--seed", "7", "verify", "--count", "4"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const Run c = run({"verify", "--count", "4", "--seed", "8"});
  CHECK(a.out != c.out);
}

TEST_CASE("metrology") {
  SUBCASE("single point") {
    const Run r = run({"metrology", "--eta", "0.9", "--n", "100"});
    REQUIRE(r.code == 0);
    const auto t = rows(r.out);
    REQUIRE(t.count("0.9") == 1);
    CHECK(std::stod(t.at("0.9")[1]) == rel(4.51385502242, 1e-10));
  }
  SUBCASE("sweep is byte identical across runs") {
    const Run a = run({"metrology"});
    const Run b = run({"metrology"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    std::istringstream in(a.out);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    // Integer rounding merges some of the 61 log-spaced counts near N = 1.
    CHECK((lines - 1) % 3 == 0);
    CHECK(lines > 1 + 3 * 50);
  }
  SUBCASE("bits header") {
    const Run r = run({"metrology", "--eta", "0.9", "--n", "100", "--units", "bits"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("eta,N,mi_cap_bits,", 0) == 0);
    CHECK(std::stod(rows(r.out).at("0.9")[1]) == rel(4.51385502242 / std::log(2.0), 1e-10));
  }
  SUBCASE("eta outside (0, 1] is rejected") {
    CHECK(run({"metrology", "--eta", "1.5"}).code == 2);
  }
}

TEST_CASE("configuration parsing") {
  SUBCASE("pi expressions") {
    const auto m = mibound::load_model_text(
        "grid: {lower: 0, upper: pi/2, points: 101}\n"
        "prior: {kind: uniform}\n"
        "model: {builtin: cos2}\n",
        "inline", {});
    CHECK(m.joint.grid().upper() == rel(std::numbers::pi / 2, 1e-15));
    CHECK(m.joint.grid().points() == 101);
  }
  SUBCASE("unknown key names its line") {
    try {
      mibound::load_model_text(
          "grid: {lower: 0, upper: pi, points: 101}\n"
          "prior: {kind: uniform}\n"
          "model: {builtin: cos2, colour: red}\n",
          "cfg.yaml", {});
      FAIL("expected ConfigError");
    } catch (const mibound::ConfigError& e) {
      CHECK(std::string(e.what()).find("cfg.yaml:3:") != std::string::npos);
      CHECK(std::string(e.what()).find("colour") != std::string::npos);
    }
  }
  SUBCASE("tabulated likelihood") {
    const auto m = mibound::load_model_text(
        "grid: {lower: 0, upper: 1, points: 3}\n"
        "prior: {kind: uniform}\n"
        "model:\n"
        "  tabulated: [[0.2, 0.5, 0.8], [0.8, 0.5, 0.2]]\n",
        "inline", {});
    CHECK(m.joint.conditional().outcomes() == 2);
  }
  SUBCASE("grid override") {
    mibound::ModelOverrides o;
    o.grid_points = 501;
    CHECK(mibound::load_model("cos2", o).joint.grid().points() == 501);
  }
  SUBCASE("gates on a model without gates is an error") {
    CHECK(run({"bounds", "--model", "cos2", "--gates", "3"}).code == 2);
    CHECK(run({"bounds", "--model", "noon", "--gates", "3"}).code == 0);
  }
  SUBCASE("missing file") {
    const Run r = run({"bounds", "--model", "/nonexistent/model.yaml"});
    CHECK(r.code == 2);
    CHECK(!r.err.empty());
  }
}

TEST_CASE("output file") {
  const auto path = temp_file("out.csv");
  std::filesystem::remove(path);
  const Run r = run({"mi", "--model", "cos2", "--out", path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path, std::ios::binary);
  std::stringstream contents;
  contents << f.rdbuf();
  CHECK(contents.str().rfind("quantity,value,units\n", 0) == 0);
  std::filesystem::remove(path);

  CHECK(run({"mi", "--model", "cos2", "--out", "/nonexistent/dir/out.csv"}).code == 3);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"bounds", "--units", "furlongs"}).code == 2);
  CHECK(run({"bounds", "--grid-points", "4"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}
