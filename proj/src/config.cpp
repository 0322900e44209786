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


#include "mibound/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>

#include "mibound/models.hpp"
#include "mibound/quantum.hpp"

namespace mibound {

namespace {

const std::map<std::string, std::string>& builtins() {
  static const std::map<std::string, std::string> table = {
      {"cos2",
       "grid: {lower: 0, upper: pi, points: 2001}\n"
       "prior: {kind: uniform}\n"
       "model: {builtin: cos2}\n"},
      {"cos2-gaussian",
       "prior: {kind: gaussian, mean: pi/2, sigma: 0.3, points: 2001}\n"
       "model: {builtin: cos2}\n"},
      {"noon",
       "grid: {lower: 0, upper: 2*pi, points: 2001}\n"
       "prior: {kind: uniform}\n"
       "model: {builtin: noon, gates: 4}\n"},
      {"dephasing-qubit",
       "grid: {lower: 0, upper: 2*pi, points: 2001}\n"
       "prior: {kind: uniform}\n"
       "model: {builtin: dephasing-qubit, eta: 0.9, gates: 1}\n"},
      {"ampdamp-qubit",
       "grid: {lower: 0, upper: 2*pi, points: 2001}\n"
       "prior: {kind: uniform}\n"
       "model: {builtin: ampdamp-qubit, eta: 0.9, gates: 1}\n"},
      {"erasure-qutrit",
       "grid: {lower: 0, upper: 2*pi, points: 2001}\n"
       "prior: {kind: uniform}\n"
       "model: {builtin: erasure-qutrit, eta: 0.9, gates: 1}\n"},
  };
  return table;
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& message) const {
    std::ostringstream out;
    out << source_;
    if (node.IsDefined() && node.Mark().line >= 0) {
      out << ":" << node.Mark().line + 1 << ":" << node.Mark().column + 1;
    }
    out << ": " << message;
    throw ConfigError(out.str());
  }

  void expect_map(const YAML::Node& node, const std::string& what,
                  const std::set<std::string>& allowed) const {
    if (!node.IsMap()) fail(node, "'" + what + "' must be a mapping");
    for (const auto& entry : node) {
      const auto key = entry.first.as<std::string>();
      if (!allowed.count(key)) fail(entry.first, "unknown key '" + key + "' in '" + what + "'");
    }
  }

  YAML::Node require(const YAML::Node& parent, const std::string& key,
                     const std::string& what) const {
    const YAML::Node node = parent[key];
    if (!node) fail(parent, "'" + what + "' needs '" + key + "'");
    return node;
  }

  double number(const YAML::Node& node) const {
    if (!node.IsScalar()) fail(node, "expected a number");
    const std::string text = node.Scalar();
    static const std::regex pi_form(
        R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$)");
    std::smatch match;
    if (std::regex_match(text, match, pi_form)) {
      double value = std::numbers::pi;
      if (match[1].matched) value *= std::stod(match[1].str());
      if (match[2].matched) {
        const double den = std::stod(match[2].str());
        if (den == 0.0) fail(node, "division by zero in '" + text + "'");
        value /= den;
      }
      return value;
    }
    try {
      std::size_t used = 0;
      const double value = std::stod(text, &used);
      if (used != text.size() || !std::isfinite(value)) throw std::invalid_argument(text);
      return value;
    } catch (const std::exception&) {
      fail(node, "expected a number, got '" + text + "'");
    }
  }

  std::size_t count(const YAML::Node& node) const {
    const double value = number(node);
    if (!(value >= 0.0) || value != std::floor(value) || value > 1e12) {
      fail(node, "expected a non-negative integer");
    }
    return static_cast<std::size_t>(value);
  }

  std::string word(const YAML::Node& node) const {
    if (!node.IsScalar()) fail(node, "expected a name");
    return node.Scalar();
  }

  std::vector<double> numbers(const YAML::Node& node) const {
    if (!node.IsSequence()) fail(node, "expected a list of numbers");
    std::vector<double> out;
    for (const auto& item : node) out.push_back(number(item));
    return out;
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

// Rethrows library errors raised while building a section with the
// section's location attached.
template <typename F>
auto located(const Reader& reader, const YAML::Node& node, F&& build) {
  try {
    return build();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    reader.fail(node, e.what());
  }
}

std::optional<ParameterGrid> read_grid(const Reader& r, const YAML::Node& doc,
                                       const ModelOverrides& overrides) {
  const YAML::Node node = doc["grid"];
  if (!node) return std::nullopt;
  r.expect_map(node, "grid", {"lower", "upper", "points"});
  const double lower = r.number(r.require(node, "lower", "grid"));
  const double upper = r.number(r.require(node, "upper", "grid"));
  std::size_t points = r.count(r.require(node, "points", "grid"));
  if (overrides.grid_points) points = *overrides.grid_points;
  return located(r, node, [&] { return ParameterGrid(lower, upper, points); });
}

PriorDensity read_prior(const Reader& r, const YAML::Node& doc,
                        const std::optional<ParameterGrid>& grid,
                        const ModelOverrides& overrides) {
  const YAML::Node node = r.require(doc, "prior", "model file");
  r.expect_map(node, "prior",
               {"kind", "mean", "sigma", "center", "width", "values", "edges", "points"});
  const std::string kind = r.word(r.require(node, "kind", "prior"));
  auto need_grid = [&]() -> const ParameterGrid& {
    if (!grid) r.fail(node, "prior kind '" + kind + "' needs a 'grid' section");
    return *grid;
  };
  if (kind == "uniform" || kind == "rectangle") {
    const ParameterGrid& g = need_grid();
    return located(r, node, [&] {
      return PriorDensity::rectangle(0.5 * (g.lower() + g.upper()), g.width(), g.points());
    });
  }
  if (kind == "gaussian") {
    const double mean = r.number(r.require(node, "mean", "prior"));
    const double sigma = r.number(r.require(node, "sigma", "prior"));
    if (grid) {
      return located(r, node, [&] { return PriorDensity::gaussian(mean, sigma, *grid); });
    }
    std::size_t points = node["points"] ? r.count(node["points"]) : 2001;
    if (overrides.grid_points) points = *overrides.grid_points;
    return located(r, node, [&] { return PriorDensity::gaussian(mean, sigma, points); });
  }
  if (kind == "cosine-window") {
    const ParameterGrid& g = need_grid();
    const double center = node["center"] ? r.number(node["center"])
                                         : 0.5 * (g.lower() + g.upper());
    const double width = node["width"] ? r.number(node["width"]) : g.width();
    return located(r, node, [&] { return PriorDensity::cosine_window(center, width, g); });
  }
  if (kind == "tabulated") {
    const ParameterGrid& g = need_grid();
    const YAML::Node values = r.require(node, "values", "prior");
    std::vector<double> table = r.numbers(values);
    if (table.size() != g.points()) {
      r.fail(values, "tabulated prior has " + std::to_string(table.size()) +
                         " values but the grid has " + std::to_string(g.points()) +
                         " points");
    }
    bool edges = false;
    if (const YAML::Node flag = node["edges"]) {
      if (!flag.IsScalar() || !YAML::convert<bool>::decode(flag, edges)) {
        r.fail(flag, "'edges' must be true or false");
      }
    }
    return located(r, node, [&] { return PriorDensity::tabulated(g, std::move(table), edges); });
  }
  r.fail(node["kind"], "unknown prior kind '" + kind +
                           "' (uniform, gaussian, cosine-window, tabulated)");
}

ConditionalModel read_conditional(const Reader& r, const YAML::Node& doc,
                                  const ParameterGrid& grid,
                                  const ModelOverrides& overrides) {
  const YAML::Node node = r.require(doc, "model", "model file");
  r.expect_map(node, "model", {"builtin", "tabulated", "gates", "eta", "name"});
  if (node["tabulated"]) {
    if (node["builtin"]) r.fail(node, "'model' takes either 'builtin' or 'tabulated'");
    if (overrides.gates || overrides.eta) {
      r.fail(node, "--gates/--eta do not apply to a tabulated model");
    }
    const YAML::Node rows_node = node["tabulated"];
    if (!rows_node.IsSequence() || rows_node.size() == 0) {
      r.fail(rows_node, "'tabulated' must be a non-empty list of rows");
    }
    std::vector<std::vector<double>> rows;
    for (const auto& row : rows_node) {
      rows.push_back(r.numbers(row));
      if (rows.back().size() != grid.points()) {
        r.fail(row, "row has " + std::to_string(rows.back().size()) +
                        " entries but the grid has " + std::to_string(grid.points()) +
                        " points");
      }
    }
    const std::string name = node["name"] ? r.word(node["name"]) : "tabulated";
    return located(r, node, [&] { return ConditionalModel::tabulated(grid, rows, name); });
  }

  const std::string name = r.word(r.require(node, "builtin", "model"));
  std::size_t gates = node["gates"] ? r.count(node["gates"]) : 1;
  double eta = node["eta"] ? r.number(node["eta"]) : 1.0;
  const bool uses_gates = name != "cos2";
  const bool uses_eta = name != "cos2" && name != "noon";
  if ((overrides.gates && !uses_gates) || (overrides.eta && !uses_eta)) {
    r.fail(node, "--gates/--eta do not apply to builtin model '" + name + "'");
  }
  if (overrides.gates) gates = *overrides.gates;
  if (overrides.eta) eta = *overrides.eta;

  if (name == "cos2") return cos2_model(grid);
  if (name == "noon") {
    return located(r, node, [&] {
      return quantum::noon_outcome_model(gates, quantum::Povm::equatorial(), grid);
    });
  }
  std::optional<quantum::NoiseKind> kind;
  if (name == "dephasing-qubit") kind = quantum::NoiseKind::kDephasing;
  if (name == "ampdamp-qubit") kind = quantum::NoiseKind::kAmplitudeDamping;
  if (name == "erasure-qutrit") kind = quantum::NoiseKind::kErasure;
  if (!kind) {
    r.fail(node["builtin"], "unknown builtin model '" + name +
                                "' (cos2, noon, dephasing-qubit, ampdamp-qubit, "
                                "erasure-qutrit)");
  }
  return located(r, node, [&] {
    const auto dim = quantum::noise_dimension(*kind);
    const auto family = quantum::channel_family(
        *kind, eta, quantum::DensityMatrix::plus(dim).matrix(), gates);
    // Equatorial measurement on the qubit levels; for the qutrit a third
    // outcome flags the erased level.
    std::vector<quantum::Matrix> elements;
    const quantum::Povm qubit = quantum::Povm::equatorial();
    for (const auto& m : qubit.elements()) {
      quantum::Matrix embedded = quantum::Matrix::Zero(dim, dim);
      embedded.topLeftCorner(2, 2) = m;
      elements.push_back(embedded);
    }
    if (dim == 3) {
      quantum::Matrix flag = quantum::Matrix::Zero(3, 3);
      flag(2, 2) = 1.0;
      elements.push_back(flag);
    }
    std::ostringstream label;
    label << name << "(eta=" << eta << ",N=" << gates << ")";
    return quantum::povm_outcome_model(family, quantum::Povm(std::move(elements)),
                                       grid, label.str());
  });
}

}  // namespace

std::vector<std::string> builtin_model_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : builtins()) names.push_back(name);
  return names;
}

std::string builtin_model_text(const std::string& name) {
  const auto it = builtins().find(name);
  if (it == builtins().end()) throw ConfigError("unknown builtin model '" + name + "'");
  return it->second;
}

LoadedModel load_model_text(const std::string& text, const std::string& source,
                            const ModelOverrides& overrides) {
  const Reader r(source);
  YAML::Node doc;
  try {
    doc = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream out;
    out << source << ":" << e.mark.line + 1 << ":" << e.mark.column + 1 << ": "
        << e.msg;
    throw ConfigError(out.str());
  }
  if (!doc.IsMap()) throw ConfigError(source + ": expected a mapping with grid/prior/model");
  r.expect_map(doc, "model file", {"grid", "prior", "model"});
  const auto grid = read_grid(r, doc, overrides);
  PriorDensity prior = read_prior(r, doc, grid, overrides);
  ConditionalModel conditional = read_conditional(r, doc, prior.grid(), overrides);
  return LoadedModel{source, JointModel(std::move(prior), std::move(conditional))};
}

LoadedModel load_model(const std::string& name_or_path, const ModelOverrides& overrides) {
  if (builtins().count(name_or_path)) {
    return load_model_text(builtin_model_text(name_or_path), "builtin:" + name_or_path, overrides);
  }
  std::ifstream in(name_or_path);
  if (!in) {
    throw ConfigError("cannot open model file '" + name_or_path + "' (builtins: cos2, cos2-gaussian, "
                      "noon, dephasing-qubit, ampdamp-qubit, erasure-qutrit)");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_model_text(buffer.str(), name_or_path, overrides);
}

}  // namespace mibound
