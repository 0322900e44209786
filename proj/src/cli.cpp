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


#include "mibound/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "mibound/bounds.hpp"
#include "mibound/config.hpp"
#include "mibound/errors.hpp"
#include "mibound/mi_oracle.hpp"
#include "mibound/quantum.hpp"
#include "mibound/verify.hpp"

namespace mibound {

namespace {

constexpr const char* kDefaultModel = "cos2";

struct CommonOptions {
  std::string model = kDefaultModel;
  std::optional<std::size_t> grid_points;
  std::uint64_t seed = kDefaultSeed;
  std::string units = "nats";
  std::string out_path;
  std::optional<std::size_t> gates;
  std::optional<double> eta;

  bool bits() const { return units == "bits"; }
  ModelOverrides overrides() const { return {grid_points, gates, eta}; }
};

std::string num(double v) { return fmt::format("{:.12g}", v); }

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

// Writes to --out when given, otherwise to the standard output stream.
void emit(const CommonOptions& options, const std::string& text, std::ostream& out) {
  if (options.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(options.out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw ResourceError("cannot open output file '" + options.out_path + "'");
  file << text;
  file.close();
  if (!file) throw ResourceError("failed writing output file '" + options.out_path + "'");
}

void add_grid_option(CLI::App* app, CommonOptions& o) {
  app->add_option("--grid-points", o.grid_points, "Override the grid size (odd, >= 3)")
      ->check([](const std::string& text) -> std::string {
        try {
          const long long v = std::stoll(text);
          if (v >= 3 && v % 2 == 1) return {};
        } catch (const std::exception&) {
        }
        return "grid points must be an odd integer >= 3";
      });
}

void add_model_options(CLI::App* app, CommonOptions& o) {
  app->add_option("--model", o.model,
                  "Model file or builtin (cos2, cos2-gaussian, noon, dephasing-qubit, "
                  "ampdamp-qubit, erasure-qutrit)")
      ->capture_default_str();
  add_grid_option(app, o);
  app->add_option("--gates", o.gates, "Gate count N for the quantum builtins")
      ->check(CLI::PositiveNumber);
  app->add_option("--eta", o.eta, "Noise parameter for the channel builtins");
}

void add_output_options(CLI::App* app, CommonOptions& o) {
  app->add_option("--units", o.units, "Information units for display")
      ->check(CLI::IsMember({"nats", "bits"}))
      ->capture_default_str();
  app->add_option("--out", o.out_path, "Write the CSV here instead of stdout");
}

// ---------------------------------------------------------------------------
// bounds

struct BoundsRow {
  std::string name;
  std::string direction;
  bool information = false;  // nats-valued row
  std::optional<double> value;
  std::string flags;
};

std::string direction_text(Direction d) {
  return d == Direction::kUpperBoundOnMI ? "upper-bound-on-mi" : "lower-bound-on-mse";
}

BoundsRow row_from(const BoundReport& r) {
  return BoundsRow{r.name, direction_text(r.direction), r.units == Units::kNats,
                   r.value, r.flag_text()};
}

int cmd_bounds(const CommonOptions& o, std::ostream& out, std::ostream& err) {
  const LoadedModel loaded = load_model(o.model, o.overrides());
  const JointModel& joint = loaded.joint;
  const OracleResult oracle = mutual_information(joint);
  const FisherProfile fisher = fisher_information(joint.conditional());

  std::vector<BoundsRow> rows;
  rows.push_back({"oracle_mi", "oracle", true, oracle.mi, ""});
  rows.push_back(row_from(mi_bound_finite_support(joint)));
  rows.push_back(row_from(mi_bound_general_prior(joint)));
  rows.push_back(row_from(mi_bound_variational(joint, weight_from_prior(joint.prior()))));
  rows.back().name = "mi_bound_variational_f_eq_prior";
  rows.push_back(row_from(efroimovich_mi_bound(joint)));
  rows.push_back({"oracle_bayes_mse", "oracle", false, oracle.bayes_mse, ""});
  const BoundReport vt = van_trees(joint);
  rows.push_back(row_from(vt));
  const BoundReport fs = mse_bound_finite_support(joint);
  rows.push_back(row_from(fs));
  if (const auto closed = fs.detail("rectangle_closed_form")) {
    rows.push_back({"mse_bound_rectangle_closed_form", "lower-bound-on-mse", false,
                    closed, ""});
  }
  rows.push_back(row_from(mse_bound_general_prior(joint)));
  rows.push_back({"entropy_mse_floor", "lower-bound-on-mse", false,
                  entropy_mse_floor(oracle.h_posterior), ""});

  // Closed forms for a Gaussian prior when F does not depend on phi.
  if (const auto* g = std::get_if<GaussianShape>(&joint.prior().shape())) {
    const auto [lo, hi] = std::minmax_element(fisher.values.begin(), fisher.values.end());
    if (!fisher.any_divergent() && *hi - *lo <= 1e-6 * std::max(1.0, *hi)) {
      const GaussianMseBounds closed = gaussian_prior_mse_bounds(0.5 * (*lo + *hi), g->sigma);
      rows.push_back(row_from(closed.exact));
      rows.push_back(row_from(closed.simplified));
    }
  }

  const double scale = o.bits() ? std::numbers::ln2 : 1.0;
  err << fmt::format("bounds: model={} conditional={} outcomes={} grid_points={} prior={}\n",
                     loaded.id, joint.conditional().name(), joint.conditional().outcomes(),
                     joint.grid().points(), joint.prior().label());
  std::string text = "bound,direction,units,value,ratio_to_van_trees,flags\n";
  for (const BoundsRow& row : rows) {
    std::optional<double> value = row.value;
    std::optional<double> ratio;
    if (row.information) {
      if (value) *value /= scale;
    } else if (row.direction != "oracle" && value && vt.value && *value > 0.0) {
      ratio = *vt.value / *value;
    }
    const std::string units = row.information ? o.units : "param^2";
    text += fmt::format("{},{},{},{},{},{}\n", row.name, row.direction, units,
                        num(value), num(ratio), row.flags);
  }
  emit(o, text, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// mi

int cmd_mi(const CommonOptions& o, std::size_t repeat, std::ostream& out,
           std::ostream& err) {
  const LoadedModel loaded = load_model(o.model, o.overrides());
  const JointModel joint = repeat > 1 ? repeat_model(loaded.joint, repeat) : loaded.joint;
  const OracleResult r = mutual_information(joint);
  const double scale = o.bits() ? std::numbers::ln2 : 1.0;
  err << fmt::format("mi: model={} repeat={} outcomes={} grid_points={}\n", loaded.id,
                     repeat, joint.conditional().outcomes(), joint.grid().points());
  std::string text = "quantity,value,units\n";
  text += fmt::format("mi,{},{}\n", num(r.mi / scale), o.units);
  text += fmt::format("h_prior,{},{}\n", num(r.h_prior / scale), o.units);
  text += fmt::format("h_posterior,{},{}\n", num(r.h_posterior / scale), o.units);
  text += fmt::format("bayes_mse,{},param^2\n", num(r.bayes_mse));
  emit(o, text, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

void dump_model(const JointModel& joint, std::size_t index, const CommonOptions& o,
                const std::string& extra_flags, std::ostream& err) {
  const auto& model = joint.conditional();
  const auto& grid = joint.grid();
  err << fmt::format("  model {} reproduction: mibound verify --seed {} --first {} --count 1",
                     index, o.seed, index);
  if (o.grid_points) err << " --grid-points " << *o.grid_points;
  err << extra_flags << "\n";
  err << fmt::format("  conditional={} outcomes={} prior={} grid=[{}, {}] x {}\n",
                     model.name(), model.outcomes(), joint.prior().label(),
                     num(grid.lower()), num(grid.upper()), grid.points());
  const std::size_t stride = std::max<std::size_t>(1, (grid.points() - 1) / 8);
  for (std::size_t j = 0; j < grid.points(); j += stride) {
    err << fmt::format("  phi={:<10.6g} prior={:<12.6g} p(x|phi)=", grid.at(j),
                       joint.prior().density()[j]);
    for (std::size_t x = 0; x < model.outcomes(); ++x) {
      err << (x ? " " : "") << fmt::format("{:.6g}", model.prob(x, j));
    }
    err << "\n";
  }
}

int cmd_verify(const CommonOptions& o, std::size_t count, std::size_t first,
               bool adversarial, bool model_given, double mi_tolerance,
               std::ostream& out, std::ostream& err) {
  VerifyOptions options;
  options.mi_tolerance = mi_tolerance;
  options.count = count;
  options.first = first;
  options.seed = o.seed;
  if (o.grid_points) options.grid_points = *o.grid_points;
  if (adversarial) {
    // Near-deterministic rows with probabilities clipped at 1e-9.
    options.model.amplitude = 40.0;
    options.model.floor = 1e-9;
  }

  VerifyResult result;
  std::optional<LoadedModel> loaded;
  if (model_given) {
    loaded = load_model(o.model, o.overrides());
    result.records = check_joint(loaded->joint, 0, options);
    for (const auto& r : result.records) {
      CheckSummary s{r.check, r.margin, 0, r.margin ? 1u : 0u, r.margin ? 0u : 1u,
                     r.passed ? 0u : 1u};
      result.summary.push_back(s);
    }
  } else {
    result = verify_random_models(options);
  }

  std::string text = "model,outcomes,check,bound,oracle,margin,tolerance,status,flags\n";
  for (const auto& r : result.records) {
    const std::string status = !r.margin ? "flagged" : (r.passed ? "pass" : "FAIL");
    text += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.model, r.outcomes, r.check,
                        num(r.bound), num(r.oracle), num(r.margin), num(r.tolerance),
                        status, r.flags);
  }
  emit(o, text, out);

  err << fmt::format("verify: {} model(s), seed {}\n",
                     model_given ? 1 : count, o.seed);
  for (const auto& s : result.summary) {
    err << fmt::format("  {:<32} worst_margin={:<14} model={:<5} evaluated={} flagged={} violations={}\n",
                       s.check, s.worst_margin ? num(*s.worst_margin) : "n/a",
                       s.worst_model, s.evaluated, s.flagged, s.violations);
  }
  if (result.passed()) {
    err << "verify: PASS\n";
    return kExitOk;
  }
  std::vector<std::size_t> failed;
  for (const auto& r : result.records) {
    if (!r.passed && std::find(failed.begin(), failed.end(), r.model) == failed.end()) {
      failed.push_back(r.model);
    }
  }
  err << "verify: FAIL\n";
  std::string extra;
  if (adversarial) extra += " --adversarial";
  if (mi_tolerance != VerifyOptions{}.mi_tolerance) extra += " --mi-tolerance " + num(mi_tolerance);
  if (model_given) extra += " --model " + o.model;
  for (std::size_t index : failed) {
    if (loaded) {
      dump_model(loaded->joint, index, o, extra, err);
    } else {
      dump_model(random_joint(options.seed, index, options.grid_points, options.model),
                 index, o, extra, err);
    }
  }
  return kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// metrology

struct MetrologyOptions {
  std::vector<double> etas = {0.5, 0.9, 0.99};
  std::vector<std::size_t> gates;
  std::size_t n_min = 1;
  std::size_t n_max = 1000000;
  std::size_t n_count = 61;
  std::string regime = "finite-n";
  std::string noise = "dephasing";
  std::optional<double> per_gate_cap;
};

int cmd_metrology(const CommonOptions& o, const MetrologyOptions& m, std::ostream& out,
                  std::ostream& err) {
  const auto regime = quantum::parse_regime(m.regime);
  quantum::CapOptions caps;
  caps.kind = quantum::parse_noise_kind(m.noise);
  caps.per_gate_cap = m.per_gate_cap;
  if (caps.kind == quantum::NoiseKind::kAmplitudeDamping && !caps.per_gate_cap) {
    err << "metrology: no per-gate cap supplied for amplitude damping; using "
           "eta/(1-eta) (flagged)\n";
  }
  std::vector<std::size_t> gates = m.gates;
  if (gates.empty()) gates = quantum::log_spaced_counts(m.n_min, m.n_max, m.n_count);
  std::sort(gates.begin(), gates.end());
  gates.erase(std::unique(gates.begin(), gates.end()), gates.end());
  std::vector<double> etas = m.etas;
  std::sort(etas.begin(), etas.end());
  etas.erase(std::unique(etas.begin(), etas.end()), etas.end());

  const double scale = o.bits() ? std::numbers::ln2 : 1.0;
  std::string text = o.bits() ? "eta,N,mi_cap_bits,hs_ref,sql_ref,slope\n"
                              : "eta,N,mi_cap_nats,hs_ref,sql_ref,slope\n";
  for (double eta : etas) {
    for (const auto& row : quantum::transition_sweep(eta, gates, regime, caps)) {
      text += fmt::format("{},{},{},{},{},{}\n", num(row.eta), row.gates,
                          num(row.mi_cap / scale), num(row.hs_ref / scale),
                          num(row.sql_ref / scale), num(row.slope));
    }
  }
  emit(o, text, out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fisher-information bounds on mutual information and Bayesian MSE"};
  app.name("mibound");
  app.require_subcommand(1);

  CommonOptions common;
  app.add_option("--seed", common.seed, "Random seed (default " +
                                            std::to_string(kDefaultSeed) + ")");

  CLI::App* bounds = app.add_subcommand("bounds", "Evaluate every bound for a model");
  add_model_options(bounds, common);
  add_output_options(bounds, common);

  std::size_t repeat = 1;
  CLI::App* mi = app.add_subcommand("mi", "Mutual information and entropies by quadrature");
  add_model_options(mi, common);
  add_output_options(mi, common);
  mi->add_option("--repeat", repeat, "Independent samples per parameter draw")
      ->check(CLI::PositiveNumber);

  std::size_t count = 200;
  std::size_t first = 0;
  bool adversarial = false;
  double mi_tolerance = VerifyOptions{}.mi_tolerance;
  CLI::App* verify = app.add_subcommand("verify", "Check the bounds on seeded random models");
  verify->add_option("--count", count, "Number of random models")->capture_default_str();
  verify->add_option("--first", first, "Index of the first model");
  verify->add_flag("--adversarial", adversarial,
                   "Near-deterministic models with probabilities clipped at 1e-9");
  verify->add_option("--mi-tolerance", mi_tolerance,
                     "Allowed shortfall of an MI bound below the oracle, nats")
      ->capture_default_str();
  CLI::Option* verify_model =
      verify->add_option("--model", common.model, "Check this model instead of random ones");
  add_grid_option(verify, common);
  add_output_options(verify, common);

  MetrologyOptions metrology_options;
  CLI::App* metrology =
      app.add_subcommand("metrology", "Noisy phase estimation: MI cap versus N");
  metrology->add_option("--eta", metrology_options.etas, "Noise parameters")
      ->delimiter(',')
      ->capture_default_str();
  metrology->add_option("--n", metrology_options.gates, "Explicit gate counts")
      ->delimiter(',');
  metrology->add_option("--n-min", metrology_options.n_min, "Smallest gate count of the sweep")->capture_default_str();
  metrology->add_option("--n-max", metrology_options.n_max, "Largest gate count of the sweep")->capture_default_str();
  metrology->add_option("--n-count", metrology_options.n_count, "Log-spaced points")
      ->capture_default_str();
  metrology->add_option("--regime", metrology_options.regime, "asymptotic | finite-n")
      ->capture_default_str();
  metrology->add_option("--noise", metrology_options.noise,
                        "dephasing | erasure | amplitude-damping")
      ->capture_default_str();
  metrology->add_option("--per-gate-cap", metrology_options.per_gate_cap,
                        "Per-gate asymptotic Fisher cap overriding eta/(1-eta)");
  add_output_options(metrology, common);

  for (CLI::App* sub : {bounds, mi, verify, metrology}) {
    sub->add_option("--seed", common.seed, "Random seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*bounds) return cmd_bounds(common, out, err);
    if (*mi) return cmd_mi(common, repeat, out, err);
    if (*verify) {
      if (count == 0) throw ArgumentError("verify: --count must be >= 1");
      return cmd_verify(common, count, first, adversarial, verify_model->count() > 0,
                        mi_tolerance, out, err);
    }
    if (*metrology) return cmd_metrology(common, metrology_options, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace mibound
