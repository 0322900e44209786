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


// Python bindings for the bound and oracle computations. Models are built
// from builtin names, YAML files or YAML text, as on the command line.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "mibound/bounds.hpp"
#include "mibound/cli.hpp"
#include "mibound/config.hpp"
#include "mibound/errors.hpp"
#include "mibound/mi_oracle.hpp"
#include "mibound/models.hpp"
#include "mibound/quantum.hpp"
#include "mibound/verify.hpp"

namespace py = pybind11;
using namespace mibound;

namespace {

py::dict report_dict(const BoundReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["value"] = r.value;
  d["direction"] = r.direction == Direction::kUpperBoundOnMI ? "upper-bound-on-mi"
                                                            : "lower-bound-on-mse";
  d["flags"] = r.flag_text();
  py::dict details;
  for (const auto& [key, value] : r.details) details[py::str(key)] = value;
  d["details"] = details;
  return d;
}

struct PyModel {
  std::string id;
  JointModel joint;
};

ModelOverrides overrides(std::optional<std::size_t> grid_points,
                         std::optional<std::size_t> gates, std::optional<double> eta) {
  ModelOverrides o;
  o.grid_points = grid_points;
  o.gates = gates;
  o.eta = eta;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fisher-information bounds on mutual information and Bayesian MSE";

  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);

  m.attr("DEFAULT_SEED") = kDefaultSeed;
  m.attr("BUILTIN_MODELS") = builtin_model_names();

  py::class_<PyModel>(m, "Model")
      .def_readonly("id", &PyModel::id)
      .def_property_readonly("outcomes",
                             [](const PyModel& p) { return p.joint.conditional().outcomes(); })
      .def_property_readonly("grid_points",
                             [](const PyModel& p) { return p.joint.grid().points(); })
      .def_property_readonly("grid_range",
                             [](const PyModel& p) {
                               return std::make_tuple(p.joint.grid().lower(),
                                                      p.joint.grid().upper());
                             })
      .def(
          "oracle",
          [](const PyModel& p) {
            const OracleResult r = mutual_information(p.joint);
            py::dict d;
            d["mi"] = r.mi;
            d["h_prior"] = r.h_prior;
            d["h_posterior"] = r.h_posterior;
            d["bayes_mse"] = r.bayes_mse;
            return d;
          },
          "Exact MI (nats), entropies and posterior-mean Bayes MSE.")
      .def(
          "bounds",
          [](const PyModel& p) {
            py::list out;
            out.append(report_dict(mi_bound_finite_support(p.joint)));
            out.append(report_dict(mi_bound_general_prior(p.joint)));
            out.append(report_dict(efroimovich_mi_bound(p.joint)));
            out.append(report_dict(van_trees(p.joint)));
            out.append(report_dict(mse_bound_finite_support(p.joint)));
            out.append(report_dict(mse_bound_general_prior(p.joint)));
            return out;
          },
          "Every applicable bound as a list of dicts.")
      .def("__repr__", [](const PyModel& p) {
        return "<mibound.Model " + p.id + " outcomes=" +
               std::to_string(p.joint.conditional().outcomes()) +
               " grid_points=" + std::to_string(p.joint.grid().points()) + ">";
      });

  m.def(
      "load_model",
      [](const std::string& name_or_path, std::optional<std::size_t> grid_points,
         std::optional<std::size_t> gates, std::optional<double> eta) {
        LoadedModel l = load_model(name_or_path, overrides(grid_points, gates, eta));
        return PyModel{l.id, std::move(l.joint)};
      },
      py::arg("model"), py::kw_only(), py::arg("grid_points") = py::none(),
      py::arg("gates") = py::none(), py::arg("eta") = py::none(),
      "Load a builtin model by name or a YAML model file.");

  m.def(
      "model_from_yaml",
      [](const std::string& text, std::optional<std::size_t> grid_points) {
        LoadedModel l = load_model_text(text, "<string>", overrides(grid_points, {}, {}));
        return PyModel{l.id, std::move(l.joint)};
      },
      py::arg("text"), py::kw_only(), py::arg("grid_points") = py::none());

  m.def(
      "random_model",
      [](std::uint64_t seed, std::uint64_t index, std::size_t points) {
        return PyModel{"random:" + std::to_string(seed) + ":" + std::to_string(index),
                       random_joint(seed, index, points)};
      },
      py::arg("seed") = kDefaultSeed, py::arg("index") = 0, py::arg("points") = 2001);

  m.def(
      "gaussian_prior_mse_bounds",
      [](double fisher, double sigma) {
        const GaussianMseBounds b = gaussian_prior_mse_bounds(fisher, sigma);
        py::dict d;
        d["exact"] = b.exact.require();
        d["simplified"] = b.simplified.require();
        d["u_ratio"] = b.u_ratio;
        return d;
      },
      py::arg("fisher"), py::arg("sigma"));

  m.def(
      "mi_cap",
      [](std::size_t gates, double eta, const std::string& regime,
         std::optional<double> per_gate_cap) {
        quantum::CapOptions options;
        options.per_gate_cap = per_gate_cap;
        return quantum::mi_cap(gates, eta, quantum::parse_regime(regime), options).require();
      },
      py::arg("gates"), py::arg("eta"), py::arg("regime") = "finite-n",
      py::arg("per_gate_cap") = py::none(),
      "ln(1 + pi sqrt(F_cap)) for N noisy gates, in nats.");

  m.def(
      "verify",
      [](std::size_t count, std::uint64_t seed, std::size_t first) {
        VerifyOptions options;
        options.count = count;
        options.seed = seed;
        options.first = first;
        const VerifyResult result = verify_random_models(options);
        py::list summary;
        for (const CheckSummary& s : result.summary) {
          py::dict d;
          d["check"] = s.check;
          d["worst_margin"] = s.worst_margin;
          d["evaluated"] = s.evaluated;
          d["flagged"] = s.flagged;
          d["violations"] = s.violations;
          summary.append(d);
        }
        return py::make_tuple(result.passed(), summary);
      },
      py::arg("count") = 200, py::arg("seed") = kDefaultSeed, py::arg("first") = 0,
      "Check every bound against the oracle on seeded random models.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv = {"mibound"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out;
        std::ostringstream err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line tool in-process; returns (code, stdout, stderr).");
}
