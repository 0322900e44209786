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

#include "mibound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mibound/errors.hpp"

namespace mibound {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;
constexpr double kTwoOverPiE = 2.0 / (kPi * kE);

// Ends whose density exceeds this fraction of the peak need declared edges.
constexpr double kUndeclaredEdgeTolerance = 1e-6;

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(10);
  out << v;
  return out.str();
}

BoundReport make_report(std::string name, Units units, Direction direction) {
  BoundReport r;
  r.name = std::move(name);
  r.units = units;
  r.direction = direction;
  return r;
}

void echo_joint(BoundReport& r, const JointModel& joint) {
  r.inputs.emplace_back("model", joint.conditional().name());
  r.inputs.emplace_back("prior", joint.prior().label());
  r.inputs.emplace_back("grid_points", std::to_string(joint.grid().points()));
}

void require_declared_edges(const PriorDensity& prior, const char* who) {
  if (!prior.has_edges() &&
      prior.relative_boundary_value() > kUndeclaredEdgeTolerance) {
    throw ArgumentError(std::string(who) +
                        ": prior does not vanish at the grid ends and declares "
                        "no edges");
  }
}

// Integral pieces shared by the general-prior and variational bounds, for a
// weight w with derivative dw (w = p gives the general-prior form).
GeneralPriorIntegral weighted_integral(const FisherProfile& fisher,
                                       std::span<const double> w,
                                       std::span<const double> dw,
                                       double boundary_jump) {
  const auto& grid = fisher.grid;
  const std::size_t n = grid.points();
  std::vector<double> total(n), fisher_half(n), prior_half(n);
  for (std::size_t j = 0; j < n; ++j) {
    double fw2 = 0.0;
    if (w[j] > 0.0) {
      if (fisher.divergent[j] || !std::isfinite(fisher.values[j])) {
        throw NumericError(
            "Fisher information diverges where the weight is positive (node " +
            std::to_string(j) + ")");
      }
      fw2 = fisher.values[j] * w[j] * w[j];
    }
    total[j] = std::sqrt(fw2 + dw[j] * dw[j]);
    fisher_half[j] = std::sqrt(fw2);
    prior_half[j] = std::abs(dw[j]);
  }
  GeneralPriorIntegral out{};
  out.total = integrate(total, grid) + boundary_jump;
  out.fisher_part = integrate(fisher_half, grid);
  out.prior_part = integrate(prior_half, grid) + boundary_jump;
  return out;
}

std::pair<std::size_t, std::size_t> support_range(const PriorDensity& prior) {
  const auto p = prior.density();
  std::size_t first = 0;
  while (first < p.size() && !(p[first] > 0.0)) ++first;
  if (first == p.size()) throw ArgumentError("prior has no support");
  std::size_t last = p.size() - 1;
  while (!(p[last] > 0.0)) --last;
  // The support closes at the neighbouring zero nodes.
  if (first > 0) --first;
  if (last + 1 < p.size()) ++last;
  return {first, last};
}

}  // namespace

double BoundReport::require() const {
  if (!value) {
    throw NumericError("bound " + name + " has no value (" + flag_text() + ")");
  }
  return *value;
}

std::optional<double> BoundReport::detail(const std::string& key) const {
  for (const auto& [k, v] : details) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string BoundReport::flag_text() const {
  std::string out;
  auto add = [&](Validity v, const char* text) {
    if (!has(v)) return;
    if (!out.empty()) out += ";";
    out += text;
  };
  add(Validity::kPriorInformationDivergent, "P divergent");
  add(Validity::kFisherDivergent, "F divergent");
  add(Validity::kAmplitudeDampingCapCaveat, "amplitude-damping cap assumed");
  add(Validity::kNoiselessLimit, "noiseless limit");
  return out;
}

std::vector<double> joint_derivative_l1_bound(const JointModel& joint) {
  const FisherProfile fisher = fisher_information(joint.conditional());
  const auto p = joint.prior().density();
  const auto dp = joint.prior().derivative();
  std::vector<double> out(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    double fp2 = 0.0;
    if (p[j] > 0.0) {
      if (fisher.divergent[j]) {
        throw NumericError("joint_derivative_l1_bound: F diverges at node " +
                           std::to_string(j) + " where p > 0");
      }
      fp2 = fisher.values[j] * p[j] * p[j];
    }
    out[j] = std::sqrt(fp2 + dp[j] * dp[j]);
  }
  return out;
}

std::vector<double> joint_derivative_l1_sum(const JointModel& joint) {
  const auto& model = joint.conditional();
  const auto p = joint.prior().density();
  const auto dp = joint.prior().derivative();
  std::vector<double> out(p.size(), 0.0);
  for (std::size_t j = 0; j < p.size(); ++j) {
    for (std::size_t x = 0; x < model.outcomes(); ++x) {
      out[j] += std::abs(model.dprob(x, j) * p[j] + model.prob(x, j) * dp[j]);
    }
  }
  return out;
}

GeneralPriorIntegral general_prior_integral(const JointModel& joint) {
  const PriorDensity& prior = joint.prior();
  require_declared_edges(prior, "general-prior bound");
  const FisherProfile fisher = fisher_information(joint.conditional());
  const double jump = prior.has_edges() ? prior.boundary_jump() : 0.0;
  return weighted_integral(fisher, prior.density(), prior.derivative(), jump);
}

BoundReport mi_bound_finite_support(const FisherProfile& profile,
                                    std::size_t first, std::size_t last) {
  BoundReport r = make_report("mi_bound_finite_support", Units::kNats,
                              Direction::kUpperBoundOnMI);
  r.inputs.emplace_back("support_lower", format_double(profile.grid.at(first)));
  r.inputs.emplace_back("support_upper", format_double(profile.grid.at(last)));
  if (!profile.finite_on(first, last)) {
    r.set(Validity::kFisherDivergent);
    return r;
  }
  const double length = jeffreys_length(profile, first, last);
  r.details.emplace_back("jeffreys_length", length);
  r.value = std::log1p(0.5 * length);
  return r;
}

BoundReport mi_bound_finite_support(const FisherProfile& profile, double lower,
                                    double upper) {
  return mi_bound_finite_support(profile, profile.grid.index_of(lower),
                                 profile.grid.index_of(upper));
}

BoundReport mi_bound_finite_support(const FisherProfile& profile) {
  return mi_bound_finite_support(profile, 0, profile.grid.points() - 1);
}

BoundReport mi_bound_finite_support(const JointModel& joint) {
  const auto [first, last] = support_range(joint.prior());
  BoundReport r = mi_bound_finite_support(
      fisher_information(joint.conditional()), first, last);
  echo_joint(r, joint);
  return r;
}

BoundReport mi_bound_general_prior(const JointModel& joint) {
  BoundReport r = make_report("mi_bound_general_prior", Units::kNats,
                              Direction::kUpperBoundOnMI);
  echo_joint(r, joint);
  const GeneralPriorIntegral parts = general_prior_integral(joint);
  const double entropy = prior_entropy(joint.prior());
  r.details.emplace_back("integral", parts.total);
  r.details.emplace_back("log_term", std::log(0.5 * parts.total));
  r.details.emplace_back("prior_entropy", entropy);
  r.value = std::log(0.5 * parts.total) + entropy;
  return r;
}

WeightFunction weight_from_prior(const PriorDensity& prior) {
  return {std::vector<double>(prior.density().begin(), prior.density().end()),
          std::vector<double>(prior.derivative().begin(),
                              prior.derivative().end())};
}

WeightFunction plateau_weight(const ParameterGrid& grid, double lower,
                              double upper, double ramp) {
  if (!(upper > lower) || !(ramp > 0.0)) {
    throw ArgumentError("plateau_weight: need upper > lower and ramp > 0");
  }
  const double k = kPi / (2.0 * ramp);
  WeightFunction w;
  w.values.resize(grid.points());
  w.derivative.resize(grid.points());
  for (std::size_t j = 0; j < grid.points(); ++j) {
    const double phi = grid.at(j);
    double dist = 0.0;
    double sign = 0.0;
    if (phi < lower) {
      dist = lower - phi;
      sign = 1.0;
    } else if (phi > upper) {
      dist = phi - upper;
      sign = -1.0;
    }
    if (dist >= ramp) {
      w.values[j] = 0.0;
      w.derivative[j] = 0.0;
    } else {
      const double c = std::cos(k * dist);
      w.values[j] = c * c;
      // d/dphi cos^2(k dist) = -k sin(2 k dist) d(dist)/dphi, d(dist)/dphi = -sign.
      w.derivative[j] = sign * k * std::sin(2.0 * k * dist);
    }
  }
  return w;
}

BoundReport mi_bound_variational(const JointModel& joint,
                                 const WeightFunction& weight) {
  const auto& grid = joint.grid();
  const std::size_t n = grid.points();
  if (weight.values.size() != n || weight.derivative.size() != n) {
    throw ArgumentError("mi_bound_variational: weight does not match the grid");
  }
  const auto p = joint.prior().density();
  std::vector<double> log_term(n, 0.0);
  bool positive = false;
  for (std::size_t j = 0; j < n; ++j) {
    const double f = weight.values[j];
    if (!std::isfinite(f) || f < 0.0 || !std::isfinite(weight.derivative[j])) {
      throw ArgumentError("mi_bound_variational: weight negative or non-finite at node " +
                          std::to_string(j));
    }
    if (p[j] > 0.0) {
      if (!(f > 0.0)) {
        throw ArgumentError(
            "mi_bound_variational: weight vanishes where the prior is positive "
            "(node " + std::to_string(j) + ")");
      }
      log_term[j] = p[j] * std::log(f);
    }
    positive = positive || f > 0.0;
  }
  if (!positive) throw ArgumentError("mi_bound_variational: weight is identically zero");

  BoundReport r = make_report("mi_bound_variational", Units::kNats,
                              Direction::kUpperBoundOnMI);
  echo_joint(r, joint);
  const FisherProfile fisher = fisher_information(joint.conditional());
  // The weight is zero-extended outside the grid, so nonzero ends are jumps.
  const double jump = weight.values.front() + weight.values.back();
  const GeneralPriorIntegral parts =
      weighted_integral(fisher, weight.values, weight.derivative, jump);
  const double cross = integrate(log_term, grid);
  r.details.emplace_back("integral", parts.total);
  r.details.emplace_back("prior_log_weight", cross);
  r.value = std::log(0.5 * parts.total) - cross;
  return r;
}

PriorInformation prior_information(const PriorDensity& prior) {
  if (prior.is_rectangle() || prior.has_edges()) {
    return {std::numeric_limits<double>::infinity(), true};
  }
  const auto p = prior.density();
  const auto dp = prior.derivative();
  const auto d2p = prior.second_derivative();
  std::vector<double> integrand(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    bool divergent = false;
    std::optional<double> d2;
    if (!d2p.empty()) d2 = d2p[j];
    integrand[j] = fisher_summand(p[j], dp[j], d2, divergent);
    if (divergent) return {std::numeric_limits<double>::infinity(), true};
  }
  // p'^2 / p need not vanish where the density closes, so the quadrature
  // stops at the support ends instead of straddling the jump.
  const auto [first, last] = support_range(prior);
  return {integrate_range(integrand, prior.grid(), first, last), false};
}

double average_fisher(const JointModel& joint, const FisherProfile& profile) {
  const auto p = joint.prior().density();
  std::vector<double> integrand(p.size(), 0.0);
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] > 0.0) {
      if (profile.divergent[j]) return std::numeric_limits<double>::infinity();
      integrand[j] = profile.values[j] * p[j];
    }
  }
  return integrate(integrand, joint.grid());
}

BoundReport efroimovich_mi_bound(const JointModel& joint) {
  BoundReport r = make_report("efroimovich_mi_bound", Units::kNats,
                              Direction::kUpperBoundOnMI);
  echo_joint(r, joint);
  const PriorInformation info = prior_information(joint.prior());
  if (info.divergent) {
    r.set(Validity::kPriorInformationDivergent);
    return r;
  }
  const double avg = average_fisher(joint, fisher_information(joint.conditional()));
  if (!std::isfinite(avg)) {
    r.set(Validity::kFisherDivergent);
    return r;
  }
  const double entropy = prior_entropy(joint.prior());
  r.details.emplace_back("average_fisher", avg);
  r.details.emplace_back("prior_information", info.value);
  r.value = 0.5 * std::log((avg + info.value) / (2.0 * kPi * kE)) + entropy;
  return r;
}

double entropy_mse_floor(double conditional_entropy) {
  return std::exp(2.0 * conditional_entropy) / (2.0 * kPi * kE);
}

BoundReport van_trees(const JointModel& joint) {
  BoundReport r = make_report("van_trees", Units::kSquaredParameter,
                              Direction::kLowerBoundOnMSE);
  echo_joint(r, joint);
  const PriorInformation info = prior_information(joint.prior());
  if (info.divergent) {
    r.set(Validity::kPriorInformationDivergent);
    return r;
  }
  const double avg = average_fisher(joint, fisher_information(joint.conditional()));
  if (!std::isfinite(avg)) {
    r.set(Validity::kFisherDivergent);
    return r;
  }
  r.details.emplace_back("average_fisher", avg);
  r.details.emplace_back("prior_information", info.value);
  r.value = 1.0 / (avg + info.value);
  return r;
}

BoundReport mse_bound_finite_support(const JointModel& joint) {
  BoundReport r = make_report("mse_bound_finite_support",
                              Units::kSquaredParameter,
                              Direction::kLowerBoundOnMSE);
  echo_joint(r, joint);
  const auto [first, last] = support_range(joint.prior());
  const FisherProfile fisher = fisher_information(joint.conditional());
  if (!fisher.finite_on(first, last)) {
    r.set(Validity::kFisherDivergent);
    return r;
  }
  const double length = jeffreys_length(fisher, first, last);
  const double entropy = prior_entropy(joint.prior());
  const double denom = 1.0 + 0.5 * length;
  r.details.emplace_back("jeffreys_length", length);
  r.value = entropy_mse_floor(entropy) / (denom * denom);

  if (const auto* rect = std::get_if<RectangleShape>(&joint.prior().shape())) {
    const auto [lo, hi] = std::minmax_element(fisher.values.begin() + first,
                                              fisher.values.begin() + last + 1);
    if (*hi - *lo <= 1e-9 * std::max(1.0, *hi)) {
      const double root = std::sqrt(0.5 * (*hi + *lo));
      const double base = 2.0 / rect->width + root;
      r.details.emplace_back("rectangle_closed_form", kTwoOverPiE / (base * base));
    }
  }
  return r;
}

BoundReport mse_bound_general_prior(const JointModel& joint) {
  BoundReport r = make_report("mse_bound_general_prior",
                              Units::kSquaredParameter,
                              Direction::kLowerBoundOnMSE);
  echo_joint(r, joint);
  const GeneralPriorIntegral parts = general_prior_integral(joint);
  r.details.emplace_back("integral", parts.total);
  r.value = kTwoOverPiE / (parts.total * parts.total);
  return r;
}

GaussianMseBounds gaussian_prior_mse_bounds(double fisher, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("gaussian_prior_mse_bounds: sigma must be > 0");
  }
  if (!(fisher >= 0.0) || !std::isfinite(fisher)) {
    throw DomainError("gaussian_prior_mse_bounds: F must be finite and >= 0");
  }
  const double z = 0.5 * fisher * sigma * sigma;
  // U(a, b, 0) = Gamma(1 - b) / Gamma(a - b + 1) for b < 1.
  const double u = z > 0.0 ? tricomi_u(-0.5, 0.0, z) : 1.0 / std::sqrt(kPi);
  const double integral = std::sqrt(2.0) / sigma * u;
  const double precision = fisher + 1.0 / (sigma * sigma);

  GaussianMseBounds out{};
  out.exact = make_report("mse_bound_gaussian_exact", Units::kSquaredParameter,
                          Direction::kLowerBoundOnMSE);
  out.simplified = make_report("mse_bound_gaussian_simplified",
                               Units::kSquaredParameter,
                               Direction::kLowerBoundOnMSE);
  for (BoundReport* r : {&out.exact, &out.simplified}) {
    r->inputs.emplace_back("F", format_double(fisher));
    r->inputs.emplace_back("sigma", format_double(sigma));
  }
  out.exact.details.emplace_back("integral", integral);
  out.exact.details.emplace_back("tricomi_u", u);
  out.exact.value = kTwoOverPiE / (integral * integral);
  out.simplified.value = kTwoOverPiE / precision;
  out.u_ratio = std::sqrt(precision) / integral;
  return out;
}

}  // namespace mibound
