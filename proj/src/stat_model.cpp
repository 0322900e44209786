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

#include "mibound/stat_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "mibound/errors.hpp"

namespace mibound {

namespace {

constexpr double kPi = std::numbers::pi;

// Relative end value above which a density is treated as truncated.
constexpr double kEdgeThreshold = 1e-8;

// |dp| below this counts as zero when p = 0.
constexpr double kZeroDerivative = 1e-10;

}  // namespace

// ---------------------------------------------------------------------------
// PriorDensity

PriorDensity::PriorDensity(ParameterGrid grid, std::vector<double> density,
                           std::vector<double> derivative,
                           std::vector<double> second, PriorShape shape,
                           bool has_edges)
    : grid_(std::move(grid)),
      density_(std::move(density)),
      derivative_(std::move(derivative)),
      second_(std::move(second)),
      shape_(shape),
      has_edges_(has_edges) {
  validate();
}

void PriorDensity::validate() const {
  const std::size_t n = grid_.points();
  if (density_.size() != n || derivative_.size() != n ||
      (!second_.empty() && second_.size() != n)) {
    throw ArgumentError("PriorDensity: table sizes do not match the grid");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(density_[j]) || density_[j] < 0.0) {
      throw ArgumentError("PriorDensity: density must be finite and >= 0 (node " +
                          std::to_string(j) + ")");
    }
    if (!std::isfinite(derivative_[j])) {
      throw NumericError("PriorDensity: non-finite derivative at node " +
                         std::to_string(j));
    }
  }
  const double mass = integrate(density_, grid_);
  if (std::abs(mass - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "PriorDensity: density integrates to " << mass << ", expected 1";
    throw ArgumentError(msg.str());
  }
}

PriorDensity PriorDensity::rectangle(double center, double width,
                                     std::size_t points) {
  if (!(width > 0.0)) throw ArgumentError("rectangle prior: width must be > 0");
  ParameterGrid grid(center - 0.5 * width, center + 0.5 * width, points);
  std::vector<double> density(points, 1.0 / width);
  std::vector<double> zeros(points, 0.0);
  return PriorDensity(std::move(grid), std::move(density), zeros, zeros,
                      RectangleShape{center, width}, true);
}

PriorDensity PriorDensity::gaussian(double mean, double sigma,
                                    const ParameterGrid& grid) {
  if (!(sigma > 0.0)) throw DomainError("gaussian prior: sigma must be > 0");
  const double norm = 1.0 / std::sqrt(2.0 * kPi * sigma * sigma);
  const double s2 = sigma * sigma;
  auto value = [&](double phi) {
    const double u = phi - mean;
    return norm * std::exp(-u * u / (2.0 * s2));
  };
  std::vector<double> density = grid.sample(value);
  const double mass = integrate(density, grid);
  if (!(mass > 0.0)) {
    throw ArgumentError("gaussian prior: no mass on the grid");
  }
  // Truncation to the grid: renormalize. For grids spanning many sigma the
  // factor is 1 to rounding and the closed forms are unaffected.
  std::vector<double> first(grid.points());
  std::vector<double> second(grid.points());
  for (std::size_t j = 0; j < grid.points(); ++j) {
    density[j] /= mass;
    const double u = grid.at(j) - mean;
    first[j] = -u / s2 * density[j];
    second[j] = (u * u / (s2 * s2) - 1.0 / s2) * density[j];
  }
  const double peak = *std::max_element(density.begin(), density.end());
  const bool truncated =
      std::max(density.front(), density.back()) > kEdgeThreshold * peak;
  return PriorDensity(grid, std::move(density), std::move(first),
                      std::move(second), GaussianShape{mean, sigma}, truncated);
}

PriorDensity PriorDensity::gaussian(double mean, double sigma,
                                    std::size_t points,
                                    double half_width_sigmas) {
  if (!(sigma > 0.0)) throw DomainError("gaussian prior: sigma must be > 0");
  return gaussian(mean, sigma,
                  ParameterGrid(mean - half_width_sigmas * sigma,
                                mean + half_width_sigmas * sigma, points));
}

PriorDensity PriorDensity::cosine_window(double center, double width,
                                         const ParameterGrid& grid) {
  if (!(width > 0.0)) throw ArgumentError("cosine window: width must be > 0");
  const double k = kPi / width;
  const double amp = 2.0 / width;
  // Density and slope vanish on the closed edge; the second derivative keeps
  // its inside limit there.
  auto inside = [=](double phi) { return std::abs(phi - center) < 0.5 * width; };
  auto value = [=](double phi) {
    if (!inside(phi)) return 0.0;
    const double c = std::cos(k * (phi - center));
    return amp * c * c;
  };
  auto first = [=](double phi) {
    if (!inside(phi)) return 0.0;
    return -amp * k * std::sin(2.0 * k * (phi - center));
  };
  auto second = [=](double phi) {
    if (std::abs(phi - center) > 0.5 * width * (1.0 + 1e-12)) return 0.0;
    return -2.0 * amp * k * k * std::cos(2.0 * k * (phi - center));
  };
  PriorDensity out = analytic(grid, value, first, second, false);
  out.shape_ = TabulatedShape{};
  return out;
}

PriorDensity PriorDensity::analytic(const ParameterGrid& grid,
                                    const Function& value,
                                    const Function& first,
                                    const Function& second, bool normalize) {
  std::vector<double> density = grid.sample(value);
  std::vector<double> d1 = grid.sample(first);
  std::vector<double> d2;
  if (second) d2 = grid.sample(second);
  if (normalize) {
    const double mass = integrate(density, grid);
    if (!(mass > 0.0)) throw ArgumentError("analytic prior: zero mass");
    for (auto& v : density) v /= mass;
    for (auto& v : d1) v /= mass;
    for (auto& v : d2) v /= mass;
  }
  const double peak = *std::max_element(density.begin(), density.end());
  const bool truncated =
      std::max(density.front(), density.back()) > kEdgeThreshold * peak;
  return PriorDensity(grid, std::move(density), std::move(d1), std::move(d2),
                      TabulatedShape{}, truncated);
}

PriorDensity PriorDensity::tabulated(const ParameterGrid& grid,
                                     std::vector<double> values, bool edges) {
  if (values.size() != grid.points()) {
    throw ArgumentError("tabulated prior: expected " +
                        std::to_string(grid.points()) + " values, got " +
                        std::to_string(values.size()));
  }
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (!std::isfinite(values[j]) || values[j] < 0.0) {
      throw ArgumentError("tabulated prior: value at node " + std::to_string(j) +
                          " is negative or non-finite");
    }
  }
  const double mass = integrate(values, grid);
  if (!(mass > 0.0)) throw ArgumentError("tabulated prior: zero mass");
  for (auto& v : values) v /= mass;
  std::vector<double> d1 = central_difference(values, grid);
  return PriorDensity(grid, std::move(values), std::move(d1), {},
                      TabulatedShape{}, edges);
}

double PriorDensity::boundary_jump() const {
  return density_.front() + density_.back();
}

double PriorDensity::relative_boundary_value() const {
  const double peak = *std::max_element(density_.begin(), density_.end());
  return std::max(density_.front(), density_.back()) / peak;
}

std::string PriorDensity::label() const {
  std::ostringstream out;
  out.precision(6);
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RectangleShape>) {
          out << "rectangle(center=" << s.center << ";width=" << s.width << ")";
        } else if constexpr (std::is_same_v<T, GaussianShape>) {
          out << "gaussian(mean=" << s.mean << ";sigma=" << s.sigma << ")";
        } else {
          out << "tabulated";
        }
      },
      shape_);
  return out.str();
}

// ---------------------------------------------------------------------------
// ConditionalModel

ConditionalModel::ConditionalModel(ParameterGrid grid, std::size_t outcomes,
                                   std::vector<double> prob,
                                   std::vector<double> first,
                                   std::vector<double> second,
                                   DerivativeSource source, std::string name)
    : grid_(std::move(grid)),
      outcomes_(outcomes),
      prob_(std::move(prob)),
      first_(std::move(first)),
      second_(std::move(second)),
      source_(source),
      name_(std::move(name)) {
  validate();
}

void ConditionalModel::validate() const {
  const std::size_t n = grid_.points();
  if (outcomes_ == 0) throw ArgumentError("ConditionalModel: empty alphabet");
  const std::size_t size = outcomes_ * n;
  if (prob_.size() != size || first_.size() != size ||
      (!second_.empty() && second_.size() != size)) {
    throw ArgumentError("ConditionalModel: table sizes do not match");
  }
  for (std::size_t j = 0; j < n; ++j) {
    double total = 0.0;
    double slope = 0.0;
    for (std::size_t x = 0; x < outcomes_; ++x) {
      const double p = prob(x, j);
      if (!std::isfinite(p) || p < 0.0) {
        throw ArgumentError("ConditionalModel: p(" + std::to_string(x) +
                            "|phi) invalid at node " + std::to_string(j));
      }
      if (!std::isfinite(dprob(x, j))) {
        throw NumericError("ConditionalModel: non-finite derivative at node " +
                           std::to_string(j));
      }
      total += p;
      slope += dprob(x, j);
    }
    if (std::abs(total - 1.0) > 1e-9) {
      std::ostringstream msg;
      msg << "ConditionalModel: probabilities sum to " << total << " at node "
          << j;
      throw ArgumentError(msg.str());
    }
    if (std::abs(slope) > 1e-6) {
      std::ostringstream msg;
      msg << "ConditionalModel: derivatives sum to " << slope << " at node "
          << j;
      throw ArgumentError(msg.str());
    }
  }
}

ConditionalModel ConditionalModel::from_functions(const ParameterGrid& grid,
                                                  std::size_t outcomes,
                                                  const Function& prob,
                                                  const Function& first,
                                                  const Function& second,
                                                  std::string name) {
  const std::size_t n = grid.points();
  std::vector<double> p(outcomes * n);
  std::vector<double> d1(outcomes * n);
  std::vector<double> d2;
  if (second) d2.resize(outcomes * n);
  for (std::size_t x = 0; x < outcomes; ++x) {
    for (std::size_t j = 0; j < n; ++j) {
      const double phi = grid.at(j);
      p[x * n + j] = prob(x, phi);
      d1[x * n + j] = first(x, phi);
      if (second) d2[x * n + j] = second(x, phi);
    }
  }
  return ConditionalModel(grid, outcomes, std::move(p), std::move(d1),
                          std::move(d2), DerivativeSource::kAnalytic,
                          std::move(name));
}

ConditionalModel ConditionalModel::tabulated(
    const ParameterGrid& grid, const std::vector<std::vector<double>>& rows,
    std::string name) {
  const std::size_t n = grid.points();
  std::vector<double> p;
  std::vector<double> d1;
  p.reserve(rows.size() * n);
  d1.reserve(rows.size() * n);
  for (std::size_t x = 0; x < rows.size(); ++x) {
    if (rows[x].size() != n) {
      throw ArgumentError("tabulated model: row " + std::to_string(x) + " has " +
                          std::to_string(rows[x].size()) + " values, expected " +
                          std::to_string(n));
    }
    const auto d = central_difference(rows[x], grid);
    p.insert(p.end(), rows[x].begin(), rows[x].end());
    d1.insert(d1.end(), d.begin(), d.end());
  }
  return ConditionalModel(grid, rows.size(), std::move(p), std::move(d1), {},
                          DerivativeSource::kFiniteDifference, std::move(name));
}

ConditionalModel ConditionalModel::from_tables(
    const ParameterGrid& grid, std::size_t outcomes, std::vector<double> prob,
    std::vector<double> first, std::vector<double> second,
    DerivativeSource source, std::string name) {
  return ConditionalModel(grid, outcomes, std::move(prob), std::move(first),
                          std::move(second), source, std::move(name));
}

ConditionalModel independent_product(const ConditionalModel& model,
                                     std::size_t copies,
                                     std::size_t max_outcomes) {
  if (copies == 0) throw ArgumentError("independent_product: copies must be >= 1");
  if (copies == 1) return model;
  const std::size_t k = model.outcomes();
  double count = std::pow(static_cast<double>(k), static_cast<double>(copies));
  if (count > static_cast<double>(max_outcomes)) {
    throw ResourceError("independent_product: " + std::to_string(k) + "^" +
                        std::to_string(copies) +
                        " outcomes exceed the budget of " +
                        std::to_string(max_outcomes) +
                        "; use a Monte-Carlo study instead");
  }
  const std::size_t total = static_cast<std::size_t>(count);
  const std::size_t n = model.grid().points();
  const bool with_second = model.has_second_derivative();
  std::vector<double> p(total * n);
  std::vector<double> d1(total * n);
  std::vector<double> d2(with_second ? total * n : 0);
  std::vector<std::size_t> digits(copies);
  for (std::size_t outcome = 0; outcome < total; ++outcome) {
    std::size_t rest = outcome;
    for (std::size_t c = copies; c-- > 0;) {
      digits[c] = rest % k;
      rest /= k;
    }
    for (std::size_t j = 0; j < n; ++j) {
      // Product rule over the factors, accumulated incrementally:
      // (P, P', P'') <- (P f, P' f + P f', P'' f + 2 P' f' + P f'').
      double value = 1.0;
      double slope = 0.0;
      double curvature = 0.0;
      for (std::size_t c = 0; c < copies; ++c) {
        const double f = model.prob(digits[c], j);
        const double df = model.dprob(digits[c], j);
        const double ddf = model.d2prob(digits[c], j);
        curvature = curvature * f + 2.0 * slope * df + value * ddf;
        slope = slope * f + value * df;
        value *= f;
      }
      p[outcome * n + j] = value;
      d1[outcome * n + j] = slope;
      if (with_second) d2[outcome * n + j] = curvature;
    }
  }
  return ConditionalModel::from_tables(
      model.grid(), total, std::move(p), std::move(d1), std::move(d2),
      model.source(), model.name() + "^" + std::to_string(copies));
}

// ---------------------------------------------------------------------------
// JointModel

JointModel::JointModel(PriorDensity prior, ConditionalModel conditional)
    : prior_(std::move(prior)), conditional_(std::move(conditional)) {
  if (!(prior_.grid() == conditional_.grid())) {
    throw ArgumentError("JointModel: prior and conditional use different grids");
  }
}

// ---------------------------------------------------------------------------
// Fisher information and entropies

bool FisherProfile::any_divergent() const {
  return std::find(divergent.begin(), divergent.end(), true) != divergent.end();
}

bool FisherProfile::finite_on(std::size_t first, std::size_t last) const {
  for (std::size_t j = first; j <= last; ++j) {
    if (divergent[j] || !std::isfinite(values[j])) return false;
  }
  return true;
}

double fisher_summand(double p, double dp, std::optional<double> d2p,
                      bool& divergent) {
  if (p > 0.0) return dp * dp / p;
  if (std::abs(dp) <= kZeroDerivative) {
    // Double zero of p: dp^2 / p -> 2 p'' along the family.
    return d2p ? std::max(0.0, 2.0 * *d2p) : 0.0;
  }
  divergent = true;
  return std::numeric_limits<double>::infinity();
}

FisherProfile fisher_information(const ConditionalModel& model) {
  const std::size_t n = model.grid().points();
  FisherProfile out{model.grid(), std::vector<double>(n, 0.0),
                    std::vector<bool>(n, false)};
  const bool second = model.has_second_derivative();
  for (std::size_t j = 0; j < n; ++j) {
    double total = 0.0;
    bool divergent = false;
    for (std::size_t x = 0; x < model.outcomes(); ++x) {
      std::optional<double> d2;
      if (second) d2 = model.d2prob(x, j);
      total += fisher_summand(model.prob(x, j), model.dprob(x, j), d2, divergent);
    }
    out.values[j] = total;
    out.divergent[j] = divergent;
  }
  return out;
}

double jeffreys_length(const FisherProfile& profile, std::size_t first,
                       std::size_t last) {
  if (first > last || last >= profile.grid.points()) {
    throw ArgumentError("jeffreys_length: support outside the grid");
  }
  if (!profile.finite_on(first, last)) {
    throw NumericError("jeffreys_length: Fisher information diverges on the support");
  }
  std::vector<double> root(profile.values.size(), 0.0);
  for (std::size_t j = first; j <= last; ++j) root[j] = std::sqrt(profile.values[j]);
  return integrate_range(root, profile.grid, first, last);
}

double jeffreys_length(const FisherProfile& profile, double lower,
                       double upper) {
  return jeffreys_length(profile, profile.grid.index_of(lower),
                         profile.grid.index_of(upper));
}

double jeffreys_length(const FisherProfile& profile) {
  return jeffreys_length(profile, 0, profile.grid.points() - 1);
}

double prior_entropy(const PriorDensity& prior) {
  const auto p = prior.density();
  std::vector<double> integrand(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    integrand[j] = p[j] > 0.0 ? -p[j] * std::log(p[j]) : 0.0;
  }
  return integrate(integrand, prior.grid());
}

std::vector<double> marginal_outcome(const JointModel& joint) {
  const auto& model = joint.conditional();
  const auto prior = joint.prior().density();
  std::vector<double> out(model.outcomes());
  std::vector<double> row(prior.size());
  for (std::size_t x = 0; x < model.outcomes(); ++x) {
    for (std::size_t j = 0; j < prior.size(); ++j) {
      row[j] = model.prob(x, j) * prior[j];
    }
    out[x] = integrate(row, joint.grid());
  }
  return out;
}

}  // namespace mibound
