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

// Estimation problems on a parameter grid: the prior p(phi), the outcome
// model p(x|phi), their joint distribution, and the Fisher information and
// entropies derived from them. All quantities are in nats.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mibound/numerics.hpp"

namespace mibound {

struct RectangleShape {
  double center;
  double width;
};

struct GaussianShape {
  double mean;
  double sigma;
};

struct TabulatedShape {};

using PriorShape = std::variant<RectangleShape, GaussianShape, TabulatedShape>;

/// Prior density p(phi) sampled on a grid, with its first derivative and,
/// when known analytically, its second derivative.
///
/// The density is taken to vanish outside the grid. A prior whose value at
/// either grid end is not negligible has a jump there; such jumps must be
/// declared (`has_edges`) before bounds that differentiate the prior accept
/// it. Rectangle priors live on a grid spanning exactly their support and
/// declare both ends as edges.
class PriorDensity {
 public:
  using Function = std::function<double(double)>;

  /// Uniform density 1/width on a grid covering [center - width/2, center + width/2].
  static PriorDensity rectangle(double center, double width, std::size_t points);

  /// Gaussian density evaluated analytically on `grid` (not renormalized).
  static PriorDensity gaussian(double mean, double sigma,
                               const ParameterGrid& grid);

  /// Gaussian on mean +- half_width_sigmas * sigma.
  static PriorDensity gaussian(double mean, double sigma, std::size_t points,
                               double half_width_sigmas = 10.0);

  /// Normalized cosine-squared window (2/width) cos^2(pi (phi - center) / width)
  /// supported on [center - width/2, center + width/2]. Its prior information
  /// is 4 pi^2 / width^2.
  static PriorDensity cosine_window(double center, double width,
                                    const ParameterGrid& grid);

  /// Arbitrary smooth density given by closures. When `normalize` is set the
  /// closures are divided by their grid integral. `second` may be empty.
  static PriorDensity analytic(const ParameterGrid& grid, const Function& value,
                               const Function& first, const Function& second,
                               bool normalize = true);

  /// Tabulated density, renormalized to unit mass; derivatives by central
  /// differences. `edges` declares jumps at the grid ends.
  static PriorDensity tabulated(const ParameterGrid& grid,
                                std::vector<double> values, bool edges = false);

  const ParameterGrid& grid() const { return grid_; }
  std::span<const double> density() const { return density_; }
  std::span<const double> derivative() const { return derivative_; }
  /// Empty when no analytic second derivative is available.
  std::span<const double> second_derivative() const { return second_; }
  const PriorShape& shape() const { return shape_; }
  bool has_edges() const { return has_edges_; }
  bool is_rectangle() const {
    return std::holds_alternative<RectangleShape>(shape_);
  }

  /// Total jump |p| across the grid ends, i.e. the mass of the delta
  /// functions in the derivative of the zero-extended density.
  double boundary_jump() const;

  /// Largest end value relative to the peak density.
  double relative_boundary_value() const;

  /// Short label such as "rectangle(d=3.14159)" used in report echoes.
  std::string label() const;

 private:
  PriorDensity(ParameterGrid grid, std::vector<double> density,
               std::vector<double> derivative, std::vector<double> second,
               PriorShape shape, bool has_edges);
  void validate() const;

  ParameterGrid grid_;
  std::vector<double> density_;
  std::vector<double> derivative_;
  std::vector<double> second_;
  PriorShape shape_;
  bool has_edges_;
};

enum class DerivativeSource { kAnalytic, kFiniteDifference };

/// Outcome distribution p(x|phi) over a finite alphabet, tabulated on a grid
/// together with d/dphi (and optionally d^2/dphi^2).
///
/// Construction checks sum_x p(x|phi) = 1 within 1e-9 and
/// sum_x dp(x|phi)/dphi = 0 within 1e-6 at every node.
class ConditionalModel {
 public:
  using Function = std::function<double(std::size_t outcome, double phi)>;

  /// Model from closures. `second` may be empty.
  static ConditionalModel from_functions(const ParameterGrid& grid,
                                         std::size_t outcomes,
                                         const Function& prob,
                                         const Function& first,
                                         const Function& second,
                                         std::string name);

  /// Tabulated rows[x][j]; derivatives by central differences.
  static ConditionalModel tabulated(const ParameterGrid& grid,
                                    const std::vector<std::vector<double>>& rows,
                                    std::string name = "tabulated");

  /// Raw outcome-major tables of size outcomes * grid.points().
  static ConditionalModel from_tables(const ParameterGrid& grid,
                                      std::size_t outcomes,
                                      std::vector<double> prob,
                                      std::vector<double> first,
                                      std::vector<double> second,
                                      DerivativeSource source, std::string name);

  const ParameterGrid& grid() const { return grid_; }
  std::size_t outcomes() const { return outcomes_; }
  DerivativeSource source() const { return source_; }
  const std::string& name() const { return name_; }
  bool has_second_derivative() const { return !second_.empty(); }

  double prob(std::size_t x, std::size_t j) const {
    return prob_[x * grid_.points() + j];
  }
  double dprob(std::size_t x, std::size_t j) const {
    return first_[x * grid_.points() + j];
  }
  /// Zero when the second derivative is unavailable.
  double d2prob(std::size_t x, std::size_t j) const {
    return second_.empty() ? 0.0 : second_[x * grid_.points() + j];
  }
  std::span<const double> prob_row(std::size_t x) const {
    return std::span<const double>(prob_).subspan(x * grid_.points(),
                                                  grid_.points());
  }
  std::span<const double> dprob_row(std::size_t x) const {
    return std::span<const double>(first_).subspan(x * grid_.points(),
                                                   grid_.points());
  }

 private:
  ConditionalModel(ParameterGrid grid, std::size_t outcomes,
                   std::vector<double> prob, std::vector<double> first,
                   std::vector<double> second, DerivativeSource source,
                   std::string name);
  void validate() const;

  ParameterGrid grid_;
  std::size_t outcomes_;
  std::vector<double> prob_;
  std::vector<double> first_;
  std::vector<double> second_;
  DerivativeSource source_;
  std::string name_;
};

/// N independent copies of `model`: outcomes are tuples encoded in base K
/// with the first copy most significant. Throws ResourceError when
/// K^copies exceeds `max_outcomes`.
ConditionalModel independent_product(const ConditionalModel& model,
                                     std::size_t copies,
                                     std::size_t max_outcomes = 4096);

/// p(x, phi) = p(x|phi) p(phi). Both parts must share the same grid.
class JointModel {
 public:
  JointModel(PriorDensity prior, ConditionalModel conditional);

  const PriorDensity& prior() const { return prior_; }
  const ConditionalModel& conditional() const { return conditional_; }
  const ParameterGrid& grid() const { return prior_.grid(); }

  double joint(std::size_t x, std::size_t j) const {
    return conditional_.prob(x, j) * prior_.density()[j];
  }

 private:
  PriorDensity prior_;
  ConditionalModel conditional_;
};

/// Pointwise Fisher information. `divergent[j]` is set where some outcome has
/// p = 0 with nonzero derivative; the value there is +inf.
struct FisherProfile {
  ParameterGrid grid;
  std::vector<double> values;
  std::vector<bool> divergent;

  bool any_divergent() const;
  /// True when every node in [first, last] is finite.
  bool finite_on(std::size_t first, std::size_t last) const;
};

/// Single outcome's contribution dp^2 / p. When p and dp both vanish the
/// contribution is the limit 2 d2p if a second derivative is supplied and
/// zero otherwise. p = 0 with dp != 0 returns +inf and sets `divergent`.
double fisher_summand(double p, double dp, std::optional<double> d2p,
                      bool& divergent);

FisherProfile fisher_information(const ConditionalModel& model);

/// Integral of sqrt(F) over the node range [first, last].
double jeffreys_length(const FisherProfile& profile, std::size_t first,
                       std::size_t last);

/// Integral of sqrt(F) over [lower, upper]; both ends must be grid nodes.
double jeffreys_length(const FisherProfile& profile, double lower,
                       double upper);

/// Integral of sqrt(F) over the whole grid.
double jeffreys_length(const FisherProfile& profile);

/// Differential entropy -int p ln p in nats, with 0 ln 0 = 0.
double prior_entropy(const PriorDensity& prior);

/// p_bar(x) = int p(x|phi) p(phi) dphi.
std::vector<double> marginal_outcome(const JointModel& joint);

}  // namespace mibound
