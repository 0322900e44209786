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

// Fisher-information bounds on mutual information and the Bayesian
// mean-square-error bounds that follow from them.
//
// Every bound is returned as a BoundReport tagged with its units and its
// direction, so a mutual-information upper bound cannot be compared against
// an MSE lower bound by accident. Mutual information is in nats.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mibound/stat_model.hpp"

namespace mibound {

enum class Units { kNats, kSquaredParameter };
enum class Direction { kUpperBoundOnMI, kLowerBoundOnMSE };

enum class Validity : std::uint32_t {
  kPriorInformationDivergent = 1u << 0,
  kFisherDivergent = 1u << 1,
  kAmplitudeDampingCapCaveat = 1u << 2,
  kNoiselessLimit = 1u << 3,
};

struct BoundReport {
  std::string name;
  /// Absent when a validity flag marks the bound as inapplicable.
  std::optional<double> value;
  Units units = Units::kNats;
  Direction direction = Direction::kUpperBoundOnMI;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::uint32_t flags = 0;
  /// Secondary numbers (closed forms, intermediate integrals).
  std::vector<std::pair<std::string, double>> details;

  bool has(Validity v) const { return (flags & static_cast<std::uint32_t>(v)) != 0; }
  void set(Validity v) { flags |= static_cast<std::uint32_t>(v); }
  /// The value; NumericError if absent.
  double require() const;
  std::optional<double> detail(const std::string& key) const;
  /// Semicolon-separated flag names, empty when valid.
  std::string flag_text() const;
};

/// Pointwise sqrt(F p^2 + p'^2).
std::vector<double> joint_derivative_l1_bound(const JointModel& joint);

/// Pointwise sum_x |d p(x, phi) / d phi|, the quantity bounded above.
std::vector<double> joint_derivative_l1_sum(const JointModel& joint);

/// The integral in the general-prior bound and its two halves.
/// `total` = int sqrt(F p^2 + p'^2) + jumps; `fisher_part` = int sqrt(F) p;
/// `prior_part` = int |p'| + jumps. Jumps at declared edges contribute the
/// boundary densities.
struct GeneralPriorIntegral {
  double total;
  double fisher_part;
  double prior_part;
};
GeneralPriorIntegral general_prior_integral(const JointModel& joint);

/// ln(1 + jeffreys_length / 2) over the node range [first, last].
BoundReport mi_bound_finite_support(const FisherProfile& profile,
                                    std::size_t first, std::size_t last);
BoundReport mi_bound_finite_support(const FisherProfile& profile, double lower,
                                    double upper);
BoundReport mi_bound_finite_support(const FisherProfile& profile);
/// Over the support of the joint's prior: the nodes where it is positive,
/// closed by the neighbouring zero nodes.
BoundReport mi_bound_finite_support(const JointModel& joint);

/// ln(int sqrt(F p^2 + p'^2) / 2) + H(phi).
BoundReport mi_bound_general_prior(const JointModel& joint);

/// Positive weight on the grid with its derivative.
struct WeightFunction {
  std::vector<double> values;
  std::vector<double> derivative;
};

/// Weight equal to the prior density.
WeightFunction weight_from_prior(const PriorDensity& prior);

/// 1 on [lower, upper], cos^2 ramps of width `ramp` down to 0 outside.
WeightFunction plateau_weight(const ParameterGrid& grid, double lower,
                              double upper, double ramp);

/// ln(int sqrt(F f^2 + f'^2) / 2) - int p ln f.
BoundReport mi_bound_variational(const JointModel& joint,
                                 const WeightFunction& weight);

struct PriorInformation {
  double value;
  bool divergent;
};

/// P = int p'^2 / p. Divergent for priors with edges.
PriorInformation prior_information(const PriorDensity& prior);

/// int F p over the prior's support. Infinite if F diverges where p > 0.
double average_fisher(const JointModel& joint, const FisherProfile& profile);

BoundReport efroimovich_mi_bound(const JointModel& joint);

/// exp(2 h) / (2 pi e): the MSE floor implied by a conditional entropy h.
double entropy_mse_floor(double conditional_entropy);

BoundReport van_trees(const JointModel& joint);

/// [exp(2 H) / (2 pi e)] / (1 + jeffreys_length(support) / 2)^2. For a
/// rectangle prior with constant F the closed form is attached as the
/// "rectangle_closed_form" detail.
BoundReport mse_bound_finite_support(const JointModel& joint);

/// (2 / (pi e)) / (int sqrt(F p^2 + p'^2))^2.
BoundReport mse_bound_general_prior(const JointModel& joint);

/// Closed-form MSE bounds for a Gaussian prior of width sigma and constant F.
/// `u_ratio` is sqrt(F + 1/sigma^2) divided by the exact integral; the
/// simplified bound equals exact / u_ratio^2.
struct GaussianMseBounds {
  BoundReport exact;
  BoundReport simplified;
  double u_ratio;
};
GaussianMseBounds gaussian_prior_mse_bounds(double fisher, double sigma);

}  // namespace mibound
