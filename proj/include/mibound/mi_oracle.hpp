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

// Brute-force ground truth for the bounds: mutual information, posterior
// entropy and the minimal Bayes quadratic cost by direct quadrature, plus a
// Monte-Carlo study of the maximum-likelihood estimator.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mibound/stat_model.hpp"

namespace mibound {

enum class Estimator { kPosteriorMean, kMaximumLikelihood };

struct OracleResult {
  double mi = 0.0;           // I(x, phi), nats
  double h_prior = 0.0;      // H(phi)
  double h_posterior = 0.0;  // H(phi | x)
  double bayes_mse = 0.0;    // E[(estimate - phi)^2]
  Estimator estimator = Estimator::kPosteriorMean;
};

/// MI, entropies and the posterior-mean Bayes cost of a joint model.
OracleResult mutual_information(const JointModel& joint);

/// Minimal Bayes quadratic cost E[Var(phi | x)].
double bayes_quadratic_cost(const JointModel& joint);

/// N independent samples per parameter draw, same prior.
JointModel repeat_model(const JointModel& joint, std::size_t samples,
                        std::size_t max_outcomes = 4096);

/// Grid index maximizing sum_x counts[x] ln p(x|phi); ties go to the
/// smallest index.
std::size_t ml_estimate_index(const ConditionalModel& model,
                              std::span<const std::size_t> counts);

/// The joint model of (phi, ML estimate): outcomes sharing the same
/// maximum-likelihood node are merged. `estimates` receives the node index
/// of each merged outcome.
JointModel ml_estimate_model(const JointModel& joint,
                             std::vector<std::size_t>* estimates = nullptr);

struct MleStudyRow {
  std::size_t samples = 0;
  /// Plug-in estimate of H(phi | ML estimate), histogram bin = grid spacing.
  double conditional_entropy = 0.0;
  /// -1/2 ln[N int F p / (2 pi e)].
  double asymptote = 0.0;
  double gap = 0.0;
  std::size_t occupied_cells = 0;
  /// Fewer than five trials per occupied histogram cell.
  bool undersampled = false;
};

/// Monte-Carlo study of the ML estimator. Each trial draws phi from the
/// prior (on grid nodes), draws N outcomes and records the ML node. Trial t
/// uses its own generator stream derived from (seed, t), so results do not
/// depend on evaluation order; the same phi draws are shared across N.
std::vector<MleStudyRow> mle_convergence_study(
    const JointModel& joint, std::span<const std::size_t> sample_counts,
    std::size_t trials, std::uint64_t seed);

}  // namespace mibound
