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

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mibound/stat_model.hpp"

namespace mibound {

/// Binary model p(1|phi) = cos^2(phi/2), p(0|phi) = sin^2(phi/2). F = 1.
ConditionalModel cos2_model(const ParameterGrid& grid);

/// phi-independent outcome distribution.
ConditionalModel constant_model(const ParameterGrid& grid,
                                const std::vector<double>& probabilities);

/// Outcome x reports which of `cells` equal-width cells contains phi.
/// Derivatives are zero away from cell boundaries; used only as an oracle
/// fixture (MI = ln cells under a uniform prior).
ConditionalModel cell_indicator_model(const ParameterGrid& grid,
                                      std::size_t cells);

struct RandomModelOptions {
  std::size_t min_outcomes = 2;
  std::size_t max_outcomes = 8;
  std::size_t max_degree = 3;
  double amplitude = 1.5;
  /// Each probability is mixed as (1 - K floor) p + floor, keeping it away
  /// from zero. Zero disables the floor.
  double floor = 0.0;
};

/// Deterministic generator stream for item `index` of a seeded batch.
std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t index);

/// Softmax of trigonometric polynomials of bounded degree: smooth, strictly
/// positive rows with analytic first and second derivatives.
ConditionalModel random_smooth_model(const ParameterGrid& grid,
                                     std::mt19937_64& rng,
                                     const RandomModelOptions& options = {});

/// sin^2 window over the grid times exp(trigonometric polynomial): a smooth
/// prior vanishing at both grid ends, with analytic derivatives.
PriorDensity random_smooth_prior(const ParameterGrid& grid,
                                 std::mt19937_64& rng);

/// Random joint on [0, pi] with `points` nodes, drawn from stream (seed, index).
JointModel random_joint(std::uint64_t seed, std::uint64_t index,
                        std::size_t points,
                        const RandomModelOptions& options = {});

}  // namespace mibound
