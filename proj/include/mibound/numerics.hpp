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

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mibound {

/// Uniform discretization of a closed parameter interval [lower, upper].
///
/// The point count is odd so that composite Simpson quadrature covers the
/// whole grid without a correction panel.
class ParameterGrid {
 public:
  /// Throws ArgumentError unless upper > lower, points >= 3 and points odd.
  ParameterGrid(double lower, double upper, std::size_t points);

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  std::size_t points() const { return points_; }
  double spacing() const { return spacing_; }
  double width() const { return upper_ - lower_; }

  double at(std::size_t i) const;
  std::vector<double> nodes() const;

  /// Samples f at every node.
  std::vector<double> sample(const std::function<double(double)>& f) const;

  /// Index of the node nearest to phi; ArgumentError if phi lies farther
  /// than `tolerance * spacing` from every node.
  std::size_t index_of(double phi, double tolerance = 1e-6) const;

  bool operator==(const ParameterGrid& other) const = default;

 private:
  double lower_;
  double upper_;
  std::size_t points_;
  double spacing_;
};

/// Composite Simpson estimate of the integral of `samples` over the grid.
/// Exact for cubic polynomials.
double integrate(std::span<const double> samples, const ParameterGrid& grid);

/// Integral over the node range [first, last] (inclusive). An even number of
/// panels uses Simpson throughout; an odd number closes with a 3/8 panel.
double integrate_range(std::span<const double> samples,
                       const ParameterGrid& grid, std::size_t first,
                       std::size_t last);

/// Second-order central differences with second-order one-sided stencils at
/// both ends.
std::vector<double> central_difference(std::span<const double> samples,
                                       const ParameterGrid& grid);

/// Tricomi confluent hypergeometric function U(a, b, z) for z > 0.
///
/// For a in [1/2, 3/2) the integral representation is evaluated after the
/// substitution t = tan^2(theta), which turns it into a smooth finite-range
/// integral. Other values of a are reached through the three-term
/// recurrence in a. Accuracy is validated on U(-1/2, 0, z).
double tricomi_u(double a, double b, double z);

}  // namespace mibound
