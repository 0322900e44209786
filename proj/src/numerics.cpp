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

#include "mibound/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mibound/errors.hpp"

namespace mibound {

ParameterGrid::ParameterGrid(double lower, double upper, std::size_t points)
    : lower_(lower), upper_(upper), points_(points), spacing_(0.0) {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(upper > lower)) {
    throw ArgumentError("ParameterGrid: need finite bounds with upper > lower");
  }
  if (points < 3 || points % 2 == 0) {
    throw ArgumentError("ParameterGrid: point count must be odd and >= 3, got " +
                        std::to_string(points));
  }
  spacing_ = (upper - lower) / static_cast<double>(points - 1);
}

double ParameterGrid::at(std::size_t i) const {
  // The last node is pinned to `upper` so that it carries no rounding drift.
  if (i + 1 == points_) return upper_;
  return lower_ + static_cast<double>(i) * spacing_;
}

std::vector<double> ParameterGrid::nodes() const {
  std::vector<double> out(points_);
  for (std::size_t i = 0; i < points_; ++i) out[i] = at(i);
  return out;
}

std::vector<double> ParameterGrid::sample(
    const std::function<double(double)>& f) const {
  std::vector<double> out(points_);
  for (std::size_t i = 0; i < points_; ++i) out[i] = f(at(i));
  return out;
}

std::size_t ParameterGrid::index_of(double phi, double tolerance) const {
  const double position = (phi - lower_) / spacing_;
  const double nearest = std::round(position);
  if (nearest < 0.0 || nearest > static_cast<double>(points_ - 1) ||
      std::abs(position - nearest) > tolerance) {
    throw ArgumentError("ParameterGrid: " + std::to_string(phi) +
                        " is not a grid node");
  }
  return static_cast<std::size_t>(nearest);
}

namespace {

void check_samples(std::span<const double> samples, const ParameterGrid& grid) {
  if (samples.size() != grid.points()) {
    throw ArgumentError("integrate: " + std::to_string(samples.size()) +
                        " samples for a grid of " +
                        std::to_string(grid.points()) + " points");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i])) {
      throw NumericError("integrate: non-finite sample at index " +
                         std::to_string(i));
    }
  }
}

double simpson_panels(std::span<const double> f, std::size_t first,
                      std::size_t last, double h) {
  // Requires an even number of panels between first and last.
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = first + 1; i < last; i += 2) odd += f[i];
  for (std::size_t i = first + 2; i < last; i += 2) even += f[i];
  return h / 3.0 * (f[first] + 4.0 * odd + 2.0 * even + f[last]);
}

}  // namespace

double integrate(std::span<const double> samples, const ParameterGrid& grid) {
  check_samples(samples, grid);
  return simpson_panels(samples, 0, grid.points() - 1, grid.spacing());
}

double integrate_range(std::span<const double> samples,
                       const ParameterGrid& grid, std::size_t first,
                       std::size_t last) {
  check_samples(samples, grid);
  if (first > last || last >= grid.points()) {
    throw ArgumentError("integrate_range: invalid node range");
  }
  const double h = grid.spacing();
  const std::size_t panels = last - first;
  if (panels == 0) return 0.0;
  if (panels == 1) return 0.5 * h * (samples[first] + samples[last]);
  if (panels % 2 == 0) return simpson_panels(samples, first, last, h);
  // Odd panel count: Simpson up to last-3, then the 3/8 rule.
  const std::size_t split = last - 3;
  const double tail = 3.0 * h / 8.0 *
                      (samples[split] + 3.0 * samples[split + 1] +
                       3.0 * samples[split + 2] + samples[last]);
  const double head =
      split > first ? simpson_panels(samples, first, split, h) : 0.0;
  return head + tail;
}

std::vector<double> central_difference(std::span<const double> samples,
                                       const ParameterGrid& grid) {
  const std::size_t n = samples.size();
  if (n < 3) throw ArgumentError("central_difference: need at least 3 points");
  if (n != grid.points()) {
    throw ArgumentError("central_difference: sample count does not match grid");
  }
  const double h = grid.spacing();
  std::vector<double> d(n);
  d[0] = (-3.0 * samples[0] + 4.0 * samples[1] - samples[2]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    d[i] = (samples[i + 1] - samples[i - 1]) / (2.0 * h);
  }
  d[n - 1] =
      (3.0 * samples[n - 1] - 4.0 * samples[n - 2] + samples[n - 3]) / (2.0 * h);
  return d;
}

namespace {

// U(a, b, z) for a >= 1/2 from
//   U = (2 / Gamma(a)) * int_0^{pi/2} exp(-z tan^2 t) sin^{2a-1} t cos^{1-2b} t dt.
// The range is truncated where the exponential falls below e^-60.
double tricomi_u_integral(double a, double b, double z) {
  constexpr double kCutoff = 60.0;
  const double upper =
      std::min(std::numbers::pi / 2.0, std::atan(std::sqrt(kCutoff / z)));
  auto integrand = [&](double t) {
    const double c = std::cos(t);
    if (c <= 1e-300) return 0.0;
    const double tan_t = std::tan(t);
    const double exponent = -z * tan_t * tan_t;
    if (exponent < -700.0) return 0.0;
    return std::exp(exponent) * std::pow(std::sin(t), 2.0 * a - 1.0) *
           std::pow(c, 1.0 - 2.0 * b);
  };
  auto simpson = [&](std::size_t panels) {
    const double h = upper / static_cast<double>(panels);
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i < panels; i += 2) odd += integrand(h * i);
    for (std::size_t i = 2; i < panels; i += 2) even += integrand(h * i);
    return h / 3.0 * (integrand(0.0) + 4.0 * odd + 2.0 * even + integrand(upper));
  };
  std::size_t panels = 2048;
  double previous = simpson(panels);
  for (int refinement = 0; refinement < 10; ++refinement) {
    panels *= 2;
    const double current = simpson(panels);
    if (!std::isfinite(current)) break;
    if (std::abs(current - previous) <= 1e-13 * std::abs(current)) {
      return 2.0 / std::tgamma(a) * current;
    }
    previous = current;
  }
  throw NumericError("tricomi_u: quadrature did not converge for a=" +
                     std::to_string(a) + ", b=" + std::to_string(b) +
                     ", z=" + std::to_string(z));
}

}  // namespace

double tricomi_u(double a, double b, double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw DomainError("tricomi_u: z must be positive and finite");
  }
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("tricomi_u: parameters must be finite");
  }
  if (a >= 0.5) return tricomi_u_integral(a, b, z);

  // Step down with U(a-1) = -(b - 2a - z) U(a) - a (a - b + 1) U(a+1).
  const double steps = std::ceil(0.5 - a);
  double top = a + steps;  // in [1/2, 3/2)
  double upper_value = tricomi_u_integral(top + 1.0, b, z);
  double value = tricomi_u_integral(top, b, z);
  for (int i = 0; i < static_cast<int>(steps); ++i) {
    const double lower_value =
        -(b - 2.0 * top - z) * value - top * (top - b + 1.0) * upper_value;
    upper_value = value;
    value = lower_value;
    top -= 1.0;
  }
  if (!std::isfinite(value)) {
    throw NumericError("tricomi_u: recurrence produced a non-finite value");
  }
  return value;
}

}  // namespace mibound
