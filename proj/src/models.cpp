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

#include "mibound/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mibound/errors.hpp"

namespace mibound {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// c0 + sum_m a_m cos(m w t) + b_m sin(m w t) with its first two derivatives.
struct TrigPolynomial {
  double omega = 1.0;
  std::vector<double> cos_coeff;
  std::vector<double> sin_coeff;

  void eval(double t, double& v, double& d1, double& d2) const {
    v = d1 = d2 = 0.0;
    for (std::size_t m = 0; m < cos_coeff.size(); ++m) {
      const double k = omega * static_cast<double>(m);
      const double c = std::cos(k * t);
      const double s = std::sin(k * t);
      v += cos_coeff[m] * c + sin_coeff[m] * s;
      d1 += k * (-cos_coeff[m] * s + sin_coeff[m] * c);
      d2 += -k * k * (cos_coeff[m] * c + sin_coeff[m] * s);
    }
  }
};

TrigPolynomial random_trig(std::mt19937_64& rng, std::size_t degree,
                           double amplitude, double omega) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  TrigPolynomial poly;
  poly.omega = omega;
  for (std::size_t m = 0; m <= degree; ++m) {
    const double scale = amplitude / static_cast<double>(m + 1);
    poly.cos_coeff.push_back(scale * unit(rng));
    poly.sin_coeff.push_back(m == 0 ? 0.0 : scale * unit(rng));
  }
  return poly;
}

}  // namespace

ConditionalModel cos2_model(const ParameterGrid& grid) {
  auto prob = [](std::size_t x, double phi) {
    const double c = std::cos(0.5 * phi);
    const double s = std::sin(0.5 * phi);
    return x == 1 ? c * c : s * s;
  };
  auto first = [](std::size_t x, double phi) {
    const double d = 0.5 * std::sin(phi);
    return x == 1 ? -d : d;
  };
  auto second = [](std::size_t x, double phi) {
    const double d = 0.5 * std::cos(phi);
    return x == 1 ? -d : d;
  };
  return ConditionalModel::from_functions(grid, 2, prob, first, second, "cos2");
}

ConditionalModel constant_model(const ParameterGrid& grid,
                                const std::vector<double>& probabilities) {
  auto prob = [&](std::size_t x, double) { return probabilities[x]; };
  auto zero = [](std::size_t, double) { return 0.0; };
  return ConditionalModel::from_functions(grid, probabilities.size(), prob, zero,
                                          zero, "constant");
}

ConditionalModel cell_indicator_model(const ParameterGrid& grid,
                                      std::size_t cells) {
  if (cells == 0) throw ArgumentError("cell_indicator_model: need >= 1 cell");
  const double width = grid.width() / static_cast<double>(cells);
  auto cell_of = [&](double phi) {
    const auto c = static_cast<std::size_t>((phi - grid.lower()) / width);
    return std::min(c, cells - 1);
  };
  auto prob = [&](std::size_t x, double phi) {
    return cell_of(phi) == x ? 1.0 : 0.0;
  };
  auto zero = [](std::size_t, double) { return 0.0; };
  return ConditionalModel::from_functions(grid, cells, prob, zero, zero, "cells");
}

std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(index + 1)));
}

ConditionalModel random_smooth_model(const ParameterGrid& grid,
                                     std::mt19937_64& rng,
                                     const RandomModelOptions& options) {
  if (options.min_outcomes < 1 || options.max_outcomes < options.min_outcomes) {
    throw ArgumentError("random_smooth_model: invalid outcome range");
  }
  std::uniform_int_distribution<std::size_t> pick_k(options.min_outcomes,
                                                    options.max_outcomes);
  std::uniform_int_distribution<std::size_t> pick_degree(1, options.max_degree);
  const std::size_t k = pick_k(rng);
  const double floor = options.floor;
  if (floor < 0.0 || floor * static_cast<double>(k) >= 1.0) {
    throw ArgumentError("random_smooth_model: floor too large");
  }
  const double omega = kPi / grid.width();
  std::vector<TrigPolynomial> logits;
  for (std::size_t x = 0; x < k; ++x) {
    logits.push_back(random_trig(rng, pick_degree(rng), options.amplitude, omega));
  }

  const std::size_t n = grid.points();
  std::vector<double> p(k * n);
  std::vector<double> d1(k * n);
  std::vector<double> d2(k * n);
  std::vector<double> g(k), dg(k), ddg(k), s(k), ds(k);
  const double scale = 1.0 - floor * static_cast<double>(k);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = grid.at(j) - grid.lower();
    for (std::size_t x = 0; x < k; ++x) logits[x].eval(t, g[x], dg[x], ddg[x]);
    const double top = *std::max_element(g.begin(), g.end());
    double total = 0.0;
    for (std::size_t x = 0; x < k; ++x) {
      s[x] = std::exp(g[x] - top);
      total += s[x];
    }
    double mean_dg = 0.0;
    for (std::size_t x = 0; x < k; ++x) {
      s[x] /= total;
      mean_dg += s[x] * dg[x];
    }
    // s' = s (g' - <g'>),  <g'>' = sum s' g' + s g''.
    double mean_dg_slope = 0.0;
    for (std::size_t x = 0; x < k; ++x) {
      ds[x] = s[x] * (dg[x] - mean_dg);
      mean_dg_slope += ds[x] * dg[x] + s[x] * ddg[x];
    }
    for (std::size_t x = 0; x < k; ++x) {
      const double dds =
          ds[x] * (dg[x] - mean_dg) + s[x] * (ddg[x] - mean_dg_slope);
      p[x * n + j] = scale * s[x] + floor;
      d1[x * n + j] = scale * ds[x];
      d2[x * n + j] = scale * dds;
    }
  }
  return ConditionalModel::from_tables(grid, k, std::move(p), std::move(d1),
                                       std::move(d2), DerivativeSource::kAnalytic,
                                       "random");
}

PriorDensity random_smooth_prior(const ParameterGrid& grid,
                                 std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick_degree(0, 2);
  const double omega = kPi / grid.width();
  const TrigPolynomial tilt = random_trig(rng, pick_degree(rng), 1.0, 2.0 * omega);
  const double lower = grid.lower();
  // p = w e with w = sin^2(omega t), e = exp(h(t)).
  auto parts = [=](double phi, double& v, double& d1, double& d2) {
    const double t = phi - lower;
    const double u = omega * t;
    const double w = std::sin(u) * std::sin(u);
    const double dw = omega * std::sin(2.0 * u);
    const double ddw = 2.0 * omega * omega * std::cos(2.0 * u);
    double h, dh, ddh;
    tilt.eval(t, h, dh, ddh);
    const double e = std::exp(h);
    const double de = dh * e;
    const double dde = (ddh + dh * dh) * e;
    v = w * e;
    d1 = dw * e + w * de;
    d2 = ddw * e + 2.0 * dw * de + w * dde;
  };
  auto value = [=](double phi) {
    double v, a, b;
    parts(phi, v, a, b);
    return v;
  };
  auto first = [=](double phi) {
    double v, a, b;
    parts(phi, v, a, b);
    return a;
  };
  auto second = [=](double phi) {
    double v, a, b;
    parts(phi, v, a, b);
    return b;
  };
  return PriorDensity::analytic(grid, value, first, second, true);
}

JointModel random_joint(std::uint64_t seed, std::uint64_t index,
                        std::size_t points, const RandomModelOptions& options) {
  auto rng = stream_for(seed, index);
  ParameterGrid grid(0.0, kPi, points);
  PriorDensity prior = random_smooth_prior(grid, rng);
  ConditionalModel model = random_smooth_model(grid, rng, options);
  return JointModel(std::move(prior), std::move(model));
}

}  // namespace mibound
