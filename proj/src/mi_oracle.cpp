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

#include "mibound/mi_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include "mibound/errors.hpp"
#include "mibound/models.hpp"

namespace mibound {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

}  // namespace

OracleResult mutual_information(const JointModel& joint) {
  const auto& model = joint.conditional();
  const auto& grid = joint.grid();
  const auto prior = joint.prior().density();
  const std::size_t n = grid.points();
  const std::vector<double> marginal = marginal_outcome(joint);

  std::vector<double> first_moment(n), second_moment(n);
  const double center = 0.5 * (grid.lower() + grid.upper());

  OracleResult out;
  out.h_prior = prior_entropy(joint.prior());
  for (std::size_t x = 0; x < model.outcomes(); ++x) {
    const double px = marginal[x];
    if (!(px > 0.0)) continue;
    std::vector<double> mi_row(n, 0.0), h_row(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double cond = model.prob(x, j);
      const double pj = cond * prior[j];
      if (pj > 0.0) {
        mi_row[j] = pj * std::log(cond / px);
        h_row[j] = -pj * std::log(pj / px);
      }
      const double phi = grid.at(j) - center;
      first_moment[j] = phi * pj;
      second_moment[j] = phi * phi * pj;
    }
    out.mi += integrate(mi_row, grid);
    out.h_posterior += integrate(h_row, grid);
    const double m1 = integrate(first_moment, grid);
    const double m2 = integrate(second_moment, grid);
    out.bayes_mse += m2 - m1 * m1 / px;
  }
  out.estimator = Estimator::kPosteriorMean;
  return out;
}

double bayes_quadratic_cost(const JointModel& joint) {
  return mutual_information(joint).bayes_mse;
}

JointModel repeat_model(const JointModel& joint, std::size_t samples,
                        std::size_t max_outcomes) {
  if (samples == 0) throw ArgumentError("repeat_model: N must be >= 1");
  return JointModel(joint.prior(), independent_product(joint.conditional(),
                                                       samples, max_outcomes));
}

std::size_t ml_estimate_index(const ConditionalModel& model,
                              std::span<const std::size_t> counts) {
  if (counts.size() != model.outcomes()) {
    throw ArgumentError("ml_estimate_index: counts do not match the alphabet");
  }
  const std::size_t n = model.grid().points();
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    double value = 0.0;
    for (std::size_t x = 0; x < counts.size() && value > -1e308; ++x) {
      if (counts[x] == 0) continue;
      const double p = model.prob(x, j);
      value = p > 0.0 ? value + static_cast<double>(counts[x]) * std::log(p)
                      : -std::numeric_limits<double>::infinity();
    }
    if (value > best_value) {
      best_value = value;
      best = j;
    }
  }
  return best;
}

JointModel ml_estimate_model(const JointModel& joint,
                             std::vector<std::size_t>* estimates) {
  const auto& model = joint.conditional();
  const std::size_t n = joint.grid().points();
  const std::size_t k = model.outcomes();
  std::map<std::size_t, std::vector<std::size_t>> groups;
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t x = 0; x < k; ++x) {
    std::fill(counts.begin(), counts.end(), 0);
    counts[x] = 1;
    groups[ml_estimate_index(model, counts)].push_back(x);
  }
  std::vector<double> p(groups.size() * n, 0.0);
  std::vector<double> d1(groups.size() * n, 0.0);
  std::vector<double> d2;
  if (model.has_second_derivative()) d2.assign(groups.size() * n, 0.0);
  if (estimates) estimates->clear();
  std::size_t row = 0;
  for (const auto& [node, members] : groups) {
    if (estimates) estimates->push_back(node);
    for (std::size_t x : members) {
      for (std::size_t j = 0; j < n; ++j) {
        p[row * n + j] += model.prob(x, j);
        d1[row * n + j] += model.dprob(x, j);
        if (!d2.empty()) d2[row * n + j] += model.d2prob(x, j);
      }
    }
    ++row;
  }
  return JointModel(joint.prior(),
                    ConditionalModel::from_tables(
                        joint.grid(), groups.size(), std::move(p), std::move(d1),
                        std::move(d2), model.source(), model.name() + "|ml"));
}

std::vector<MleStudyRow> mle_convergence_study(
    const JointModel& joint, std::span<const std::size_t> sample_counts,
    std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw ArgumentError("mle_convergence_study: trials must be >= 1");
  const auto& model = joint.conditional();
  const auto& grid = joint.grid();
  const std::size_t n = grid.points();
  const std::size_t k = model.outcomes();
  const auto prior = joint.prior().density();

  const FisherProfile fisher = fisher_information(model);
  std::vector<double> weighted(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (prior[j] > 0.0) weighted[j] = fisher.values[j] * prior[j];
  }
  const double mean_fisher = integrate(weighted, grid);
  if (!(mean_fisher > 0.0) || !std::isfinite(mean_fisher)) {
    throw ArgumentError("mle_convergence_study: average Fisher information must be finite and positive");
  }

  std::vector<double> log_prob(k * n);
  for (std::size_t x = 0; x < k; ++x) {
    for (std::size_t j = 0; j < n; ++j) {
      const double p = model.prob(x, j);
      log_prob[x * n + j] =
          p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
    }
  }

  std::vector<MleStudyRow> rows;
  std::vector<std::size_t> counts(k);
  std::vector<std::pair<std::size_t, std::size_t>> pairs(trials);
  std::discrete_distribution<std::size_t> draw_phi(prior.begin(), prior.end());
  for (std::size_t samples : sample_counts) {
    if (samples == 0) throw ArgumentError("mle_convergence_study: N must be >= 1");
    for (std::size_t t = 0; t < trials; ++t) {
      auto rng = stream_for(seed, t);
      const std::size_t truth = draw_phi(rng);
      // Multinomial counts as a chain of binomials.
      std::size_t remaining = samples;
      double mass = 1.0;
      for (std::size_t x = 0; x < k; ++x) {
        const double p = model.prob(x, truth);
        if (x + 1 == k || remaining == 0) {
          counts[x] = x + 1 == k ? remaining : 0;
          remaining -= counts[x];
          continue;
        }
        const double q = mass > 0.0 ? std::clamp(p / mass, 0.0, 1.0) : 0.0;
        std::binomial_distribution<std::size_t> draw(remaining, q);
        counts[x] = draw(rng);
        remaining -= counts[x];
        mass -= p;
      }
      std::size_t best = 0;
      double best_score = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j) {
        double score = 0.0;
        for (std::size_t x = 0; x < k; ++x) {
          if (counts[x] != 0) score += static_cast<double>(counts[x]) * log_prob[x * n + j];
        }
        if (score > best_score) {
          best_score = score;
          best = j;
        }
      }
      pairs[t] = {best, truth};
    }

    // Plug-in conditional entropy: cells (estimate, truth) of width h.
    std::sort(pairs.begin(), pairs.end());
    const double total = static_cast<double>(trials);
    const double h = grid.spacing();
    double entropy = 0.0;
    std::size_t occupied = 0;
    for (std::size_t begin = 0; begin < pairs.size();) {
      std::size_t end = begin;
      while (end < pairs.size() && pairs[end].first == pairs[begin].first) ++end;
      const double column = static_cast<double>(end - begin);
      for (std::size_t i = begin; i < end;) {
        std::size_t stop = i;
        while (stop < end && pairs[stop].second == pairs[i].second) ++stop;
        const double cell = static_cast<double>(stop - i);
        entropy -= cell / total * std::log(cell / (column * h));
        ++occupied;
        i = stop;
      }
      begin = end;
    }

    MleStudyRow row;
    row.samples = samples;
    row.conditional_entropy = entropy;
    row.asymptote = -0.5 * std::log(static_cast<double>(samples) * mean_fisher /
                                    (2.0 * kPi * kE));
    row.gap = std::abs(entropy - row.asymptote);
    row.occupied_cells = occupied;
    row.undersampled = trials < 5 * occupied;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mibound
