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


#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "mibound/bounds.hpp"
#include "mibound/errors.hpp"
#include "mibound/mi_oracle.hpp"
#include "mibound/models.hpp"
#include "test_util.hpp"

using namespace mibound;
using mibound::testing::rel;

namespace {

constexpr double kPi = std::numbers::pi;

JointModel uniform_cos2(std::size_t points) {
  return JointModel(PriorDensity::rectangle(kPi / 2, kPi, points),
                    cos2_model(ParameterGrid(0, kPi, points)));
}

JointModel gaussian_cos2(double sigma, const ParameterGrid& g) {
  auto prior = PriorDensity::gaussian(kPi / 2, sigma, g);
  return JointModel(prior, cos2_model(g));
}

}  // namespace

TEST_CASE("independent outcome carries no information") {
  ParameterGrid g(0, 2, 401);
  const auto r = mutual_information(
      JointModel(PriorDensity::rectangle(1.0, 2.0, 401), constant_model(g, {0.25, 0.75})));
  CHECK_NEAR(r.mi, 0.0, 1e-9);
  CHECK(r.estimator == Estimator::kPosteriorMean);
}

TEST_CASE("cos^2 under a uniform prior") {
  const auto fine = mutual_information(uniform_cos2(10001));
  const auto finer = mutual_information(uniform_cos2(20001));
  // mpmath reference, tests/oracles/compute_oracles.py; analytically 1 - ln 2.
  CHECK(fine.mi == rel(0.30685281944005469, 1e-9));
  CHECK_NEAR(fine.mi, 1 - std::log(2.0), 1e-9);
  CHECK(std::abs(fine.mi - finer.mi) < 1e-4);
  CHECK(fine.bayes_mse == rel(0.41718229885476213, 1e-9));
  CHECK(fine.h_prior == rel(std::log(kPi), 1e-12));
}

TEST_CASE("cell indicator reveals ln K nats") {
  for (std::size_t cells : {2u, 4u, 5u}) {
    ParameterGrid g(0, 1, 2001);
    const auto r = mutual_information(
        JointModel(PriorDensity::rectangle(0.5, 1.0, 2001), cell_indicator_model(g, cells)));
    CAPTURE(cells);
    CHECK_NEAR(r.mi, std::log(static_cast<double>(cells)), 2e-3);
  }
}

TEST_CASE("Bayes cost without measurement is the prior variance") {
  ParameterGrid g(-1.5, 2.5, 2001);
  const auto uniform = bayes_quadratic_cost(
      JointModel(PriorDensity::rectangle(0.5, 4.0, 2001), constant_model(g, {1.0})));
  CHECK(uniform == rel(16.0 / 12, 1e-6));
  auto prior = PriorDensity::gaussian(0.0, 0.4, 4001);
  CHECK(bayes_quadratic_cost(JointModel(prior, constant_model(prior.grid(), {0.5, 0.5}))) ==
        rel(0.16, 1e-6));
}

TEST_CASE("cos^2 with a Gaussian prior against mpmath") {
  const auto prior = PriorDensity::gaussian(kPi / 2, 0.3, 4001);
  const auto r = mutual_information(JointModel(prior, cos2_model(prior.grid())));
  CHECK(r.mi == rel(0.042971740026584206, 1e-8));
  CHECK(r.bayes_mse == rel(0.082597157399303052, 1e-8));
}

TEST_CASE("oracle identities on random models") {
  for (std::size_t i = 0; i < 20; ++i) {
    const JointModel joint = random_joint(2718, i, 1001);
    const auto r = mutual_information(joint);
    CAPTURE(i);
    CHECK_NEAR(r.mi, r.h_prior - r.h_posterior, 1e-9);
    CHECK(r.mi >= -1e-9);
    CHECK(r.bayes_mse >= entropy_mse_floor(r.h_posterior) * (1 - 1e-9));
  }
}

TEST_CASE("oracle is stable under grid doubling") {
  for (std::size_t i = 0; i < 5; ++i) {
    const double coarse = mutual_information(random_joint(55, i, 2001)).mi;
    const double fine = mutual_information(random_joint(55, i, 4001)).mi;
    CAPTURE(i);
    CHECK(std::abs(coarse - fine) < 1e-4);
  }
}

TEST_CASE("repeat_model") {
  const JointModel base = uniform_cos2(1001);
  SUBCASE("one repetition is the identity") {
    const JointModel same = repeat_model(base, 1);
    for (std::size_t j = 0; j < 1001; j += 50) {
      CHECK(same.conditional().prob(1, j) == base.conditional().prob(1, j));
    }
  }
  SUBCASE("two repetitions double the Fisher information") {
    const JointModel twice = repeat_model(base, 2);
    CHECK(twice.conditional().outcomes() == 4);
    const auto f = fisher_information(twice.conditional());
    for (std::size_t j = 0; j < 1001; j += 50) CHECK_NEAR(f.values[j], 2.0, 1e-6);
  }
  SUBCASE("information never decreases with more samples") {
    double previous = 0.0;
    for (std::size_t n = 1; n <= 8; ++n) {
      const double mi = mutual_information(repeat_model(base, n)).mi;
      CAPTURE(n);
      CHECK(mi >= previous - 1e-12);
      previous = mi;
    }
  }
  SUBCASE("budget") {
    CHECK_THROWS_AS(repeat_model(base, 13), ResourceError);
    CHECK_THROWS_AS(repeat_model(base, 0), ArgumentError);
  }
}

TEST_CASE("maximum-likelihood estimates") {
  ParameterGrid g(0, kPi, 201);
  const auto model = cos2_model(g);
  SUBCASE("single outcomes pick the ends") {
    CHECK(ml_estimate_index(model, std::vector<std::size_t>{0, 1}) == 0);
    CHECK(ml_estimate_index(model, std::vector<std::size_t>{1, 0}) == 200);
  }
  SUBCASE("balanced counts pick the middle") {
    CHECK(ml_estimate_index(model, std::vector<std::size_t>{5, 5}) == 100);
  }
  SUBCASE("ties go to the smallest index") {
    const auto flat = constant_model(g, {0.5, 0.5});
    CHECK(ml_estimate_index(flat, std::vector<std::size_t>{3, 4}) == 0);
  }
  CHECK_THROWS_AS(ml_estimate_index(model, std::vector<std::size_t>{1}), ArgumentError);
}

TEST_CASE("processing by the ML estimator loses information") {
  for (std::size_t n : {1u, 2u}) {
    const JointModel joint = repeat_model(gaussian_cos2(0.4, ParameterGrid(0, kPi, 801)), n);
    std::vector<std::size_t> nodes;
    const JointModel processed = ml_estimate_model(joint, &nodes);
    CHECK(nodes.size() == processed.conditional().outcomes());
    const auto full = mutual_information(joint);
    const auto reduced = mutual_information(processed);
    CAPTURE(n);
    CHECK(reduced.mi <= full.mi + 1e-12);
    CHECK(reduced.h_posterior >= full.h_posterior - 1e-12);
  }
}

TEST_CASE("ML convergence study") {
  const JointModel joint = gaussian_cos2(0.3, ParameterGrid(0, kPi, 201));
  const std::vector<std::size_t> counts = {8, 32, 128};
  SUBCASE("fixed seed reproduces the rows") {
    const auto a = mle_convergence_study(joint, counts, 2000, 42);
    const auto b = mle_convergence_study(joint, counts, 2000, 42);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(a[i].conditional_entropy == b[i].conditional_entropy);
      CHECK(a[i].occupied_cells == b[i].occupied_cells);
    }
  }
  SUBCASE("asymptote follows the average Fisher information") {
    const auto rows = mle_convergence_study(joint, counts, 500, 1);
    for (const auto& row : rows) {
      // F = 1 on the grid, so int F p = 1.
      CHECK(row.asymptote ==
            rel(-0.5 * std::log(row.samples / (2 * kPi * std::numbers::e)), 1e-9));
      CHECK(row.gap == rel(std::abs(row.conditional_entropy - row.asymptote), 1e-15));
    }
  }
  SUBCASE("too few trials per cell is flagged") {
    const auto rows = mle_convergence_study(joint, std::vector<std::size_t>{8}, 50, 3);
    CHECK(rows.front().undersampled);
  }
  SUBCASE("single sample cannot beat the exact posterior entropy") {
    const auto exact = mutual_information(joint);
    const auto rows = mle_convergence_study(joint, std::vector<std::size_t>{1}, 20000, 9);
    CHECK(rows.front().conditional_entropy >= exact.h_posterior - 0.05);
  }
  CHECK_THROWS_AS(mle_convergence_study(joint, counts, 0, 1), ArgumentError);
}
