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
#include <random>
#include <vector>

#include "doctest.h"
#include "mibound/errors.hpp"
#include "mibound/mi_oracle.hpp"
#include "mibound/models.hpp"
#include "mibound/quantum.hpp"
#include "test_util.hpp"

using namespace mibound;
using namespace mibound::quantum;
using mibound::testing::rel;

namespace {

constexpr double kPi = std::numbers::pi;
const NoiseKind kAllKinds[] = {NoiseKind::kDephasing, NoiseKind::kAmplitudeDamping,
                               NoiseKind::kErasure};
const double kEtas[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99};

Matrix plus_state(NoiseKind kind) { return DensityMatrix::plus(noise_dimension(kind)).matrix(); }

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("Kraus operators are complete") {
  for (NoiseKind kind : kAllKinds) {
    for (double eta : kEtas) {
      for (double phi : {0.0, 0.7, 2.5}) {
        CAPTURE(to_string(kind));
        CAPTURE(eta);
        CHECK(make_channel(kind, eta, phi).completeness_error() <= 1e-12);
      }
    }
  }
}

TEST_CASE("channels act as documented on |+>") {
  const double eta = 0.64;
  SUBCASE("dephasing shrinks coherence by sqrt(eta)") {
    const Matrix out = make_channel(NoiseKind::kDephasing, eta, 0.0).apply(plus_state(NoiseKind::kDephasing));
    CHECK_NEAR(out(0, 1).real(), 0.5 * 0.8, 1e-15);
    CHECK_NEAR(out(0, 0).real(), 0.5, 1e-15);
  }
  SUBCASE("amplitude damping moves population to |0>") {
    const Matrix out =
        make_channel(NoiseKind::kAmplitudeDamping, eta, 0.0).apply(plus_state(NoiseKind::kAmplitudeDamping));
    CHECK_NEAR(out(1, 1).real(), 0.5 * eta, 1e-15);
    CHECK_NEAR(out(0, 1).real(), 0.5 * 0.8, 1e-15);
  }
  SUBCASE("erasure sends weight 1 - eta to the flag level") {
    const Matrix out = make_channel(NoiseKind::kErasure, eta, 0.3).apply(plus_state(NoiseKind::kErasure));
    CHECK_NEAR(out(2, 2).real(), 1 - eta, 1e-15);
    CHECK_NEAR(out.trace().real(), 1.0, 1e-15);
  }
}

TEST_CASE("eta outside (0, 1] is a domain error") {
  CHECK_THROWS_AS(noise_kraus(NoiseKind::kDephasing, 0.0), DomainError);
  CHECK_THROWS_AS(noise_kraus(NoiseKind::kErasure, 1.01), DomainError);
  CHECK_THROWS_AS(mi_cap(10, -0.5, CapRegime::kFiniteN), DomainError);
}

TEST_CASE("state and measurement validation") {
  Matrix bad = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix{bad}, ArgumentError);
  Matrix negative = Matrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix{negative}, ArgumentError);
  CHECK_THROWS_AS(Povm({Matrix::Identity(2, 2), Matrix::Identity(2, 2)}), ArgumentError);
  CHECK_THROWS_AS(Povm({negative, Matrix::Identity(2, 2) - negative}), ArgumentError);
}

TEST_CASE("pure phase family has QFI m^2") {
  for (double m : {1.0, 3.0, 7.5}) {
    CHECK(qfi(phase_family(DensityMatrix::plus().matrix(), m), 0.4) == rel(m * m, 1e-12));
  }
}

TEST_CASE("dephasing single-gate QFI equals eta") {
  for (double eta : kEtas) {
    for (double phi : {0.0, 1.0, 2.0}) {
      const auto family = channel_family(NoiseKind::kDephasing, eta, plus_state(NoiseKind::kDephasing));
      CAPTURE(eta);
      CHECK_NEAR(qfi(family, phi), eta, 1e-9);
    }
  }
}

TEST_CASE("noiseless sequential QFI is N^2") {
  for (NoiseKind kind : kAllKinds) {
    for (std::size_t n = 1; n <= 8; ++n) {
      const auto family = channel_family(kind, 1.0, plus_state(kind), n);
      CAPTURE(n);
      CHECK_NEAR(qfi(family, 0.3), static_cast<double>(n * n), 1e-6);
    }
  }
}

TEST_CASE("analytic channel derivative matches finite differences") {
  for (NoiseKind kind : kAllKinds) {
    const auto family = channel_family(kind, 0.7, plus_state(kind), 3);
    StateFamily numeric{family.state, {}};
    CHECK(max_abs(family.derivative_at(0.9) - numeric.derivative_at(0.9)) < 1e-8);
    CHECK(qfi(family, 0.9) == rel(qfi(numeric, 0.9), 1e-6));
  }
}

TEST_CASE("classical Fisher information never exceeds the QFI") {
  for (NoiseKind kind : kAllKinds) {
    const auto dim = noise_dimension(kind);
    for (std::uint64_t i = 0; i < 100; ++i) {
      auto rng = stream_for(1234, i);
      std::uniform_real_distribution<double> u(0.05, 0.99);
      const double eta = u(rng);
      const std::size_t uses = 1 + i % 4;
      const auto povm = Povm::random(dim, 2 + i % 5, rng);
      const auto family = channel_family(kind, eta, plus_state(kind), uses);
      const double phi = 2 * kPi * u(rng);
      const FisherValue c = classical_fi_of_povm(family, povm, phi);
      CAPTURE(i);
      CHECK_FALSE(c.divergent);
      CHECK(c.value <= qfi(family, phi) * (1 + 1e-9) + 1e-12);
    }
  }
}

TEST_CASE("equatorial measurement saturates the dephasing QFI") {
  const auto family = channel_family(NoiseKind::kDephasing, 0.6, plus_state(NoiseKind::kDephasing));
  const auto c = classical_fi_of_povm(family, Povm::equatorial(kPi / 2), 0.0);
  CHECK(c.value == rel(0.6, 1e-12));
}

TEST_CASE("dephasing outcome model against mpmath") {
  ParameterGrid g(0, 2 * kPi, 4001);
  const auto family = channel_family(NoiseKind::kDephasing, 0.9, plus_state(NoiseKind::kDephasing));
  const auto model = povm_outcome_model(family, Povm::equatorial(), g, "dephasing");
  const auto r = mutual_information(JointModel(PriorDensity::rectangle(kPi, 2 * kPi, 4001), model));
  CHECK(r.mi == rel(0.26539494583156205, 1e-9));
}

TEST_CASE("N00N outcome model") {
  for (std::size_t n : {1u, 2u, 4u, 8u, 16u}) {
    ParameterGrid g(0, 2 * kPi, 4001);
    const auto model = noon_outcome_model(n, Povm::equatorial(), g);
    const auto profile = fisher_information(model);
    for (std::size_t j = 0; j < g.points(); j += 200) {
      CHECK_NEAR(profile.values[j], static_cast<double>(n * n), 1e-6 * n * n);
    }
    const auto numeric = central_difference(model.dprob_row(0), g);
    for (std::size_t j = 100; j + 100 < g.points(); j += 300) {
      CHECK_NEAR(model.d2prob(0, j), numeric[j], 1e-3 * n * n);
    }
    const double mi =
        mutual_information(JointModel(PriorDensity::rectangle(kPi, 2 * kPi, 4001), model)).mi;
    CHECK(mi <= std::log(2.0) + 1e-6);
  }
}

TEST_CASE("Fisher caps") {
  CHECK(asymptotic_fi_cap(10, 0.5).value == rel(10.0, 1e-15));
  CHECK(asymptotic_fi_cap(10, 1.0).unbounded);
  CHECK(finite_n_fi_cap(100, 0.9).value == rel(100 * 9 / (1 + 9.0 / 100), 1e-14));
  CHECK(finite_n_fi_cap(7, 1.0).value == 49.0);
  for (double eta : kEtas) {
    for (std::size_t n : {1u, 10u, 1000u}) {
      const double cap = finite_n_fi_cap(n, eta).value;
      CHECK(cap <= static_cast<double>(n * n));
      CHECK(cap <= asymptotic_fi_cap(n, eta).value);
    }
  }
}

TEST_CASE("mutual-information caps") {
  CHECK_NEAR(mi_cap(100, 0.9, CapRegime::kFiniteN).require(),
             std::log1p(kPi * std::sqrt(900 / 1.09)), 1e-9);
  CHECK_NEAR(mi_cap(100, 0.5, CapRegime::kAsymptotic).require(), std::log1p(10 * kPi), 1e-9);
  SUBCASE("noiseless finite-N limit is the Heisenberg bound") {
    const auto r = mi_cap(50, 1.0, CapRegime::kFiniteN);
    CHECK(r.has(Validity::kNoiselessLimit));
    CHECK_NEAR(r.require(), std::log1p(50 * kPi), 1e-12);
  }
  SUBCASE("noiseless asymptotic cap does not exist") {
    const auto r = mi_cap(50, 1.0, CapRegime::kAsymptotic);
    CHECK(r.has(Validity::kFisherDivergent));
    CHECK_FALSE(r.value);
  }
  SUBCASE("amplitude damping without a supplied cap is flagged") {
    CapOptions options;
    options.kind = NoiseKind::kAmplitudeDamping;
    CHECK(mi_cap(10, 0.9, CapRegime::kFiniteN, options).has(Validity::kAmplitudeDampingCapCaveat));
    options.per_gate_cap = 4.0;
    const auto r = mi_cap(10, 0.9, CapRegime::kFiniteN, options);
    CHECK_FALSE(r.has(Validity::kAmplitudeDampingCapCaveat));
    CHECK_NEAR(r.require(), std::log1p(kPi * std::sqrt(40 / 1.4)), 1e-12);
  }
  CHECK_THROWS_AS(mi_cap(0, 0.9, CapRegime::kFiniteN), ArgumentError);
}

TEST_CASE("transition sweep") {
  const auto counts = log_spaced_counts(1, 1000000, 121);
  SUBCASE("slope runs from Heisenberg to standard scaling") {
    for (double eta : {0.99, 0.999}) {
      const auto rows = transition_sweep(eta, counts);
      const double per_gate = eta / (1 - eta);
      for (const auto& row : rows) {
        if (row.gates * 100 <= per_gate) CHECK_NEAR(row.slope, 1.0, 0.05);
        if (row.gates >= 100 * per_gate) CHECK_NEAR(row.slope, 0.5, 0.05);
      }
    }
  }
  SUBCASE("reference columns") {
    const auto rows = transition_sweep(0.9, std::vector<std::size_t>{1, 100});
    CHECK(rows[0].hs_ref == 0.0);
    CHECK(rows[1].hs_ref == rel(std::log(100.0), 1e-15));
    CHECK(rows[1].sql_ref == rel(0.5 * std::log(100.0), 1e-15));
  }
  SUBCASE("the crossing sits at N = eta / (1 - eta) and moves out as noise weakens") {
    double previous = 0.0;
    for (double eta : {0.5, 0.9, 0.99}) {
      const auto crossing = transition_point(transition_sweep(eta, counts));
      REQUIRE(crossing.has_value());
      CHECK(*crossing == rel(eta / (1 - eta), 0.05));
      CHECK(*crossing > previous);
      previous = *crossing;
    }
  }
  SUBCASE("near-noiseless curve tracks ln(1 + pi N)") {
    for (const auto& row : transition_sweep(1 - 1e-9, counts)) {
      CHECK_NEAR(row.mi_cap, std::log1p(kPi * row.gates), 1e-3);
    }
  }
  SUBCASE("asymptotic regime has standard scaling throughout") {
    for (const auto& row : transition_sweep(0.9, counts, CapRegime::kAsymptotic)) {
      CHECK(row.slope == 0.5);
    }
  }
}

TEST_CASE("log-spaced counts") {
  const auto counts = log_spaced_counts(1, 1000000, 61);
  CHECK(counts.front() == 1);
  CHECK(counts.back() == 1000000);
  for (std::size_t i = 1; i < counts.size(); ++i) CHECK(counts[i] > counts[i - 1]);
  CHECK(log_spaced_counts(5, 5, 10) == std::vector<std::size_t>{5});
  CHECK_THROWS_AS(log_spaced_counts(0, 10, 3), ArgumentError);
}
