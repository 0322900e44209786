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


// Checks every bound against brute-force oracles on seeded random models.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mibound/models.hpp"
#include "mibound/stat_model.hpp"

namespace mibound {

/// Seed used when none is given, so default runs are reproducible.
inline constexpr std::uint64_t kDefaultSeed = 20260101;

struct VerifyOptions {
  std::size_t count = 200;
  /// Index of the first model; model i always comes from stream (seed, i).
  std::size_t first = 0;
  std::uint64_t seed = kDefaultSeed;
  std::size_t grid_points = 2001;
  RandomModelOptions model;
  /// Allowed shortfall of an MI upper bound below the oracle, nats.
  double mi_tolerance = 1e-3;
  /// Allowed excess of an MSE lower bound over the oracle, relative.
  double mse_tolerance = 1e-3;
  /// Allowed violation of the pointwise and integrated inequalities,
  /// relative to the larger side.
  double identity_tolerance = 1e-9;
};

struct CheckRecord {
  std::size_t model = 0;
  std::size_t outcomes = 0;
  std::string check;
  /// Bound value, absent when flagged inapplicable.
  std::optional<double> bound;
  double oracle = 0.0;
  /// Signed slack in the direction of the inequality (negative = violated),
  /// normalized as the tolerance is.
  std::optional<double> margin;
  double tolerance = 0.0;
  std::string flags;
  bool passed = true;
};

struct CheckSummary {
  std::string check;
  std::optional<double> worst_margin;
  std::size_t worst_model = 0;
  std::size_t evaluated = 0;
  std::size_t flagged = 0;
  std::size_t violations = 0;
};

struct VerifyResult {
  std::vector<CheckRecord> records;
  std::vector<CheckSummary> summary;

  bool passed() const;
};

/// All checks for one joint model. `index` only labels the records.
std::vector<CheckRecord> check_joint(const JointModel& joint, std::size_t index,
                                     const VerifyOptions& options);

/// Runs check_joint on models first .. first + count - 1 and summarizes the
/// worst margin of each check. ArgumentError if count is zero.
VerifyResult verify_random_models(const VerifyOptions& options);

}  // namespace mibound
