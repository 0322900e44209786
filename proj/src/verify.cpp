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


#include "mibound/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "mibound/bounds.hpp"
#include "mibound/errors.hpp"
#include "mibound/mi_oracle.hpp"

namespace mibound {

namespace {

CheckRecord base_record(std::size_t index, const JointModel& joint,
                        std::string check) {
  CheckRecord r;
  r.model = index;
  r.outcomes = joint.conditional().outcomes();
  r.check = std::move(check);
  return r;
}

CheckRecord mi_check(std::size_t index, const JointModel& joint,
                     const BoundReport& report, double oracle_mi,
                     const VerifyOptions& options) {
  CheckRecord r = base_record(index, joint, report.name);
  r.oracle = oracle_mi;
  r.bound = report.value;
  r.flags = report.flag_text();
  r.tolerance = options.mi_tolerance;
  if (report.value) {
    r.margin = *report.value - oracle_mi;
    r.passed = *r.margin >= -r.tolerance;
  }
  return r;
}

CheckRecord mse_check(std::size_t index, const JointModel& joint,
                      const std::string& name, std::optional<double> bound,
                      std::string flags, double oracle_mse,
                      const VerifyOptions& options) {
  CheckRecord r = base_record(index, joint, name);
  r.oracle = oracle_mse;
  r.bound = bound;
  r.flags = std::move(flags);
  r.tolerance = options.mse_tolerance;
  if (bound) {
    r.margin = (oracle_mse - *bound) / oracle_mse;
    r.passed = *r.margin >= -r.tolerance;
  }
  return r;
}

}  // namespace

bool VerifyResult::passed() const {
  return std::all_of(records.begin(), records.end(),
                     [](const CheckRecord& r) { return r.passed; });
}

std::vector<CheckRecord> check_joint(const JointModel& joint, std::size_t index,
                                     const VerifyOptions& options) {
  const OracleResult oracle = mutual_information(joint);
  std::vector<CheckRecord> out;

  out.push_back(mi_check(index, joint, mi_bound_finite_support(joint), oracle.mi, options));
  const BoundReport general = mi_bound_general_prior(joint);
  out.push_back(mi_check(index, joint, general, oracle.mi, options));
  out.push_back(mi_check(index, joint, efroimovich_mi_bound(joint), oracle.mi, options));

  // The logarithmic part of the general-prior bound alone caps -H(phi|x).
  {
    CheckRecord r = base_record(index, joint, "log_term_vs_posterior_entropy");
    r.oracle = -oracle.h_posterior;
    r.flags = general.flag_text();
    r.tolerance = options.mi_tolerance;
    if (general.value) {
      r.bound = *general.value - oracle.h_prior;
      r.margin = *r.bound - r.oracle;
      r.passed = *r.margin >= -r.tolerance;
    }
    out.push_back(r);
  }

  const BoundReport vt = van_trees(joint);
  out.push_back(mse_check(index, joint, vt.name, vt.value, vt.flag_text(),
                          oracle.bayes_mse, options));
  const BoundReport fs = mse_bound_finite_support(joint);
  out.push_back(mse_check(index, joint, fs.name, fs.value, fs.flag_text(),
                          oracle.bayes_mse, options));
  const BoundReport gp = mse_bound_general_prior(joint);
  out.push_back(mse_check(index, joint, gp.name, gp.value, gp.flag_text(),
                          oracle.bayes_mse, options));
  out.push_back(mse_check(index, joint, "entropy_mse_floor",
                          entropy_mse_floor(oracle.h_posterior), "",
                          oracle.bayes_mse, options));

  // Pointwise sum_x |p'(x, phi)| <= sqrt(F p^2 + p'^2).
  {
    CheckRecord r = base_record(index, joint, "pointwise_l1_derivative");
    const auto lhs = joint_derivative_l1_sum(joint);
    const auto rhs = joint_derivative_l1_bound(joint);
    double worst = std::numeric_limits<double>::infinity();
    std::size_t at = 0;
    for (std::size_t j = 0; j < lhs.size(); ++j) {
      const double slack = (rhs[j] - lhs[j]) / std::max(1.0, rhs[j]);
      if (slack < worst) {
        worst = slack;
        at = j;
      }
    }
    r.bound = rhs[at];
    r.oracle = lhs[at];
    r.margin = worst;
    r.tolerance = options.identity_tolerance;
    r.passed = worst >= -r.tolerance;
    out.push_back(r);
  }

  // Integrated sqrt(x + y) <= sqrt(x) + sqrt(y).
  {
    CheckRecord r = base_record(index, joint, "integrated_sqrt_subadditivity");
    const GeneralPriorIntegral parts = general_prior_integral(joint);
    r.bound = parts.fisher_part + parts.prior_part;
    r.oracle = parts.total;
    r.margin = (*r.bound - parts.total) / std::max(1.0, *r.bound);
    r.tolerance = options.identity_tolerance;
    r.passed = *r.margin >= -r.tolerance;
    out.push_back(r);
  }
  return out;
}

VerifyResult verify_random_models(const VerifyOptions& options) {
  if (options.count == 0) throw ArgumentError("verify: count must be >= 1");
  VerifyResult result;
  std::map<std::string, std::size_t> position;
  for (std::size_t i = options.first; i < options.first + options.count; ++i) {
    const JointModel joint =
        random_joint(options.seed, i, options.grid_points, options.model);
    for (CheckRecord& r : check_joint(joint, i, options)) {
      auto [it, inserted] = position.emplace(r.check, result.summary.size());
      if (inserted) result.summary.push_back(CheckSummary{r.check});
      CheckSummary& s = result.summary[it->second];
      if (!r.margin) {
        ++s.flagged;
      } else {
        ++s.evaluated;
        if (!r.passed) ++s.violations;
        if (!s.worst_margin || *r.margin < *s.worst_margin) {
          s.worst_margin = r.margin;
          s.worst_model = i;
        }
      }
      result.records.push_back(std::move(r));
    }
  }
  return result;
}

}  // namespace mibound
