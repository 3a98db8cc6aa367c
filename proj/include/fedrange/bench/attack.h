// Copyright 2026 The fedrange Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEDRANGE_BENCH_ATTACK_H_
#define FEDRANGE_BENCH_ATTACK_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fedrange/datamodel/query.h"
#include "fedrange/datamodel/schema.h"
#include "fedrange/dp/accountant.h"
#include "fedrange/federation/local_federation.h"

namespace fedrange {

enum class AttackComposition {
  // One analyst; each query gets (xi / n, psi / n).
  kSequential,
  // One analyst; each query gets the advanced-composition share of (xi, psi).
  kAdvanced,
  // n analysts pooling their answers; each query gets the full (xi, psi).
  kCoalition,
};

absl::string_view AttackCompositionName(AttackComposition mode);
absl::StatusOr<AttackComposition> ParseAttackComposition(absl::string_view name);

struct AttackConfig {
  std::vector<std::string> quasi_identifiers;
  std::string sensitive;
  AttackComposition composition = AttackComposition::kSequential;
  Budget total{1.0, 1e-6};
  double sample_rate = 0.2;
};

// 1 + |d_SA| + |d_SA| * sum of |d| over the quasi-identifiers.
int64_t NbcQueryCount(int sensitive_domain, const std::vector<int>& qi_domains);

// Per-query budget the composition mode allots when `num_queries` queries
// share config.total.
Budget AttackQueryBudget(const AttackConfig& config, int64_t num_queries);

struct AttackResult {
  int64_t num_queries = 0;
  int64_t answered = 0;
  int64_t refused = 0;
  Budget per_query;
  int64_t predictions = 0;  // tensor rows predicted
  int64_t correct = 0;
  double accuracy = 0.0;
  double random_guess = 0.0;  // 1 / |d_SA|
};

// Answers one COUNT query, or std::nullopt when it was refused.
using CountOracle = std::function<std::optional<double>(const RangeQuery&)>;

// Trains a naive Bayes classifier for the sensitive dimension from COUNT
// answers and predicts it for every tensor row held by `federation`'s
// providers. Negative answers are clamped to 0, every count gets +1
// smoothing, and a refused query contributes 0.
absl::StatusOr<AttackResult> RunNbcAttack(const AttackConfig& config,
                                          LocalFederation& federation,
                                          const CountOracle& oracle);

// Queries go through the federation's aggregator at the budget of
// config.composition.
absl::StatusOr<AttackResult> RunNbcAttack(const AttackConfig& config,
                                          LocalFederation& federation);

// Queries are answered exactly, bypassing the DP pipeline.
absl::StatusOr<AttackResult> RunNbcAttackNoiseless(const AttackConfig& config,
                                                   LocalFederation& federation);

}  // namespace fedrange

#endif  // FEDRANGE_BENCH_ATTACK_H_
