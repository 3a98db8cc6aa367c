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

#ifndef FEDRANGE_DP_ACCOUNTANT_H_
#define FEDRANGE_DP_ACCOUNTANT_H_

#include <cstdint>
#include <mutex>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace fedrange {

// An (epsilon, delta) pair.
struct Budget {
  double epsilon = 0.0;
  double delta = 0.0;

  absl::Status Validate() const;
};

// Fractions of a query's epsilon spent on the summary release, the cluster
// sampling and the final estimate. Must be positive and sum to one.
struct BudgetSplit {
  double overview = 0.1;
  double sampling = 0.1;
  double estimate = 0.8;

  absl::Status Validate() const;
};

// Per-step budget of one query.
struct QueryBudget {
  double epsilon_overview = 0.0;
  double epsilon_sampling = 0.0;
  double epsilon_estimate = 0.0;
  double delta = 0.0;

  static QueryBudget Split(const Budget& budget, const BudgetSplit& split);
  Budget total() const;
};

enum class CompositionMode { kSequential, kAdvanced };

// Per-query budget when `num_queries` queries must share (xi, psi) under
// advanced composition: delta = psi / n, epsilon = xi / (2 sqrt(2 n ln(1/delta))).
Budget AdvancedCompositionBudget(double xi, double psi, int64_t num_queries);

// Tracks an analyst's spending against a total budget (xi, psi).
//
// Sequential mode refuses a charge when the running sums would exceed the
// total. Advanced mode is configured with the number of queries it was
// planned for and accepts at most that many charges, each no larger than the
// advanced-composition per-query budget.
//
// One query answered by several providers over disjoint data is charged once
// (parallel composition); callers charge per query, never per provider.
// Charge() is an atomic check-and-add.
class Accountant {
 public:
  static Accountant Sequential(Budget total);
  static Accountant Advanced(Budget total, int64_t planned_queries);

  Accountant(const Accountant& other);
  Accountant& operator=(const Accountant& other);

  // Returns ResourceExhausted (message carries the remaining budget) on
  // refusal, InvalidArgument for malformed budgets. Refusals change nothing.
  absl::Status Charge(const Budget& budget);

  Budget total() const { return total_; }
  Budget consumed() const;
  Budget remaining() const;
  int64_t num_charges() const;
  CompositionMode mode() const { return mode_; }

 private:
  Accountant(Budget total, CompositionMode mode, int64_t planned_queries);

  // Compensated running sum; keeps drift below 1e-12 over long sequences.
  struct Sum {
    double value = 0.0;
    double compensation = 0.0;
    void Add(double x);
    double get() const { return value + compensation; }
  };

  Budget total_;
  CompositionMode mode_;
  int64_t planned_queries_ = 0;
  Budget per_query_cap_;
  mutable std::mutex mu_;
  Sum epsilon_;
  Sum delta_;
  int64_t charges_ = 0;
};

}  // namespace fedrange

#endif  // FEDRANGE_DP_ACCOUNTANT_H_
