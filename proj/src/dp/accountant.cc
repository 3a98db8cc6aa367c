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

#include "fedrange/dp/accountant.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_format.h"

namespace fedrange {
namespace {

// Slack for comparing accumulated floating-point budgets against a total.
constexpr double kBudgetTolerance = 1e-12;

bool Exceeds(double used, double total) {
  return used > total + kBudgetTolerance * std::max(1.0, total);
}

}  // namespace

absl::Status Budget::Validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("epsilon must be positive and finite, got %g", epsilon));
  }
  if (!(delta >= 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in [0, 1), got %g", delta));
  }
  return absl::OkStatus();
}

absl::Status BudgetSplit::Validate() const {
  for (double hp : {overview, sampling, estimate}) {
    if (!(hp > 0.0 && hp < 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("budget split entries must lie in (0, 1), got %g", hp));
    }
  }
  if (std::abs(overview + sampling + estimate - 1.0) > 1e-9) {
    return absl::InvalidArgumentError("budget split must sum to 1");
  }
  return absl::OkStatus();
}

QueryBudget QueryBudget::Split(const Budget& budget, const BudgetSplit& split) {
  QueryBudget out;
  out.epsilon_overview = split.overview * budget.epsilon;
  out.epsilon_sampling = split.sampling * budget.epsilon;
  out.epsilon_estimate = split.estimate * budget.epsilon;
  out.delta = budget.delta;
  return out;
}

Budget QueryBudget::total() const {
  return Budget{epsilon_overview + epsilon_sampling + epsilon_estimate, delta};
}

Budget AdvancedCompositionBudget(double xi, double psi, int64_t num_queries) {
  const double n = static_cast<double>(num_queries);
  Budget b;
  b.delta = psi / n;
  b.epsilon = xi / (2.0 * std::sqrt(2.0 * n * std::log(1.0 / b.delta)));
  return b;
}

void Accountant::Sum::Add(double x) {
  // Neumaier summation.
  const double t = value + x;
  if (std::abs(value) >= std::abs(x)) {
    compensation += (value - t) + x;
  } else {
    compensation += (x - t) + value;
  }
  value = t;
}

Accountant::Accountant(Budget total, CompositionMode mode,
                       int64_t planned_queries)
    : total_(total), mode_(mode), planned_queries_(planned_queries) {
  if (mode_ == CompositionMode::kAdvanced) {
    per_query_cap_ =
        AdvancedCompositionBudget(total.epsilon, total.delta, planned_queries);
  }
}

Accountant Accountant::Sequential(Budget total) {
  return Accountant(total, CompositionMode::kSequential, 0);
}

Accountant Accountant::Advanced(Budget total, int64_t planned_queries) {
  return Accountant(total, CompositionMode::kAdvanced,
                    planned_queries < 1 ? 1 : planned_queries);
}

Accountant::Accountant(const Accountant& other) { *this = other; }

Accountant& Accountant::operator=(const Accountant& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mu_, other.mu_);
  total_ = other.total_;
  mode_ = other.mode_;
  planned_queries_ = other.planned_queries_;
  per_query_cap_ = other.per_query_cap_;
  epsilon_ = other.epsilon_;
  delta_ = other.delta_;
  charges_ = other.charges_;
  return *this;
}

absl::Status Accountant::Charge(const Budget& budget) {
  if (absl::Status s = budget.Validate(); !s.ok()) return s;
  std::lock_guard<std::mutex> lock(mu_);
  const Budget left{total_.epsilon - epsilon_.get(),
                    total_.delta - delta_.get()};
  const auto refuse = [&](const char* why) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "privacy budget exhausted (%s); remaining epsilon=%.17g delta=%.17g",
        why, left.epsilon, left.delta));
  };
  if (mode_ == CompositionMode::kSequential) {
    if (Exceeds(epsilon_.get() + budget.epsilon, total_.epsilon)) {
      return refuse("epsilon");
    }
    if (Exceeds(delta_.get() + budget.delta, total_.delta)) {
      return refuse("delta");
    }
  } else {
    if (charges_ >= planned_queries_) return refuse("planned query count");
    if (Exceeds(budget.epsilon, per_query_cap_.epsilon) ||
        Exceeds(budget.delta, per_query_cap_.delta)) {
      return refuse("per-query advanced-composition cap");
    }
  }
  epsilon_.Add(budget.epsilon);
  delta_.Add(budget.delta);
  ++charges_;
  return absl::OkStatus();
}

Budget Accountant::consumed() const {
  std::lock_guard<std::mutex> lock(mu_);
  return Budget{epsilon_.get(), delta_.get()};
}

Budget Accountant::remaining() const {
  std::lock_guard<std::mutex> lock(mu_);
  return Budget{total_.epsilon - epsilon_.get(), total_.delta - delta_.get()};
}

int64_t Accountant::num_charges() const {
  std::lock_guard<std::mutex> lock(mu_);
  return charges_;
}

}  // namespace fedrange
