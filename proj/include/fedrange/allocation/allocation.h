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

#ifndef FEDRANGE_ALLOCATION_ALLOCATION_H_
#define FEDRANGE_ALLOCATION_ALLOCATION_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fedrange/dp/random.h"

namespace fedrange {

// What a provider releases about a query before sampling.
struct ProviderSummary {
  int provider_id = 0;
  int64_t n_q_noisy = 0;     // rounded, >= 0
  double avg_r_noisy = 0.0;  // clamped to [0, 1]
};

// Releases N^Q and Avg(R) with epsilon_overview / 2 each:
// N^Q + Lap(2 / eps) rounded and floored at 0, and
// Avg(R) + Lap(2 * delta_avg / eps) clamped to [0, 1].
absl::StatusOr<ProviderSummary> PerturbSummary(int provider_id, int64_t n_q,
                                               double avg_r,
                                               double epsilon_overview,
                                               double delta_avg, Rng& rng);

struct Allocation {
  std::vector<int64_t> sample_sizes;  // parallel to the summaries
  int64_t target_total = 0;           // after clamping
  bool clamped = false;
  std::string warning;
};

// Maximizes sum(avg_i * s_i) subject to sum(s_i) = round(sr * sum(N_i)) and
// 2 <= s_i <= N_i - 1. Providers with N_i <= 2 get min(N_i, 1). A target
// outside the feasible range is clamped into it and reported in `warning`.
absl::StatusOr<Allocation> SolveAllocation(std::span<const ProviderSummary> summaries,
                                           double sample_rate);

double AllocationObjective(std::span<const ProviderSummary> summaries,
                           std::span<const int64_t> sample_sizes);

}  // namespace fedrange

#endif  // FEDRANGE_ALLOCATION_ALLOCATION_H_
