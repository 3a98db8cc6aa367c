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

#include "fedrange/allocation/allocation.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "fedrange/dp/mechanisms.h"

namespace fedrange {

absl::StatusOr<ProviderSummary> PerturbSummary(int provider_id, int64_t n_q,
                                               double avg_r,
                                               double epsilon_overview,
                                               double delta_avg, Rng& rng) {
  if (!(epsilon_overview > 0.0)) {
    return absl::InvalidArgumentError("overview epsilon must be positive");
  }
  if (n_q < 0 || !(avg_r >= 0.0 && avg_r <= 1.0)) {
    return absl::InvalidArgumentError("summary values out of range");
  }
  ProviderSummary out;
  out.provider_id = provider_id;
  const double noisy_n =
      static_cast<double>(n_q) + SampleLaplace(2.0 / epsilon_overview, rng);
  out.n_q_noisy = std::max<int64_t>(0, std::llround(noisy_n));
  out.avg_r_noisy = std::clamp(
      avg_r + SampleLaplace(2.0 * delta_avg / epsilon_overview, rng), 0.0, 1.0);
  return out;
}

absl::StatusOr<Allocation> SolveAllocation(std::span<const ProviderSummary> summaries,
                                           double sample_rate) {
  if (summaries.empty()) return absl::InvalidArgumentError("no providers");
  if (!(sample_rate > 0.0 && sample_rate < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sample rate must lie in (0, 1), got ", sample_rate));
  }
  const size_t n = summaries.size();
  std::vector<int64_t> lower(n);
  std::vector<int64_t> upper(n);
  int64_t total_n = 0;
  for (size_t i = 0; i < n; ++i) {
    const int64_t nq = summaries[i].n_q_noisy;
    if (nq < 0) return absl::InvalidArgumentError("negative cluster count");
    total_n += nq;
    if (nq <= 2) {
      lower[i] = upper[i] = std::min<int64_t>(nq, 1);
    } else {
      lower[i] = 2;
      upper[i] = nq - 1;
    }
  }
  const int64_t min_total = std::accumulate(lower.begin(), lower.end(), int64_t{0});
  const int64_t max_total = std::accumulate(upper.begin(), upper.end(), int64_t{0});

  Allocation out;
  const int64_t requested =
      std::llround(sample_rate * static_cast<double>(total_n));
  out.target_total = std::clamp(requested, min_total, max_total);
  if (out.target_total != requested) {
    out.clamped = true;
    out.warning = absl::StrCat("sample total ", requested,
                               " infeasible; clamped to ", out.target_total);
  }

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (summaries[a].avg_r_noisy != summaries[b].avg_r_noisy) {
      return summaries[a].avg_r_noisy > summaries[b].avg_r_noisy;
    }
    return summaries[a].provider_id < summaries[b].provider_id;
  });
  out.sample_sizes = lower;
  int64_t remaining = out.target_total - min_total;
  for (size_t i : order) {
    const int64_t add = std::min(remaining, upper[i] - lower[i]);
    out.sample_sizes[i] += add;
    remaining -= add;
  }
  return out;
}

double AllocationObjective(std::span<const ProviderSummary> summaries,
                           std::span<const int64_t> sample_sizes) {
  double total = 0.0;
  for (size_t i = 0; i < summaries.size(); ++i) {
    total += summaries[i].avg_r_noisy * static_cast<double>(sample_sizes[i]);
  }
  return total;
}

}  // namespace fedrange
