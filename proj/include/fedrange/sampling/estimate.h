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

#ifndef FEDRANGE_SAMPLING_ESTIMATE_H_
#define FEDRANGE_SAMPLING_ESTIMATE_H_

#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "fedrange/datamodel/cluster.h"
#include "fedrange/datamodel/query.h"
#include "fedrange/dp/random.h"

namespace fedrange {

struct SamplingPlan {
  std::vector<int> cluster_ids;
  std::vector<double> r_hat;
  std::vector<double> p;
  int sample_size = 1;
  // True when every R was zero and p fell back to uniform.
  bool uniform_fallback = false;

  absl::Status Validate() const;
};

// Builds a plan over the clusters with positive R. When none has positive R
// the plan covers every candidate with uniform p. Fails on an empty candidate
// list. The sample size is clamped into [1, plan size].
absl::StatusOr<SamplingPlan> MakeSamplingPlan(std::span<const int> cluster_ids,
                                              std::span<const double> r_hat,
                                              int requested_sample_size);

struct EstimateOutput {
  double estimate = 0.0;
  std::vector<double> smooth_sensitivities;
  double averaged_sensitivity = 0.0;
  std::optional<double> dp_result;
};

struct EstimateParams {
  int capacity = 1;
  int n_min = 10;
  double epsilon_estimate = 0.8;
  double delta = 1e-3;
  bool smc_mode = false;
};

// Scans exactly the sampled clusters through `store`, computes the
// Hansen-Hurwitz estimate, the per-cluster smooth sensitivities and their
// mean. Outside SMC mode adds Laplace(2 * mean / epsilon_estimate).
absl::StatusOr<EstimateOutput> EstimateQ(const CompiledQuery& query,
                                         const ClusterStore& store,
                                         const SamplingPlan& plan,
                                         std::span<const size_t> sample_positions,
                                         const EstimateParams& params, Rng& rng);

// Exact answer over the listed clusters plus Laplace(1 / epsilon_estimate).
// The noise is skipped when `add_noise` is false (secure aggregation adds it
// once at the aggregator).
absl::StatusOr<double> LocalExactFallback(const CompiledQuery& query,
                                          const ClusterStore& store,
                                          std::span<const int> cluster_ids,
                                          double epsilon_estimate, Rng& rng,
                                          bool add_noise = true);

}  // namespace fedrange

#endif  // FEDRANGE_SAMPLING_ESTIMATE_H_
