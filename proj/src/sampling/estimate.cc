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

#include "fedrange/sampling/estimate.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "fedrange/dp/mechanisms.h"
#include "fedrange/dp/sensitivity.h"
#include "fedrange/sampling/sampling.h"

namespace fedrange {

absl::Status SamplingPlan::Validate() const {
  if (cluster_ids.empty()) return absl::InvalidArgumentError("empty sampling plan");
  if (cluster_ids.size() != r_hat.size() || r_hat.size() != p.size()) {
    return absl::InvalidArgumentError("plan arrays differ in length");
  }
  if (sample_size < 1 || static_cast<size_t>(sample_size) > cluster_ids.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("sample size ", sample_size, " outside [1, ",
                     cluster_ids.size(), "]"));
  }
  const double sum = std::accumulate(p.begin(), p.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9) {
    return absl::InvalidArgumentError(absl::StrCat("probabilities sum to ", sum));
  }
  return absl::OkStatus();
}

absl::StatusOr<SamplingPlan> MakeSamplingPlan(std::span<const int> cluster_ids,
                                              std::span<const double> r_hat,
                                              int requested_sample_size) {
  if (cluster_ids.size() != r_hat.size()) {
    return absl::InvalidArgumentError("cluster ids and proportions differ in length");
  }
  if (cluster_ids.empty()) return absl::InvalidArgumentError("no candidate clusters");
  SamplingPlan plan;
  for (size_t i = 0; i < cluster_ids.size(); ++i) {
    if (r_hat[i] > 0.0) {
      plan.cluster_ids.push_back(cluster_ids[i]);
      plan.r_hat.push_back(r_hat[i]);
    }
  }
  if (plan.cluster_ids.empty()) {
    plan.cluster_ids.assign(cluster_ids.begin(), cluster_ids.end());
    plan.r_hat.assign(r_hat.begin(), r_hat.end());
    plan.p = UniformProbabilities(plan.cluster_ids.size());
    plan.uniform_fallback = true;
  } else {
    absl::StatusOr<std::vector<double>> p = SamplingProbabilities(plan.r_hat);
    if (!p.ok()) return p.status();
    plan.p = *std::move(p);
  }
  plan.sample_size = std::clamp(requested_sample_size, 1,
                                static_cast<int>(plan.cluster_ids.size()));
  return plan;
}

absl::StatusOr<EstimateOutput> EstimateQ(const CompiledQuery& query,
                                         const ClusterStore& store,
                                         const SamplingPlan& plan,
                                         std::span<const size_t> sample_positions,
                                         const EstimateParams& params, Rng& rng) {
  if (absl::Status s = plan.Validate(); !s.ok()) return s;
  if (sample_positions.empty()) return absl::InvalidArgumentError("empty sample");
  for (size_t pos : sample_positions) {
    if (pos >= plan.cluster_ids.size()) {
      return absl::InvalidArgumentError("sample position outside the plan");
    }
  }
  const double sum_r =
      plan.uniform_fallback ? 1.0
                            : std::accumulate(plan.r_hat.begin(), plan.r_hat.end(), 0.0);

  std::vector<double> answers(sample_positions.size());
  std::vector<double> p(sample_positions.size());
  EstimateOutput out;
  out.smooth_sensitivities.reserve(sample_positions.size());
  for (size_t i = 0; i < sample_positions.size(); ++i) {
    const size_t pos = sample_positions[i];
    answers[i] = store.Scan(query, plan.cluster_ids[pos]);
    p[i] = plan.p[pos];

    SensitivityContext ctx;
    ctx.capacity = params.capacity;
    ctx.num_query_dims = query.num_query_dims();
    ctx.n_min = params.n_min;
    // Under the uniform fallback the probabilities stand in for proportions.
    ctx.r = plan.uniform_fallback ? plan.p[pos] : plan.r_hat[pos];
    ctx.p = plan.p[pos];
    ctx.sum_r = sum_r;
    ctx.answer = answers[i];
    absl::StatusOr<double> sls =
        SmoothSensitivity(ctx, params.epsilon_estimate, params.delta);
    if (!sls.ok()) return sls.status();
    out.smooth_sensitivities.push_back(*sls);
  }
  absl::StatusOr<double> estimate = HansenHurwitz(answers, p);
  if (!estimate.ok()) return estimate.status();
  out.estimate = *estimate;
  out.averaged_sensitivity =
      std::accumulate(out.smooth_sensitivities.begin(),
                      out.smooth_sensitivities.end(), 0.0) /
      static_cast<double>(out.smooth_sensitivities.size());
  if (!params.smc_mode) {
    absl::StatusOr<double> noisy = AddLaplaceNoise(
        out.estimate, 2.0 * out.averaged_sensitivity / params.epsilon_estimate, rng);
    if (!noisy.ok()) return noisy.status();
    out.dp_result = *noisy;
  }
  return out;
}

absl::StatusOr<double> LocalExactFallback(const CompiledQuery& query,
                                          const ClusterStore& store,
                                          std::span<const int> cluster_ids,
                                          double epsilon_estimate, Rng& rng,
                                          bool add_noise) {
  if (!(epsilon_estimate > 0.0)) {
    return absl::InvalidArgumentError("estimate epsilon must be positive");
  }
  double exact = 0.0;
  for (int id : cluster_ids) exact += store.Scan(query, id);
  if (!add_noise) return exact;
  return AddLaplaceNoise(exact, 1.0 / epsilon_estimate, rng);
}

}  // namespace fedrange
