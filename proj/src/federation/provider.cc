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

#include "fedrange/federation/provider.h"

#include <algorithm>
#include <numeric>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "fedrange/allocation/allocation.h"
#include "fedrange/dp/mechanisms.h"
#include "fedrange/dp/sensitivity.h"
#include "fedrange/sampling/estimate.h"

namespace fedrange {
namespace {

// Sensitivity a fallback provider submits in SMC mode: the aggregator's
// single draw at 2 * max / eps is then at least the 1 / eps exact release.
constexpr double kFallbackSmcSensitivity = 0.5;

absl::Status ProtocolError(absl::string_view what) {
  return absl::FailedPreconditionError(absl::StrCat("protocol error: ", what));
}

}  // namespace

Rng ProviderQueryRng(uint64_t seed, absl::string_view query_id, ProviderStream stream) {
  return Rng(MixSeed(MixSeed(seed, HashString(query_id)), static_cast<uint64_t>(stream)));
}

absl::StatusOr<std::unique_ptr<ProviderNode>> ProviderNode::Create(
    ProviderConfig config, Schema schema, ClusterStore store, ProviderMetadata metadata) {
  if (absl::Status s = schema.Validate(); !s.ok()) return s;
  if (metadata.tables.size() != store.size() ||
      metadata.global.clusters.size() != store.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("metadata covers ", metadata.tables.size(), " clusters but the store holds ",
                     store.size()));
  }
  if (metadata.global.capacity < 1) {
    return absl::InvalidArgumentError("cluster capacity must be positive");
  }
  if (config.n_min < 0) return absl::InvalidArgumentError("n_min must be non-negative");
  if (config.participants.empty()) config.participants = {config.provider_id};
  std::sort(config.participants.begin(), config.participants.end());
  if (!std::binary_search(config.participants.begin(), config.participants.end(),
                          config.provider_id)) {
    return absl::InvalidArgumentError("provider id missing from the participant list");
  }
  if (config.max_pending_queries == 0) config.max_pending_queries = 1;
  return std::unique_ptr<ProviderNode>(new ProviderNode(
      std::move(config), std::move(schema), std::move(store), std::move(metadata)));
}

ProviderNode::ProviderNode(ProviderConfig config, Schema schema, ClusterStore store,
                           ProviderMetadata metadata)
    : config_(std::move(config)),
      schema_(std::move(schema)),
      store_(std::move(store)),
      metadata_(std::move(metadata)),
      n_min_(config_.n_min > 0 ? config_.n_min : metadata_.global.n_min),
      masker_(config_.mask_secret),
      max_protocol_(config_.aggregator_secret) {}

size_t ProviderNode::pending_queries() const {
  std::lock_guard<std::mutex> lock(mu_);
  return pending_.size();
}

ProviderNode::Release ProviderNode::last_release() const {
  std::lock_guard<std::mutex> lock(mu_);
  return last_release_;
}

absl::StatusOr<Message> ProviderNode::Handle(const Message& request) {
  if (const auto* q = std::get_if<QueryPayload>(&request.payload)) {
    return HandleQuery(request.query_id, *q);
  }
  if (const auto* a = std::get_if<AllocationPayload>(&request.payload)) {
    return HandleAllocation(request.query_id, *a);
  }
  return ProtocolError(absl::StrCat("provider cannot handle ",
                                    MessageTypeName(request.type())));
}

absl::StatusOr<Message> ProviderNode::HandleQuery(const std::string& query_id,
                                                  const QueryPayload& payload) {
  if (query_id.empty()) return ProtocolError("empty query_id");
  if (payload.smc_mode != config_.smc_mode) {
    return ProtocolError(absl::StrCat("query mode ", payload.smc_mode ? "smc" : "plain",
                                      " does not match provider configuration"));
  }
  if (absl::Status s = payload.budget.Validate(); !s.ok()) return s;
  if (absl::Status s = payload.split.Validate(); !s.ok()) return s;
  absl::StatusOr<CompiledQuery> compiled = Compile(payload.query, schema_);
  if (!compiled.ok()) return compiled.status();

  Pending pending;
  pending.query = *std::move(compiled);
  pending.budget = QueryBudget::Split(payload.budget, payload.split);
  pending.candidates = IdentifyCQ(pending.query, metadata_.global);
  pending.r_hat.reserve(pending.candidates.size());
  for (int id : pending.candidates) {
    pending.r_hat.push_back(ApproxR(pending.query, metadata_.tables[id]));
  }
  const int64_t n_q = static_cast<int64_t>(pending.candidates.size());
  const double avg_r =
      n_q == 0 ? 0.0
               : std::accumulate(pending.r_hat.begin(), pending.r_hat.end(), 0.0) /
                     static_cast<double>(n_q);
  const double delta_avg =
      DeltaAvgR(capacity(), pending.query.num_query_dims(), n_min_);
  Rng rng = ProviderQueryRng(config_.seed, query_id, ProviderStream::kSummary);
  absl::StatusOr<ProviderSummary> summary = PerturbSummary(
      config_.provider_id, n_q, avg_r, pending.budget.epsilon_overview, delta_avg, rng);
  if (!summary.ok()) return summary.status();
  summary_noise_draws_ += 2;

  {
    std::lock_guard<std::mutex> lock(mu_);
    if (pending_.contains(query_id)) {
      return ProtocolError(absl::StrCat("query_id '", query_id, "' already in flight"));
    }
    pending_.emplace(query_id, std::move(pending));
    pending_order_.push_back(query_id);
    while (pending_.size() > config_.max_pending_queries) {
      pending_.erase(pending_order_.front());
      pending_order_.pop_front();
    }
  }
  return Message{query_id, SummaryPayload{config_.provider_id, summary->n_q_noisy,
                                          summary->avg_r_noisy}};
}

absl::StatusOr<Message> ProviderNode::HandleAllocation(const std::string& query_id,
                                                       const AllocationPayload& payload) {
  if (payload.provider_id != config_.provider_id) {
    return ProtocolError(absl::StrCat("allocation addressed to provider ",
                                      payload.provider_id));
  }
  if (payload.sample_size < 0) return ProtocolError("negative sample size");
  Pending pending;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = pending_.find(query_id);
    if (it == pending_.end()) {
      return ProtocolError(absl::StrCat("unknown query_id '", query_id, "'"));
    }
    pending = std::move(it->second);
    pending_.erase(it);
    pending_order_.erase(
        std::find(pending_order_.begin(), pending_order_.end(), query_id));
  }

  const bool smc = config_.smc_mode;
  const int n_q = static_cast<int>(pending.candidates.size());
  double value = 0.0;
  double sensitivity = 0.0;
  bool noised = false;
  Release release;
  release.query_id = query_id;
  Rng estimate_rng = ProviderQueryRng(config_.seed, query_id, ProviderStream::kEstimate);
  if (n_q < n_min_) {
    ++fallback_count_;
    absl::StatusOr<double> exact =
        LocalExactFallback(pending.query, store_, pending.candidates,
                           pending.budget.epsilon_estimate, estimate_rng, /*add_noise=*/false);
    if (!exact.ok()) return exact.status();
    release.pre_noise = *exact;
    release.fallback = true;
    value = *exact;
    if (!smc) {
      release.noise_scale = 1.0 / pending.budget.epsilon_estimate;
      absl::StatusOr<double> noisy = AddLaplaceNoise(*exact, release.noise_scale, estimate_rng);
      if (!noisy.ok()) return noisy.status();
      value = *noisy;
      noised = true;
    }
    sensitivity = kFallbackSmcSensitivity;
  } else {
    const int requested = static_cast<int>(
        std::min<int64_t>(payload.sample_size, std::numeric_limits<int>::max()));
    absl::StatusOr<SamplingPlan> plan =
        MakeSamplingPlan(pending.candidates, pending.r_hat, requested);
    if (!plan.ok()) return plan.status();
    Rng sampling_rng = ProviderQueryRng(config_.seed, query_id, ProviderStream::kSampling);
    absl::StatusOr<ClusterSample> sample =
        EmSampling(plan->p, plan->sample_size, pending.budget.epsilon_sampling,
                   DeltaP(n_min_), sampling_rng, config_.replacement);
    if (!sample.ok()) return sample.status();
    EstimateParams params;
    params.capacity = capacity();
    params.n_min = n_min_;
    params.epsilon_estimate = pending.budget.epsilon_estimate;
    params.delta = pending.budget.delta;
    params.smc_mode = smc;
    absl::StatusOr<EstimateOutput> out = EstimateQ(pending.query, store_, *plan,
                                                   sample->positions, params, estimate_rng);
    if (!out.ok()) return out.status();
    noised = out->dp_result.has_value();
    value = noised ? *out->dp_result : out->estimate;
    sensitivity = out->averaged_sensitivity;
    release.pre_noise = out->estimate;
    if (noised) release.noise_scale = 2.0 * sensitivity / pending.budget.epsilon_estimate;
  }
  if (noised) ++result_noise_draws_;
  release.released = value;
  release.sensitivity = sensitivity;
  {
    std::lock_guard<std::mutex> lock(mu_);
    last_release_ = release;
  }

  if (!smc) return Message{query_id, ResultPayload{config_.provider_id, value}};
  absl::StatusOr<uint64_t> encoded = EncodeFixedPoint(value);
  if (!encoded.ok()) return encoded.status();
  absl::StatusOr<uint64_t> masked_sensitivity =
      max_protocol_.Submit(config_.provider_id, query_id, sensitivity);
  if (!masked_sensitivity.ok()) return masked_sensitivity.status();
  SecureSharePayload share;
  share.provider_id = config_.provider_id;
  share.masked_value = masker_.Mask(config_.provider_id, config_.participants, query_id,
                                    *encoded);
  share.masked_sensitivity = *masked_sensitivity;
  return Message{query_id, share};
}

}  // namespace fedrange
