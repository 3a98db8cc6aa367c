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

#ifndef FEDRANGE_FEDERATION_PROVIDER_H_
#define FEDRANGE_FEDERATION_PROVIDER_H_

#include <atomic>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "fedrange/datamodel/cluster.h"
#include "fedrange/datamodel/query.h"
#include "fedrange/datamodel/schema.h"
#include "fedrange/dp/accountant.h"
#include "fedrange/dp/random.h"
#include "fedrange/federation/message.h"
#include "fedrange/federation/secure_sum.h"
#include "fedrange/metastore/metadata.h"
#include "fedrange/sampling/sampling.h"

namespace fedrange {

struct ProviderConfig {
  int provider_id = 0;
  // Every provider id in the federation; the secure-sum participant set.
  std::vector<int> participants;
  // 0 uses the threshold recorded in the metadata.
  int n_min = 0;
  bool smc_mode = false;
  uint64_t seed = 1;
  // Shared by all providers; keys the pairwise masks.
  std::string mask_secret = "fedrange-mask";
  // Shared with the aggregator; keys the sensitivity pads.
  std::string aggregator_secret = "fedrange-aggregator";
  Replacement replacement = Replacement::kWithout;
  // Oldest pending queries are dropped beyond this many.
  size_t max_pending_queries = 1024;
};

// Independent random streams a provider uses for one query.
enum class ProviderStream : uint64_t { kSummary = 1, kSampling = 2, kEstimate = 3 };

// The generator a provider with `seed` uses for `stream` of `query_id`.
Rng ProviderQueryRng(uint64_t seed, absl::string_view query_id, ProviderStream stream);

// One data provider. Answers QUERY with SUMMARY and ALLOCATION with RESULT
// (plain mode) or SECURE_SHARE (SMC mode). Per-query state lives from QUERY
// until the matching ALLOCATION has been answered. Thread-safe.
class ProviderNode {
 public:
  static absl::StatusOr<std::unique_ptr<ProviderNode>> Create(ProviderConfig config,
                                                              Schema schema,
                                                              ClusterStore store,
                                                              ProviderMetadata metadata);

  // Protocol violations (unknown query_id, mode mismatch, wrong provider id)
  // are FailedPrecondition; malformed queries are InvalidArgument.
  absl::StatusOr<Message> Handle(const Message& request);

  int provider_id() const { return config_.provider_id; }
  const ProviderConfig& config() const { return config_; }
  const Schema& schema() const { return schema_; }
  const ClusterStore& store() const { return store_; }
  ClusterStore& mutable_store() { return store_; }
  const ProviderMetadata& metadata() const { return metadata_; }
  int capacity() const { return metadata_.global.capacity; }
  int n_min() const { return n_min_; }

  // Laplace draws applied to released results (RESULT values).
  int64_t result_noise_draws() const { return result_noise_draws_.load(); }
  // Laplace draws applied to SUMMARY fields.
  int64_t summary_noise_draws() const { return summary_noise_draws_.load(); }
  // Queries answered by local exact evaluation instead of sampling.
  int64_t fallback_count() const { return fallback_count_.load(); }
  size_t pending_queries() const;

  // The value a provider released for its latest ALLOCATION.
  struct Release {
    std::string query_id;
    double pre_noise = 0.0;    // estimate or exact local answer
    double released = 0.0;     // RESULT value, or the masked input in SMC mode
    double noise_scale = 0.0;  // Laplace scale applied here; 0 when none
    double sensitivity = 0.0;  // averaged smooth sensitivity submitted
    bool fallback = false;
  };
  Release last_release() const;

 private:
  struct Pending {
    CompiledQuery query;
    QueryBudget budget;
    std::vector<int> candidates;  // C^Q
    std::vector<double> r_hat;    // parallel to candidates
  };

  ProviderNode(ProviderConfig config, Schema schema, ClusterStore store,
               ProviderMetadata metadata);

  absl::StatusOr<Message> HandleQuery(const std::string& query_id,
                                      const QueryPayload& payload);
  absl::StatusOr<Message> HandleAllocation(const std::string& query_id,
                                           const AllocationPayload& payload);

  ProviderConfig config_;
  Schema schema_;
  ClusterStore store_;
  ProviderMetadata metadata_;
  int n_min_;
  PairwiseMasker masker_;
  UnmaskedMaxSensitivity max_protocol_;

  mutable std::mutex mu_;
  absl::flat_hash_map<std::string, Pending> pending_;
  std::deque<std::string> pending_order_;
  Release last_release_;

  std::atomic<int64_t> result_noise_draws_{0};
  std::atomic<int64_t> summary_noise_draws_{0};
  std::atomic<int64_t> fallback_count_{0};
};

}  // namespace fedrange

#endif  // FEDRANGE_FEDERATION_PROVIDER_H_
