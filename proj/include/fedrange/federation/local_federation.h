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

#ifndef FEDRANGE_FEDERATION_LOCAL_FEDERATION_H_
#define FEDRANGE_FEDERATION_LOCAL_FEDERATION_H_

#include <memory>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "fedrange/datamodel/cluster.h"
#include "fedrange/datamodel/count_tensor.h"
#include "fedrange/datamodel/storage.h"
#include "fedrange/federation/aggregator.h"
#include "fedrange/federation/provider.h"
#include "fedrange/metastore/metadata.h"

namespace fedrange {

struct FederationOptions {
  // Cluster capacity S shared by all providers. 0 derives it as
  // `capacity_fraction` of the mean per-provider tensor row count.
  int capacity = 0;
  double capacity_fraction = 0.01;
  int n_min = kDefaultNMin;
  ClusterOrder order = ClusterOrder::kSortedByFirstDimension;
  bool smc_mode = false;
  BudgetSplit split;
  uint64_t seed = 1;
  Replacement replacement = Replacement::kWithout;
  std::string mask_secret = "fedrange-mask";
  std::string aggregator_secret = "fedrange-aggregator";
};

// Capacity implied by `options` for partitions of the given row counts.
int DeriveCapacity(const FederationOptions& options, const std::vector<size_t>& rows);

// Providers and an aggregator wired through in-process channels. Provider i
// is seeded with MixSeed(options.seed, i + 1) and the aggregator with
// options.seed.
class LocalFederation {
 public:
  // One count-tensor partition per provider.
  static absl::StatusOr<std::unique_ptr<LocalFederation>> Create(
      const std::vector<CountTensor>& partitions, const FederationOptions& options);

  // Providers whose data is already clustered. Metadata is built unless
  // supplied (one entry per provider).
  static absl::StatusOr<std::unique_ptr<LocalFederation>> FromProviderData(
      std::vector<ProviderData> data, const FederationOptions& options,
      std::optional<std::vector<ProviderMetadata>> metadata = std::nullopt);

  Message Query(const RangeQuery& query, double sample_rate, const Budget& budget,
                Accountant& accountant) {
    return aggregator_->HandleQuery(query, sample_rate, budget, accountant);
  }

  Aggregator& aggregator() { return *aggregator_; }
  ProviderNode& provider(int i) { return *providers_[i]; }
  int num_providers() const { return static_cast<int>(providers_.size()); }
  int capacity() const { return capacity_; }
  const Schema& schema() const { return providers_.front()->schema(); }

  int64_t TotalClusters() const;
  int64_t TotalReads() const;
  void ResetReads();
  int64_t TotalResultNoiseDraws() const;

  // Exact answer over every provider's clusters; does not count reads.
  absl::StatusOr<double> ExactAnswer(const RangeQuery& query) const;

 private:
  LocalFederation() = default;

  int capacity_ = 0;
  std::vector<std::unique_ptr<ProviderNode>> providers_;
  std::unique_ptr<Aggregator> aggregator_;
};

}  // namespace fedrange

#endif  // FEDRANGE_FEDERATION_LOCAL_FEDERATION_H_
