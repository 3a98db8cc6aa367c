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

#include "fedrange/federation/local_federation.h"

#include <cmath>
#include <numeric>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "fedrange/dp/random.h"
#include "fedrange/federation/channel.h"

namespace fedrange {

int DeriveCapacity(const FederationOptions& options, const std::vector<size_t>& rows) {
  if (options.capacity > 0) return options.capacity;
  if (rows.empty()) return 1;
  const double mean = static_cast<double>(std::accumulate(rows.begin(), rows.end(),
                                                          size_t{0})) /
                      static_cast<double>(rows.size());
  return std::max(1, static_cast<int>(std::lround(options.capacity_fraction * mean)));
}

absl::StatusOr<std::unique_ptr<LocalFederation>> LocalFederation::Create(
    const std::vector<CountTensor>& partitions, const FederationOptions& options) {
  if (partitions.empty()) return absl::InvalidArgumentError("no partitions");
  std::vector<size_t> rows;
  for (const CountTensor& t : partitions) rows.push_back(t.num_rows());
  const int capacity = DeriveCapacity(options, rows);
  std::vector<ProviderData> data;
  for (const CountTensor& t : partitions) {
    absl::StatusOr<std::vector<Cluster>> clusters =
        SplitIntoClusters(t, capacity, options.order);
    if (!clusters.ok()) return clusters.status();
    data.push_back(ProviderData{t.schema(), capacity, *std::move(clusters)});
  }
  return FromProviderData(std::move(data), options);
}

absl::StatusOr<std::unique_ptr<LocalFederation>> LocalFederation::FromProviderData(
    std::vector<ProviderData> data, const FederationOptions& options,
    std::optional<std::vector<ProviderMetadata>> metadata) {
  if (data.empty()) return absl::InvalidArgumentError("no providers");
  if (metadata.has_value() && metadata->size() != data.size()) {
    return absl::InvalidArgumentError("one metadata set per provider required");
  }
  auto fed = std::unique_ptr<LocalFederation>(new LocalFederation());
  fed->capacity_ = data.front().capacity;
  const Schema schema = data.front().schema;
  std::vector<int> participants(data.size());
  std::iota(participants.begin(), participants.end(), 0);
  std::vector<Aggregator::ProviderLink> links;
  for (size_t i = 0; i < data.size(); ++i) {
    if (data[i].capacity != fed->capacity_) {
      return absl::InvalidArgumentError(absl::StrCat(
          "provider ", i, " uses capacity ", data[i].capacity, ", expected ", fed->capacity_));
    }
    if (!(data[i].schema == schema)) {
      return absl::InvalidArgumentError(absl::StrCat("provider ", i, " has another schema"));
    }
    ProviderMetadata meta;
    if (metadata.has_value()) {
      meta = std::move((*metadata)[i]);
    } else {
      absl::StatusOr<ProviderMetadata> built =
          BuildMetadata(data[i].clusters, data[i].capacity, options.n_min);
      if (!built.ok()) return built.status();
      meta = *std::move(built);
    }
    ProviderConfig config;
    config.provider_id = static_cast<int>(i);
    config.participants = participants;
    config.n_min = options.n_min;
    config.smc_mode = options.smc_mode;
    config.seed = MixSeed(options.seed, i + 1);
    config.mask_secret = options.mask_secret;
    config.aggregator_secret = options.aggregator_secret;
    config.replacement = options.replacement;
    absl::StatusOr<std::unique_ptr<ProviderNode>> node =
        ProviderNode::Create(std::move(config), std::move(data[i].schema),
                             ClusterStore(std::move(data[i].clusters)), std::move(meta));
    if (!node.ok()) return node.status();
    links.push_back({static_cast<int>(i), std::make_unique<InProcessChannel>(node->get())});
    fed->providers_.push_back(*std::move(node));
  }
  AggregatorConfig config;
  config.smc_mode = options.smc_mode;
  config.split = options.split;
  config.seed = options.seed;
  config.aggregator_secret = options.aggregator_secret;
  fed->aggregator_ = std::make_unique<Aggregator>(std::move(config), std::move(links));
  return fed;
}

int64_t LocalFederation::TotalClusters() const {
  int64_t total = 0;
  for (const auto& p : providers_) total += static_cast<int64_t>(p->store().size());
  return total;
}

int64_t LocalFederation::TotalReads() const {
  int64_t total = 0;
  for (const auto& p : providers_) total += p->store().reads();
  return total;
}

void LocalFederation::ResetReads() {
  for (auto& p : providers_) p->mutable_store().ResetReads();
}

int64_t LocalFederation::TotalResultNoiseDraws() const {
  int64_t total = 0;
  for (const auto& p : providers_) total += p->result_noise_draws();
  return total;
}

absl::StatusOr<double> LocalFederation::ExactAnswer(const RangeQuery& query) const {
  absl::StatusOr<CompiledQuery> compiled = Compile(query, schema());
  if (!compiled.ok()) return compiled.status();
  double total = 0.0;
  for (const auto& p : providers_) total += EvaluateExact(*compiled, p->store().clusters());
  return total;
}

}  // namespace fedrange
