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

#ifndef FEDRANGE_DATAMODEL_CLUSTER_H_
#define FEDRANGE_DATAMODEL_CLUSTER_H_

#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "fedrange/datamodel/count_tensor.h"
#include "fedrange/datamodel/query.h"

namespace fedrange {

// A fixed-capacity storage unit of count-tensor rows. Immutable once built.
class Cluster {
 public:
  Cluster(int id, int capacity, int num_dimensions)
      : id_(id), capacity_(capacity), num_dimensions_(num_dimensions) {}

  int id() const { return id_; }
  int capacity() const { return capacity_; }
  int num_dimensions() const { return num_dimensions_; }
  size_t size() const { return measures_.size(); }
  std::span<const Rank> row(size_t i) const {
    return {cells_.data() + i * num_dimensions_,
            static_cast<size_t>(num_dimensions_)};
  }
  int64_t measure(size_t i) const { return measures_[i]; }

  // Fails once the cluster holds `capacity` rows.
  absl::Status AppendRow(std::span<const Rank> values, int64_t measure);

 private:
  int id_;
  int capacity_;
  int num_dimensions_;
  std::vector<Rank> cells_;
  std::vector<int64_t> measures_;
};

enum class ClusterOrder {
  // Stable sort on the first dimension before cutting into clusters.
  kSortedByFirstDimension,
  kInsertion,
};

// Cuts the tensor into clusters of `capacity` rows (the last may be short).
// Cluster ids are dense from 0.
absl::StatusOr<std::vector<Cluster>> SplitIntoClusters(const CountTensor& tensor,
                                                       int capacity,
                                                       ClusterOrder order);

// Query result on one cluster: matching row count or their measure sum.
double EvaluateOnCluster(const CompiledQuery& query, const Cluster& cluster);

// Exact answer over every cluster; the baseline the estimates are scored
// against.
double EvaluateExact(const CompiledQuery& query,
                     std::span<const Cluster> clusters);

// A provider's clusters plus a counter of how many cluster scans were
// performed. The counter is the instrumentation behind the speed-up claims.
class ClusterStore {
 public:
  ClusterStore() = default;
  explicit ClusterStore(std::vector<Cluster> clusters)
      : clusters_(std::move(clusters)) {}
  ClusterStore(ClusterStore&& other) noexcept
      : clusters_(std::move(other.clusters_)), reads_(other.reads_.load()) {}
  ClusterStore& operator=(ClusterStore&& other) noexcept {
    clusters_ = std::move(other.clusters_);
    reads_ = other.reads_.load();
    return *this;
  }

  size_t size() const { return clusters_.size(); }
  const Cluster& cluster(int id) const { return clusters_[id]; }
  std::span<const Cluster> clusters() const { return clusters_; }

  // Evaluates the query on cluster `id` and counts one read.
  double Scan(const CompiledQuery& query, int id) const;

  int64_t reads() const { return reads_.load(); }
  void ResetReads() { reads_ = 0; }

 private:
  std::vector<Cluster> clusters_;
  mutable std::atomic<int64_t> reads_{0};
};

}  // namespace fedrange

#endif  // FEDRANGE_DATAMODEL_CLUSTER_H_
