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

#ifndef FEDRANGE_METASTORE_METADATA_H_
#define FEDRANGE_METASTORE_METADATA_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "fedrange/datamodel/cluster.h"
#include "fedrange/datamodel/query.h"

namespace fedrange {

// Default cluster-count threshold under which a provider answers exactly.
inline constexpr int kDefaultNMin = 10;

// Per-cluster proportions R^{d>=}(v) = |rows with value_d >= v| / S for every
// distinct value v of every dimension d. Counts are stored as integers with
// the shared denominator S so persistence is exact.
class ProportionTable {
 public:
  struct Entry {
    Rank value;
    int32_t rows_at_or_above;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  ProportionTable() = default;
  ProportionTable(int cluster_id, int capacity,
                  std::vector<std::vector<Entry>> per_dimension)
      : cluster_id_(cluster_id),
        capacity_(capacity),
        per_dimension_(std::move(per_dimension)) {}

  int cluster_id() const { return cluster_id_; }
  int capacity() const { return capacity_; }
  int num_dimensions() const { return static_cast<int>(per_dimension_.size()); }
  std::span<const Entry> entries(int dim) const { return per_dimension_[dim]; }

  // Count of rows with value >= x: the stored count of the smallest stored
  // value >= x, or 0 past the last one. No bounds check on `dim`.
  int32_t RowsAtOrAbove(int dim, Rank x) const;

  friend bool operator==(const ProportionTable&, const ProportionTable&) = default;

 private:
  int cluster_id_ = 0;
  int capacity_ = 1;
  std::vector<std::vector<Entry>> per_dimension_;
};

// Per-dimension [v_min, v_max] of one cluster.
struct ClusterBounds {
  std::vector<Interval> per_dimension;
  friend bool operator==(const ClusterBounds&, const ClusterBounds&) = default;
};

struct GlobalMeta {
  int capacity = 1;
  int n_min = kDefaultNMin;
  std::vector<ClusterBounds> clusters;  // indexed by cluster id
  friend bool operator==(const GlobalMeta&, const GlobalMeta&) = default;
};

struct ProviderMetadata {
  GlobalMeta global;
  std::vector<ProportionTable> tables;  // indexed by cluster id
  friend bool operator==(const ProviderMetadata&, const ProviderMetadata&) = default;
};

// Offline pass over every cluster. Fails if a cluster holds more than
// `capacity` rows or is empty.
absl::StatusOr<ProviderMetadata> BuildMetadata(std::span<const Cluster> clusters,
                                               int capacity,
                                               int n_min = kDefaultNMin);

// R^{d>=}(x) read from the table (step-function semantics).
absl::StatusOr<double> LookupRGeq(const ProportionTable& table, int dim, Rank x);

// Approximated matching proportion under the independence assumption:
// the product over queried dimensions of R^{d>=}(lo) - R^{d>=}(hi + 1).
double ApproxR(const CompiledQuery& query, const ProportionTable& table);

// Clusters whose bounds intersect every queried range, in id order.
std::vector<int> IdentifyCQ(const CompiledQuery& query, const GlobalMeta& meta);

}  // namespace fedrange

#endif  // FEDRANGE_METASTORE_METADATA_H_
