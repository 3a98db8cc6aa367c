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

#include "fedrange/datamodel/cluster.h"

#include <algorithm>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace fedrange {

absl::Status Cluster::AppendRow(std::span<const Rank> values, int64_t measure) {
  if (static_cast<int>(values.size()) != num_dimensions_) {
    return absl::InvalidArgumentError("row width does not match cluster");
  }
  if (static_cast<int>(size()) >= capacity_) {
    return absl::ResourceExhaustedError(
        absl::StrCat("cluster ", id_, " is full (capacity ", capacity_, ")"));
  }
  cells_.insert(cells_.end(), values.begin(), values.end());
  measures_.push_back(measure);
  return absl::OkStatus();
}

absl::StatusOr<std::vector<Cluster>> SplitIntoClusters(const CountTensor& tensor,
                                                       int capacity,
                                                       ClusterOrder order) {
  if (capacity < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid cluster capacity ", capacity));
  }
  std::vector<size_t> rows(tensor.num_rows());
  std::iota(rows.begin(), rows.end(), size_t{0});
  if (order == ClusterOrder::kSortedByFirstDimension &&
      tensor.num_dimensions() > 0) {
    std::stable_sort(rows.begin(), rows.end(), [&](size_t a, size_t b) {
      return tensor.row(a)[0] < tensor.row(b)[0];
    });
  }
  std::vector<Cluster> clusters;
  const int dims = tensor.num_dimensions();
  for (size_t start = 0; start < rows.size(); start += capacity) {
    Cluster c(static_cast<int>(clusters.size()), capacity, dims);
    const size_t end = std::min(rows.size(), start + capacity);
    for (size_t i = start; i < end; ++i) {
      if (absl::Status s = c.AppendRow(tensor.row(rows[i]), tensor.measure(rows[i]));
          !s.ok()) {
        return s;
      }
    }
    clusters.push_back(std::move(c));
  }
  return clusters;
}

double EvaluateOnCluster(const CompiledQuery& query, const Cluster& cluster) {
  int64_t total = 0;
  const bool count = query.aggregation == Aggregation::kCount;
  for (size_t i = 0; i < cluster.size(); ++i) {
    if (query.Matches(cluster.row(i))) total += count ? 1 : cluster.measure(i);
  }
  return static_cast<double>(total);
}

double EvaluateExact(const CompiledQuery& query,
                     std::span<const Cluster> clusters) {
  double total = 0.0;
  for (const Cluster& c : clusters) total += EvaluateOnCluster(query, c);
  return total;
}

double ClusterStore::Scan(const CompiledQuery& query, int id) const {
  reads_.fetch_add(1, std::memory_order_relaxed);
  return EvaluateOnCluster(query, clusters_[id]);
}

}  // namespace fedrange
