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

#include "fedrange/metastore/metadata.h"

#include <algorithm>
#include <map>

#include "absl/strings/str_cat.h"

namespace fedrange {

int32_t ProportionTable::RowsAtOrAbove(int dim, Rank x) const {
  const std::vector<Entry>& e = per_dimension_[dim];
  auto it = std::lower_bound(
      e.begin(), e.end(), x,
      [](const Entry& entry, Rank v) { return entry.value < v; });
  return it == e.end() ? 0 : it->rows_at_or_above;
}

absl::StatusOr<ProviderMetadata> BuildMetadata(std::span<const Cluster> clusters,
                                               int capacity, int n_min) {
  if (capacity < 1) return absl::InvalidArgumentError("capacity must be positive");
  if (n_min < 1) return absl::InvalidArgumentError("N^min must be at least 1");
  ProviderMetadata meta;
  meta.global.capacity = capacity;
  meta.global.n_min = n_min;
  for (size_t id = 0; id < clusters.size(); ++id) {
    const Cluster& c = clusters[id];
    if (static_cast<int>(c.size()) > capacity) {
      return absl::FailedPreconditionError(absl::StrCat(
          "cluster ", c.id(), " holds ", c.size(), " rows, capacity is ", capacity));
    }
    if (c.size() == 0) {
      return absl::FailedPreconditionError(
          absl::StrCat("cluster ", c.id(), " is empty"));
    }
    const int dims = c.num_dimensions();
    std::vector<std::vector<ProportionTable::Entry>> per_dim(dims);
    ClusterBounds bounds;
    for (int d = 0; d < dims; ++d) {
      std::map<Rank, int32_t> histogram;
      for (size_t i = 0; i < c.size(); ++i) ++histogram[c.row(i)[d]];
      std::vector<ProportionTable::Entry>& entries = per_dim[d];
      entries.reserve(histogram.size());
      int32_t at_or_above = static_cast<int32_t>(c.size());
      for (const auto& [value, count] : histogram) {
        entries.push_back({value, at_or_above});
        at_or_above -= count;
      }
      bounds.per_dimension.push_back(
          {histogram.begin()->first, histogram.rbegin()->first});
    }
    meta.tables.emplace_back(static_cast<int>(id), capacity, std::move(per_dim));
    meta.global.clusters.push_back(std::move(bounds));
  }
  return meta;
}

absl::StatusOr<double> LookupRGeq(const ProportionTable& table, int dim, Rank x) {
  if (dim < 0 || dim >= table.num_dimensions()) {
    return absl::NotFoundError(absl::StrCat("schema error: unknown dimension ", dim));
  }
  return static_cast<double>(table.RowsAtOrAbove(dim, x)) / table.capacity();
}

double ApproxR(const CompiledQuery& query, const ProportionTable& table) {
  const double s = static_cast<double>(table.capacity());
  double r = 1.0;
  for (const CompiledQuery::Range& range : query.ranges) {
    const int32_t inside = table.RowsAtOrAbove(range.dim, range.interval.lo) -
                           table.RowsAtOrAbove(range.dim, range.interval.hi + 1);
    r *= static_cast<double>(inside) / s;
  }
  return r;
}

std::vector<int> IdentifyCQ(const CompiledQuery& query, const GlobalMeta& meta) {
  std::vector<int> out;
  for (size_t id = 0; id < meta.clusters.size(); ++id) {
    const ClusterBounds& b = meta.clusters[id];
    bool overlaps = true;
    for (const CompiledQuery::Range& range : query.ranges) {
      if (!b.per_dimension[range.dim].Intersects(range.interval)) {
        overlaps = false;
        break;
      }
    }
    if (overlaps) out.push_back(static_cast<int>(id));
  }
  return out;
}

}  // namespace fedrange
