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

#ifndef FEDRANGE_DATAMODEL_QUERY_H_
#define FEDRANGE_DATAMODEL_QUERY_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "fedrange/datamodel/schema.h"

namespace fedrange {

enum class Aggregation { kCount, kSum };

absl::string_view AggregationName(Aggregation agg);
absl::StatusOr<Aggregation> ParseAggregation(absl::string_view name);

// Closed interval of ranks.
struct Interval {
  Rank lo = 0;
  Rank hi = 0;

  bool Intersects(const Interval& other) const {
    return lo <= other.hi && other.lo <= hi;
  }
  bool Contains(Rank v) const { return lo <= v && v <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// COUNT(*) or SUM(Measure) over rows whose values fall in every listed
// closed range.
struct RangeQuery {
  Aggregation aggregation = Aggregation::kCount;
  std::map<std::string, Interval> ranges;

  friend bool operator==(const RangeQuery&, const RangeQuery&) = default;
};

// A RangeQuery resolved against a schema; what the engine evaluates.
struct CompiledQuery {
  struct Range {
    int dim;
    Interval interval;
  };
  Aggregation aggregation = Aggregation::kCount;
  std::vector<Range> ranges;  // sorted by dim

  int num_query_dims() const { return static_cast<int>(ranges.size()); }
  bool Matches(std::span<const Rank> row) const {
    for (const Range& r : ranges) {
      if (!r.interval.Contains(row[r.dim])) return false;
    }
    return true;
  }
};

// Fails if a named dimension is unknown, an interval is reversed or falls
// outside the domain, or no dimension is queried.
absl::StatusOr<CompiledQuery> Compile(const RangeQuery& query,
                                      const Schema& schema);

// Human-readable form, e.g. "COUNT age[3,10] sex[0,0]".
std::string DebugString(const RangeQuery& query);

}  // namespace fedrange

#endif  // FEDRANGE_DATAMODEL_QUERY_H_
