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

#include "fedrange/datamodel/query.h"

#include <algorithm>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"

namespace fedrange {

absl::string_view AggregationName(Aggregation agg) {
  return agg == Aggregation::kCount ? "COUNT" : "SUM";
}

absl::StatusOr<Aggregation> ParseAggregation(absl::string_view name) {
  const std::string upper = absl::AsciiStrToUpper(name);
  if (upper == "COUNT") return Aggregation::kCount;
  if (upper == "SUM") return Aggregation::kSum;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown aggregation '", name, "'"));
}

absl::StatusOr<CompiledQuery> Compile(const RangeQuery& query,
                                      const Schema& schema) {
  if (query.ranges.empty()) {
    return absl::InvalidArgumentError("query must constrain at least one dimension");
  }
  CompiledQuery out;
  out.aggregation = query.aggregation;
  for (const auto& [name, interval] : query.ranges) {
    absl::StatusOr<int> dim = schema.IndexOf(name);
    if (!dim.ok()) return dim.status();
    if (interval.lo > interval.hi) {
      return absl::InvalidArgumentError(absl::StrCat(
          "range on ", name, " is reversed: [", interval.lo, ",", interval.hi, "]"));
    }
    const int size = schema.dimensions[*dim].size();
    if (interval.lo < 0 || interval.hi >= size) {
      return absl::OutOfRangeError(absl::StrCat(
          "range on ", name, " leaves the domain [0,", size - 1, "]"));
    }
    out.ranges.push_back({*dim, interval});
  }
  std::sort(out.ranges.begin(), out.ranges.end(),
            [](const auto& a, const auto& b) { return a.dim < b.dim; });
  return out;
}

std::string DebugString(const RangeQuery& query) {
  std::string out(AggregationName(query.aggregation));
  for (const auto& [name, iv] : query.ranges) {
    absl::StrAppend(&out, " ", name, "[", iv.lo, ",", iv.hi, "]");
  }
  return out;
}

}  // namespace fedrange
