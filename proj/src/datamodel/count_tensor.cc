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

#include "fedrange/datamodel/count_tensor.h"

#include <algorithm>
#include <numeric>

#include "absl/container/flat_hash_map.h"
#include "absl/container/flat_hash_set.h"
#include "absl/hash/hash.h"
#include "absl/strings/str_cat.h"
#include "fedrange/dp/random.h"

namespace fedrange {
namespace {

absl::Status CheckRanks(std::span<const Rank> values,
                        const std::vector<Dimension>& dims) {
  if (values.size() != dims.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "row has ", values.size(), " values, expected ", dims.size()));
  }
  for (size_t d = 0; d < dims.size(); ++d) {
    if (values[d] < 0 || values[d] >= dims[d].size()) {
      return absl::OutOfRangeError(absl::StrCat(
          "rank ", values[d], " outside domain of ", dims[d].name));
    }
  }
  return absl::OkStatus();
}

// Hashes a fixed-width key of ranks.
struct KeyHash {
  size_t operator()(const std::vector<Rank>& key) const {
    return absl::Hash<std::vector<Rank>>{}(key);
  }
};

}  // namespace

absl::Status Table::AppendRow(std::span<const Rank> values) {
  if (absl::Status s = CheckRanks(values, dimensions_); !s.ok()) return s;
  cells_.insert(cells_.end(), values.begin(), values.end());
  return absl::OkStatus();
}

int64_t CountTensor::TotalMeasure() const {
  return std::accumulate(measures_.begin(), measures_.end(), int64_t{0});
}

absl::Status CountTensor::AppendRow(std::span<const Rank> values,
                                    int64_t measure) {
  if (absl::Status s = CheckRanks(values, schema_.dimensions); !s.ok()) {
    return s;
  }
  if (measure < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("measure must be >= 1, got ", measure));
  }
  cells_.insert(cells_.end(), values.begin(), values.end());
  measures_.push_back(measure);
  return absl::OkStatus();
}

void CountTensor::Reserve(size_t rows) {
  cells_.reserve(rows * schema_.dimensions.size());
  measures_.reserve(rows);
}

absl::Status CountTensor::Validate() const {
  if (absl::Status s = schema_.Validate(); !s.ok()) return s;
  absl::flat_hash_set<std::vector<Rank>, KeyHash> seen;
  seen.reserve(num_rows());
  for (size_t i = 0; i < num_rows(); ++i) {
    std::span<const Rank> r = row(i);
    if (absl::Status s = CheckRanks(r, schema_.dimensions); !s.ok()) return s;
    if (measures_[i] < 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", i, " has measure ", measures_[i]));
    }
    if (!seen.insert(std::vector<Rank>(r.begin(), r.end())).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", i, " repeats an earlier dimension vector"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<CountTensor> BuildCountTensor(
    const Table& table, std::span<const std::string> aggregate_dims,
    std::string measure_name) {
  if (aggregate_dims.empty()) {
    return absl::InvalidArgumentError("count tensor needs at least one kept dimension");
  }
  Schema schema;
  schema.measure_name = std::move(measure_name);
  std::vector<int> source;
  for (const std::string& name : aggregate_dims) {
    auto it = std::find_if(table.dimensions().begin(), table.dimensions().end(),
                           [&](const Dimension& d) { return d.name == name; });
    if (it == table.dimensions().end()) {
      return absl::NotFoundError(
          absl::StrCat("schema error: unknown dimension '", name, "'"));
    }
    source.push_back(static_cast<int>(it - table.dimensions().begin()));
    schema.dimensions.push_back(*it);
  }
  if (absl::Status s = schema.Validate(); !s.ok()) return s;

  absl::flat_hash_map<std::vector<Rank>, size_t, KeyHash> index;
  std::vector<std::vector<Rank>> keys;
  std::vector<int64_t> counts;
  std::vector<Rank> key(source.size());
  for (size_t i = 0; i < table.num_rows(); ++i) {
    std::span<const Rank> r = table.row(i);
    for (size_t k = 0; k < source.size(); ++k) key[k] = r[source[k]];
    auto [it, inserted] = index.try_emplace(key, keys.size());
    if (inserted) {
      keys.push_back(key);
      counts.push_back(0);
    }
    ++counts[it->second];
  }

  CountTensor tensor(std::move(schema));
  tensor.Reserve(keys.size());
  for (size_t i = 0; i < keys.size(); ++i) {
    if (absl::Status s = tensor.AppendRow(keys[i], counts[i]); !s.ok()) return s;
  }
  return tensor;
}

absl::StatusOr<std::vector<CountTensor>> PartitionHorizontal(
    const CountTensor& tensor, int num_providers, uint64_t seed) {
  if (num_providers < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("need at least one provider, got ", num_providers));
  }
  std::vector<CountTensor> parts;
  if (num_providers == 1) {
    parts.push_back(tensor);
    return parts;
  }
  std::vector<size_t> order(tensor.num_rows());
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(seed);
  for (size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.UniformInt(i)]);
  }
  std::vector<std::vector<size_t>> assigned(num_providers);
  for (size_t i = 0; i < order.size(); ++i) {
    assigned[i % num_providers].push_back(order[i]);
  }
  for (auto& rows : assigned) {
    std::sort(rows.begin(), rows.end());
    CountTensor part(tensor.schema());
    part.Reserve(rows.size());
    for (size_t r : rows) {
      if (absl::Status s = part.AppendRow(tensor.row(r), tensor.measure(r));
          !s.ok()) {
        return s;
      }
    }
    parts.push_back(std::move(part));
  }
  return parts;
}

}  // namespace fedrange
