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

#ifndef FEDRANGE_DATAMODEL_COUNT_TENSOR_H_
#define FEDRANGE_DATAMODEL_COUNT_TENSOR_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fedrange/datamodel/schema.h"

namespace fedrange {

// Raw tabular data, one row per individual, values already rank-encoded.
class Table {
 public:
  Table() = default;
  explicit Table(std::vector<Dimension> dimensions)
      : dimensions_(std::move(dimensions)) {}

  const std::vector<Dimension>& dimensions() const { return dimensions_; }
  int num_dimensions() const { return static_cast<int>(dimensions_.size()); }
  size_t num_rows() const {
    return dimensions_.empty() ? 0 : cells_.size() / dimensions_.size();
  }
  std::span<const Rank> row(size_t i) const {
    return {cells_.data() + i * dimensions_.size(), dimensions_.size()};
  }
  absl::Status AppendRow(std::span<const Rank> values);
  void Reserve(size_t rows) { cells_.reserve(rows * dimensions_.size()); }
  const std::vector<Rank>& cells() const { return cells_; }

 private:
  std::vector<Dimension> dimensions_;
  std::vector<Rank> cells_;
};

// A count tensor: distinct dimension-value vectors with a Measure column
// holding how many individuals share each vector.
class CountTensor {
 public:
  CountTensor() = default;
  explicit CountTensor(Schema schema) : schema_(std::move(schema)) {}

  const Schema& schema() const { return schema_; }
  int num_dimensions() const { return schema_.num_dimensions(); }
  size_t num_rows() const { return measures_.size(); }
  std::span<const Rank> row(size_t i) const {
    const size_t d = schema_.dimensions.size();
    return {cells_.data() + i * d, d};
  }
  int64_t measure(size_t i) const { return measures_[i]; }
  int64_t TotalMeasure() const;

  // Appends without the uniqueness check; see Validate().
  absl::Status AppendRow(std::span<const Rank> values, int64_t measure);
  void Reserve(size_t rows);

  // Checks ranks against domains, measures >= 1 and row uniqueness.
  absl::Status Validate() const;

 private:
  Schema schema_;
  std::vector<Rank> cells_;
  std::vector<int64_t> measures_;
};

// Groups `table` by the kept dimensions `aggregate_dims` (the D^a of the
// tensor) and counts the rows per group into the measure column. Output rows
// keep first-appearance order.
absl::StatusOr<CountTensor> BuildCountTensor(
    const Table& table, std::span<const std::string> aggregate_dims,
    std::string measure_name = "Measure");

// Splits the tensor's rows across `num_providers` providers. A seeded shuffle
// deals rows round-robin, so partition sizes differ by at most one; each part
// keeps the input's relative row order. With one provider the input is
// returned unchanged.
absl::StatusOr<std::vector<CountTensor>> PartitionHorizontal(
    const CountTensor& tensor, int num_providers, uint64_t seed);

}  // namespace fedrange

#endif  // FEDRANGE_DATAMODEL_COUNT_TENSOR_H_
