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

#ifndef FEDRANGE_BENCH_DATAGEN_H_
#define FEDRANGE_BENCH_DATAGEN_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fedrange/datamodel/count_tensor.h"
#include "fedrange/federation/local_federation.h"

namespace fedrange {

struct ColumnSpec {
  std::string name;
  int domain = 2;
  // Zipf exponent over ranks 0..domain-1; 0 is uniform.
  double skew = 0.0;
  // When set, the column follows `source` instead of its own marginal: the
  // value is round(offset + slope * source_rank + N(0, noise_sd)), clamped
  // to the domain.
  int source = -1;
  double offset = 0.0;
  double slope = 0.0;
  double noise_sd = 0.0;
};

struct DataSpec {
  std::vector<ColumnSpec> columns;
  int64_t rows = 0;
  uint64_t seed = 1;
};

// Deterministic for a fixed spec. Dependent columns must refer to an
// earlier column.
absl::StatusOr<Table> GenerateTable(const DataSpec& spec);

// Six columns shaped like the Adult census extract: age (74 values, the
// first column, so clusters are cut along it), workclass (9), education
// (16), marital (7), occupation (15) and hours-per-week (100, driven by
// education so it is learnable from the quasi-identifiers).
DataSpec AdultLikeSpec(int64_t rows = 400'000, uint64_t seed = 1);

// GenerateTable(AdultLikeSpec(...)) aggregated into a count tensor over all
// six columns.
absl::StatusOr<CountTensor> AdultLikeTensor(int64_t rows = 400'000, uint64_t seed = 1);

// A CSV file with a header of column names. Columns whose values are all
// integers become integer dimensions spanning min..max; others become
// dimensions over their sorted distinct values.
absl::StatusOr<Table> ReadCsvTable(const std::string& path);

// The Adult-like tensor split across `num_providers` providers.
absl::StatusOr<std::unique_ptr<LocalFederation>> AdultLikeFederation(
    const FederationOptions& options, int num_providers = 4, int64_t rows = 400'000,
    uint64_t seed = 1);

}  // namespace fedrange

#endif  // FEDRANGE_BENCH_DATAGEN_H_
