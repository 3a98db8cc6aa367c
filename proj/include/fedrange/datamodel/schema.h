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

#ifndef FEDRANGE_DATAMODEL_SCHEMA_H_
#define FEDRANGE_DATAMODEL_SCHEMA_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace fedrange {

// Dimension values are stored as their rank in the dimension's ordered
// domain. All range logic works on ranks.
using Rank = int32_t;

// A discrete, totally ordered dimension. `domain` lists the original values
// in increasing order; a value's rank is its index.
struct Dimension {
  std::string name;
  std::vector<std::string> domain;

  int size() const { return static_cast<int>(domain.size()); }
  absl::StatusOr<Rank> Encode(absl::string_view value) const;
  absl::Status Validate() const;

  friend bool operator==(const Dimension&, const Dimension&) = default;
};

// A dimension over the integers lo..hi inclusive.
Dimension IntegerDimension(std::string name, int64_t lo, int64_t hi);

struct Schema {
  std::vector<Dimension> dimensions;
  std::string measure_name = "Measure";

  int num_dimensions() const { return static_cast<int>(dimensions.size()); }
  absl::StatusOr<int> IndexOf(absl::string_view name) const;
  absl::Status Validate() const;

  friend bool operator==(const Schema&, const Schema&) = default;
};

}  // namespace fedrange

#endif  // FEDRANGE_DATAMODEL_SCHEMA_H_
