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

#include "fedrange/datamodel/schema.h"

#include <algorithm>

#include "absl/container/flat_hash_set.h"
#include "absl/strings/str_cat.h"

namespace fedrange {

absl::StatusOr<Rank> Dimension::Encode(absl::string_view value) const {
  for (size_t i = 0; i < domain.size(); ++i) {
    if (domain[i] == value) return static_cast<Rank>(i);
  }
  return absl::NotFoundError(
      absl::StrCat("value '", std::string(value), "' not in domain of dimension ", name));
}

absl::Status Dimension::Validate() const {
  if (name.empty()) return absl::InvalidArgumentError("dimension without name");
  if (domain.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("dimension ", name, " has an empty domain"));
  }
  absl::flat_hash_set<absl::string_view> seen;
  for (const std::string& v : domain) {
    if (!seen.insert(v).second) {
      return absl::InvalidArgumentError(absl::StrCat(
          "dimension ", name, " lists value '", v, "' more than once"));
    }
  }
  return absl::OkStatus();
}

Dimension IntegerDimension(std::string name, int64_t lo, int64_t hi) {
  Dimension d;
  d.name = std::move(name);
  for (int64_t v = lo; v <= hi; ++v) d.domain.push_back(absl::StrCat(v));
  return d;
}

absl::StatusOr<int> Schema::IndexOf(absl::string_view name) const {
  for (size_t i = 0; i < dimensions.size(); ++i) {
    if (dimensions[i].name == name) return static_cast<int>(i);
  }
  return absl::NotFoundError(absl::StrCat("unknown dimension '", std::string(name), "'"));
}

absl::Status Schema::Validate() const {
  absl::flat_hash_set<absl::string_view> names;
  for (const Dimension& d : dimensions) {
    if (absl::Status s = d.Validate(); !s.ok()) return s;
    if (!names.insert(d.name).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate dimension name '", d.name, "'"));
    }
  }
  if (measure_name.empty()) {
    return absl::InvalidArgumentError("measure column needs a name");
  }
  if (names.contains(measure_name)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "measure name '", measure_name, "' collides with a dimension"));
  }
  return absl::OkStatus();
}

}  // namespace fedrange
