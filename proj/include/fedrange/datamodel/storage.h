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

#ifndef FEDRANGE_DATAMODEL_STORAGE_H_
#define FEDRANGE_DATAMODEL_STORAGE_H_

#include <filesystem>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fedrange/datamodel/cluster.h"
#include "fedrange/datamodel/schema.h"

namespace fedrange {

// A provider's data as laid out on disk:
//
//   <dir>/manifest                 schema, capacity, cluster count, encodings
//   <dir>/clusters/cluster-NNNNNN.csv
//
// Manifest (line oriented, whitespace separated):
//
//   fedrange-provider 1
//   measure <name>
//   capacity <S>
//   clusters <N>
//   row-format <dim0>,<dim1>,...,<measure>
//   dimension <name> <domain size>
//   <value of rank 0>
//   <value of rank 1>
//   ...                            (one dimension block per dimension)
//
// Each cluster file holds one row per line: the dimension ranks in
// row-format order followed by the measure, comma separated.
struct ProviderData {
  Schema schema;
  int capacity = 0;
  std::vector<Cluster> clusters;
};

absl::Status WriteProviderData(const std::filesystem::path& dir,
                               const ProviderData& data);

absl::StatusOr<ProviderData> ReadProviderData(const std::filesystem::path& dir);

}  // namespace fedrange

#endif  // FEDRANGE_DATAMODEL_STORAGE_H_
