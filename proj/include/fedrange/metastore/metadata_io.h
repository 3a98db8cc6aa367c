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

#ifndef FEDRANGE_METASTORE_METADATA_IO_H_
#define FEDRANGE_METASTORE_METADATA_IO_H_

#include <filesystem>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fedrange/metastore/metadata.h"

namespace fedrange {

// Writes one file per cluster plus a global file:
//
//   <dir>/global.meta
//     fedrange-global 1
//     capacity <S>
//     n_min <N^min>
//     clusters <N> dims <D>
//     <cluster_id> <dim> <v_min> <v_max>       (N * D lines)
//
//   <dir>/cluster-NNNNNN.meta
//     cluster <cluster_id> capacity <S>
//     dim <d> entries <k>
//     <value> <rows at or above value>         (k lines, value ascending)
//     ...                                      (one block per dimension)
//
// Proportions are stored as integer numerators over S, so a round trip
// reproduces every proportion bit for bit.
absl::Status SaveMetadata(const std::filesystem::path& dir,
                          const ProviderMetadata& meta);

// All-or-nothing: any malformed file yields DataLoss naming the file, the
// line and, for cluster files, the cluster id.
absl::StatusOr<ProviderMetadata> LoadMetadata(const std::filesystem::path& dir);

}  // namespace fedrange

#endif  // FEDRANGE_METASTORE_METADATA_IO_H_
