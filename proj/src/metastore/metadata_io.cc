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

#include "fedrange/metastore/metadata_io.h"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace fedrange {
namespace {

constexpr char kGlobalMagic[] = "fedrange-global";
constexpr int kVersion = 1;

std::filesystem::path GlobalPath(const std::filesystem::path& dir) {
  return dir / "global.meta";
}

std::filesystem::path ClusterMetaPath(const std::filesystem::path& dir, int id) {
  return dir / absl::StrFormat("cluster-%06d.meta", id);
}

// Line reader that remembers where it is for error messages.
class LineReader {
 public:
  LineReader(std::filesystem::path path, std::string context)
      : path_(std::move(path)), context_(std::move(context)), in_(path_) {}

  bool is_open() const { return in_.is_open(); }

  // Reads the next line into a stream; fails at end of file.
  absl::StatusOr<std::istringstream> Next() {
    std::string text;
    if (!std::getline(in_, text)) return Error("unexpected end of file");
    ++line_;
    return std::istringstream(text);
  }

  absl::Status Error(absl::string_view what) const {
    return absl::DataLossError(absl::StrCat(path_.string(), ":", line_, ": ",
                                            context_, context_.empty() ? "" : ": ",
                                            what));
  }

  bool AtEnd() {
    std::string text;
    while (std::getline(in_, text)) {
      ++line_;
      if (!text.empty()) return false;
    }
    return true;
  }

 private:
  std::filesystem::path path_;
  std::string context_;
  std::ifstream in_;
  int line_ = 0;
};

// Parses "<keyword> <int>" pairs from one line, in order.
template <typename... Ints>
absl::Status ReadKeyed(LineReader& reader,
                       std::initializer_list<absl::string_view> keywords,
                       Ints&... out) {
  absl::StatusOr<std::istringstream> line = reader.Next();
  if (!line.ok()) return line.status();
  auto it = keywords.begin();
  bool ok = true;
  auto read_one = [&](auto& target) {
    std::string key;
    if (!ok || !(*line >> key >> target) || key != *it) ok = false;
    ++it;
  };
  (read_one(out), ...);
  std::string trailing;
  if (!ok || (*line >> trailing)) {
    return reader.Error(absl::StrCat("expected '", *keywords.begin(), "' header"));
  }
  return absl::OkStatus();
}

absl::StatusOr<ProportionTable> LoadClusterTable(const std::filesystem::path& dir,
                                                 int id, int capacity, int dims) {
  LineReader reader(ClusterMetaPath(dir, id), absl::StrCat("cluster ", id));
  if (!reader.is_open()) return reader.Error("missing file");
  int file_id = -1;
  int file_capacity = -1;
  if (absl::Status s =
          ReadKeyed(reader, {"cluster", "capacity"}, file_id, file_capacity);
      !s.ok()) {
    return s;
  }
  if (file_id != id) return reader.Error("cluster id mismatch");
  if (file_capacity != capacity) return reader.Error("capacity mismatch");

  std::vector<std::vector<ProportionTable::Entry>> per_dim(dims);
  for (int d = 0; d < dims; ++d) {
    int file_dim = -1;
    int count = -1;
    if (absl::Status s = ReadKeyed(reader, {"dim", "entries"}, file_dim, count);
        !s.ok()) {
      return s;
    }
    if (file_dim != d || count < 1 || count > capacity) {
      return reader.Error("bad dimension block header");
    }
    for (int k = 0; k < count; ++k) {
      absl::StatusOr<std::istringstream> line = reader.Next();
      if (!line.ok()) return line.status();
      ProportionTable::Entry e;
      std::string trailing;
      if (!(*line >> e.value >> e.rows_at_or_above) || (*line >> trailing)) {
        return reader.Error("expected '<value> <count>'");
      }
      if (e.rows_at_or_above < 1 || e.rows_at_or_above > capacity) {
        return reader.Error("count outside [1, S]");
      }
      if (!per_dim[d].empty() &&
          (e.value <= per_dim[d].back().value ||
           e.rows_at_or_above >= per_dim[d].back().rows_at_or_above)) {
        return reader.Error("entries must be strictly ordered");
      }
      per_dim[d].push_back(e);
    }
  }
  if (!reader.AtEnd()) return reader.Error("trailing content");
  return ProportionTable(id, capacity, std::move(per_dim));
}

}  // namespace

absl::Status SaveMetadata(const std::filesystem::path& dir,
                          const ProviderMetadata& meta) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot create ", dir.string(), ": ", ec.message()));
  }
  const int dims = meta.tables.empty() ? 0 : meta.tables.front().num_dimensions();
  std::ofstream global(GlobalPath(dir));
  if (!global) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot write ", GlobalPath(dir).string()));
  }
  global << kGlobalMagic << " " << kVersion << "\n"
         << "capacity " << meta.global.capacity << "\n"
         << "n_min " << meta.global.n_min << "\n"
         << "clusters " << meta.global.clusters.size() << " dims " << dims << "\n";
  for (size_t id = 0; id < meta.global.clusters.size(); ++id) {
    const ClusterBounds& b = meta.global.clusters[id];
    for (int d = 0; d < dims; ++d) {
      global << id << " " << d << " " << b.per_dimension[d].lo << " "
             << b.per_dimension[d].hi << "\n";
    }
  }
  if (!global) return absl::DataLossError("global metadata write failed");

  for (const ProportionTable& table : meta.tables) {
    std::ofstream out(ClusterMetaPath(dir, table.cluster_id()));
    if (!out) {
      return absl::PermissionDeniedError(absl::StrCat(
          "cannot write ", ClusterMetaPath(dir, table.cluster_id()).string()));
    }
    out << "cluster " << table.cluster_id() << " capacity " << table.capacity()
        << "\n";
    for (int d = 0; d < table.num_dimensions(); ++d) {
      out << "dim " << d << " entries " << table.entries(d).size() << "\n";
      for (const ProportionTable::Entry& e : table.entries(d)) {
        out << e.value << " " << e.rows_at_or_above << "\n";
      }
    }
    if (!out) return absl::DataLossError("cluster metadata write failed");
  }
  return absl::OkStatus();
}

absl::StatusOr<ProviderMetadata> LoadMetadata(const std::filesystem::path& dir) {
  LineReader reader(GlobalPath(dir), "");
  if (!reader.is_open()) {
    return absl::NotFoundError(
        absl::StrCat("no metadata at ", GlobalPath(dir).string()));
  }
  ProviderMetadata meta;
  int version = 0;
  int num_clusters = -1;
  int dims = -1;
  std::string magic;
  {
    absl::StatusOr<std::istringstream> line = reader.Next();
    if (!line.ok()) return line.status();
    if (!(*line >> magic >> version) || magic != kGlobalMagic ||
        version != kVersion) {
      return reader.Error("not a metadata file");
    }
  }
  if (absl::Status s = ReadKeyed(reader, {"capacity"}, meta.global.capacity);
      !s.ok()) {
    return s;
  }
  if (absl::Status s = ReadKeyed(reader, {"n_min"}, meta.global.n_min); !s.ok()) {
    return s;
  }
  if (absl::Status s = ReadKeyed(reader, {"clusters", "dims"}, num_clusters, dims);
      !s.ok()) {
    return s;
  }
  if (meta.global.capacity < 1 || meta.global.n_min < 1 || num_clusters < 0 ||
      dims < 0) {
    return reader.Error("invalid header values");
  }
  meta.global.clusters.resize(num_clusters);
  for (int id = 0; id < num_clusters; ++id) {
    meta.global.clusters[id].per_dimension.resize(dims);
    for (int d = 0; d < dims; ++d) {
      absl::StatusOr<std::istringstream> line = reader.Next();
      if (!line.ok()) return line.status();
      int file_id, file_dim;
      Interval bounds;
      std::string trailing;
      if (!(*line >> file_id >> file_dim >> bounds.lo >> bounds.hi) ||
          (*line >> trailing) || file_id != id || file_dim != d ||
          bounds.lo > bounds.hi) {
        return reader.Error(absl::StrCat("cluster ", id, ": bad bounds line"));
      }
      meta.global.clusters[id].per_dimension[d] = bounds;
    }
  }
  if (!reader.AtEnd()) return reader.Error("trailing content");

  meta.tables.reserve(num_clusters);
  for (int id = 0; id < num_clusters; ++id) {
    absl::StatusOr<ProportionTable> table =
        LoadClusterTable(dir, id, meta.global.capacity, dims);
    if (!table.ok()) return table.status();
    const ClusterBounds& b = meta.global.clusters[id];
    for (int d = 0; d < dims; ++d) {
      std::span<const ProportionTable::Entry> e = table->entries(d);
      if (e.front().value != b.per_dimension[d].lo ||
          e.back().value != b.per_dimension[d].hi) {
        return absl::DataLossError(absl::StrCat(
            "cluster ", id, ": proportion table disagrees with global bounds"));
      }
    }
    meta.tables.push_back(*std::move(table));
  }
  return meta;
}

}  // namespace fedrange
