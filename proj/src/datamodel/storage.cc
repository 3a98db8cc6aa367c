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

#include "fedrange/datamodel/storage.h"

#include <fstream>
#include <sstream>
#include <string>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace fedrange {
namespace {

constexpr char kMagic[] = "fedrange-provider";
constexpr int kVersion = 1;

std::filesystem::path ClusterPath(const std::filesystem::path& dir, int id) {
  return dir / "clusters" / absl::StrFormat("cluster-%06d.csv", id);
}

absl::Status ParseError(const std::filesystem::path& file, int line,
                        absl::string_view what) {
  return absl::DataLossError(
      absl::StrCat(file.string(), ":", line, ": ", what));
}

// Reads "<keyword> <value>" and returns the value.
absl::StatusOr<std::string> ExpectKeyword(std::istream& in,
                                          const std::filesystem::path& file,
                                          int& line, absl::string_view keyword) {
  std::string text;
  if (!std::getline(in, text)) return ParseError(file, line + 1, "unexpected end of file");
  ++line;
  std::pair<std::string, std::string> kv =
      absl::StrSplit(text, absl::MaxSplits(' ', 1));
  if (kv.first != keyword) {
    return ParseError(file, line, absl::StrCat("expected '", keyword, "'"));
  }
  return kv.second;
}

absl::StatusOr<int> ExpectInt(std::istream& in, const std::filesystem::path& file,
                              int& line, absl::string_view keyword) {
  absl::StatusOr<std::string> v = ExpectKeyword(in, file, line, keyword);
  if (!v.ok()) return v.status();
  int out;
  if (!absl::SimpleAtoi(*v, &out)) {
    return ParseError(file, line, absl::StrCat("bad integer for ", keyword));
  }
  return out;
}

}  // namespace

absl::Status WriteProviderData(const std::filesystem::path& dir,
                               const ProviderData& data) {
  if (absl::Status s = data.schema.Validate(); !s.ok()) return s;
  std::error_code ec;
  std::filesystem::create_directories(dir / "clusters", ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot create ", dir.string(), ": ", ec.message()));
  }
  std::ofstream manifest(dir / "manifest");
  if (!manifest) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot write ", (dir / "manifest").string()));
  }
  std::vector<std::string> fields;
  for (const Dimension& d : data.schema.dimensions) fields.push_back(d.name);
  fields.push_back(data.schema.measure_name);
  manifest << kMagic << " " << kVersion << "\n"
           << "measure " << data.schema.measure_name << "\n"
           << "capacity " << data.capacity << "\n"
           << "clusters " << data.clusters.size() << "\n"
           << "row-format " << absl::StrJoin(fields, ",") << "\n";
  for (const Dimension& d : data.schema.dimensions) {
    manifest << "dimension " << d.name << " " << d.size() << "\n";
    for (const std::string& v : d.domain) manifest << v << "\n";
  }
  if (!manifest) return absl::DataLossError("manifest write failed");

  for (const Cluster& c : data.clusters) {
    std::ofstream out(ClusterPath(dir, c.id()));
    if (!out) {
      return absl::PermissionDeniedError(
          absl::StrCat("cannot write ", ClusterPath(dir, c.id()).string()));
    }
    std::string line;
    for (size_t i = 0; i < c.size(); ++i) {
      line.clear();
      for (Rank v : c.row(i)) absl::StrAppend(&line, v, ",");
      absl::StrAppend(&line, c.measure(i), "\n");
      out << line;
    }
    if (!out) return absl::DataLossError("cluster write failed");
  }
  return absl::OkStatus();
}

absl::StatusOr<ProviderData> ReadProviderData(const std::filesystem::path& dir) {
  const std::filesystem::path path = dir / "manifest";
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("no manifest at ", path.string()));
  int line = 0;
  absl::StatusOr<int> version = ExpectInt(in, path, line, kMagic);
  if (!version.ok()) return version.status();
  if (*version != kVersion) return ParseError(path, line, "unsupported version");

  ProviderData data;
  absl::StatusOr<std::string> measure = ExpectKeyword(in, path, line, "measure");
  if (!measure.ok()) return measure.status();
  data.schema.measure_name = *measure;
  absl::StatusOr<int> capacity = ExpectInt(in, path, line, "capacity");
  if (!capacity.ok()) return capacity.status();
  data.capacity = *capacity;
  absl::StatusOr<int> num_clusters = ExpectInt(in, path, line, "clusters");
  if (!num_clusters.ok()) return num_clusters.status();
  absl::StatusOr<std::string> format = ExpectKeyword(in, path, line, "row-format");
  if (!format.ok()) return format.status();
  std::vector<std::string> fields = absl::StrSplit(*format, ',');
  if (fields.size() < 2 || fields.back() != data.schema.measure_name) {
    return ParseError(path, line, "row-format must end with the measure");
  }
  for (size_t i = 0; i + 1 < fields.size(); ++i) {
    absl::StatusOr<std::string> header = ExpectKeyword(in, path, line, "dimension");
    if (!header.ok()) return header.status();
    std::pair<std::string, std::string> parts =
        absl::StrSplit(*header, absl::MaxSplits(' ', 1));
    int size;
    if (parts.first != fields[i] || !absl::SimpleAtoi(parts.second, &size) ||
        size < 1) {
      return ParseError(path, line, "dimension block does not match row-format");
    }
    Dimension d;
    d.name = parts.first;
    std::string value;
    for (int k = 0; k < size; ++k) {
      if (!std::getline(in, value)) {
        return ParseError(path, line + 1, "truncated dimension domain");
      }
      ++line;
      d.domain.push_back(value);
    }
    data.schema.dimensions.push_back(std::move(d));
  }
  if (absl::Status s = data.schema.Validate(); !s.ok()) return s;
  if (data.capacity < 1) return ParseError(path, 3, "capacity must be positive");

  const int dims = data.schema.num_dimensions();
  std::vector<Rank> row(dims);
  for (int id = 0; id < *num_clusters; ++id) {
    const std::filesystem::path cpath = ClusterPath(dir, id);
    std::ifstream cin(cpath);
    if (!cin) return absl::NotFoundError(absl::StrCat("missing ", cpath.string()));
    Cluster cluster(id, data.capacity, dims);
    std::string text;
    int cline = 0;
    while (std::getline(cin, text)) {
      ++cline;
      if (text.empty()) continue;
      std::vector<absl::string_view> cells = absl::StrSplit(text, ',');
      if (static_cast<int>(cells.size()) != dims + 1) {
        return ParseError(cpath, cline, "wrong number of fields");
      }
      for (int d = 0; d < dims; ++d) {
        if (!absl::SimpleAtoi(cells[d], &row[d]) || row[d] < 0 ||
            row[d] >= data.schema.dimensions[d].size()) {
          return ParseError(cpath, cline, "bad rank");
        }
      }
      int64_t measure;
      if (!absl::SimpleAtoi(cells[dims], &measure) || measure < 1) {
        return ParseError(cpath, cline, "bad measure");
      }
      if (absl::Status s = cluster.AppendRow(row, measure); !s.ok()) {
        return ParseError(cpath, cline, s.message());
      }
    }
    data.clusters.push_back(std::move(cluster));
  }
  return data;
}

}  // namespace fedrange
