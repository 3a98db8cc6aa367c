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

#include "fedrange/bench/datagen.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "fedrange/dp/random.h"

namespace fedrange {
namespace {

std::vector<double> ZipfCdf(int domain, double skew) {
  std::vector<double> cdf(domain);
  double total = 0.0;
  for (int i = 0; i < domain; ++i) {
    total += std::pow(static_cast<double>(i + 1), -skew);
    cdf[i] = total;
  }
  for (double& c : cdf) c /= total;
  return cdf;
}

}  // namespace

absl::StatusOr<Table> GenerateTable(const DataSpec& spec) {
  if (spec.rows < 0) return absl::InvalidArgumentError("row count must be non-negative");
  if (spec.columns.empty()) return absl::InvalidArgumentError("no columns");
  std::vector<Dimension> dims;
  std::vector<std::vector<double>> cdfs;
  for (size_t c = 0; c < spec.columns.size(); ++c) {
    const ColumnSpec& col = spec.columns[c];
    if (col.domain < 1) {
      return absl::InvalidArgumentError(absl::StrCat("column ", col.name, " has no values"));
    }
    if (col.skew < 0) return absl::InvalidArgumentError("skew must be non-negative");
    if (col.source >= static_cast<int>(c)) {
      return absl::InvalidArgumentError(
          absl::StrCat("column ", col.name, " must depend on an earlier column"));
    }
    dims.push_back(IntegerDimension(col.name, 0, col.domain - 1));
    cdfs.push_back(ZipfCdf(col.domain, col.skew));
  }
  Table table(dims);
  table.Reserve(static_cast<size_t>(spec.rows));
  Rng rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Rank> row(spec.columns.size());
  for (int64_t r = 0; r < spec.rows; ++r) {
    for (size_t c = 0; c < spec.columns.size(); ++c) {
      const ColumnSpec& col = spec.columns[c];
      if (col.source >= 0) {
        const double v = col.offset + col.slope * row[col.source] +
                         col.noise_sd * normal(rng.engine());
        row[c] = static_cast<Rank>(std::clamp(std::lround(v), 0L, col.domain - 1L));
      } else {
        const auto it =
            std::upper_bound(cdfs[c].begin(), cdfs[c].end(), rng.Uniform01());
        row[c] = static_cast<Rank>(
            std::min<ptrdiff_t>(it - cdfs[c].begin(), col.domain - 1));
      }
    }
    if (absl::Status s = table.AppendRow(row); !s.ok()) return s;
  }
  return table;
}

DataSpec AdultLikeSpec(int64_t rows, uint64_t seed) {
  DataSpec spec;
  spec.rows = rows;
  spec.seed = seed;
  spec.columns = {
      {.name = "age", .domain = 74, .skew = 0.3},
      {.name = "workclass", .domain = 9, .skew = 1.2},
      {.name = "education", .domain = 16, .skew = 0.5},
      {.name = "marital", .domain = 7, .skew = 0.8},
      {.name = "occupation", .domain = 15, .skew = 0.4},
      {.name = "hours",
       .domain = 100,
       .source = 2,
       .offset = 22.0,
       .slope = 3.5,
       .noise_sd = 4.0},
  };
  return spec;
}

absl::StatusOr<CountTensor> AdultLikeTensor(int64_t rows, uint64_t seed) {
  absl::StatusOr<Table> table = GenerateTable(AdultLikeSpec(rows, seed));
  if (!table.ok()) return table.status();
  std::vector<std::string> names;
  for (const Dimension& d : table->dimensions()) names.push_back(d.name);
  return BuildCountTensor(*table, names);
}

absl::StatusOr<Table> ReadCsvTable(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::string line;
  if (!std::getline(in, line)) return absl::InvalidArgumentError("empty CSV file");
  std::vector<std::string> names;
  for (absl::string_view n : absl::StrSplit(line, ',')) {
    names.emplace_back(absl::StripAsciiWhitespace(n));
  }
  std::vector<std::vector<std::string>> cells;
  int64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    std::vector<std::string> row;
    for (absl::string_view v : absl::StrSplit(line, ',')) {
      row.emplace_back(absl::StripAsciiWhitespace(v));
    }
    if (row.size() != names.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ":", line_no, ": expected ", names.size(), " fields"));
    }
    cells.push_back(std::move(row));
  }
  std::vector<Dimension> dims;
  // Per column: the integer offset, or a value-to-rank map for text columns.
  std::vector<std::optional<int64_t>> offsets;
  std::vector<std::map<std::string, Rank>> ranks(names.size());
  for (size_t c = 0; c < names.size(); ++c) {
    bool integral = !cells.empty();
    int64_t lo = 0, hi = 0;
    std::set<std::string> distinct;
    for (size_t r = 0; r < cells.size(); ++r) {
      distinct.insert(cells[r][c]);
      int64_t v = 0;
      if (integral && absl::SimpleAtoi(cells[r][c], &v)) {
        lo = r == 0 ? v : std::min(lo, v);
        hi = r == 0 ? v : std::max(hi, v);
      } else {
        integral = false;
      }
    }
    if (integral && hi - lo < 1'000'000) {
      dims.push_back(IntegerDimension(names[c], lo, hi));
      offsets.push_back(lo);
    } else {
      dims.push_back(Dimension{names[c], {distinct.begin(), distinct.end()}});
      offsets.push_back(std::nullopt);
      for (size_t i = 0; i < dims.back().domain.size(); ++i) {
        ranks[c][dims.back().domain[i]] = static_cast<Rank>(i);
      }
    }
  }
  Table table(dims);
  table.Reserve(cells.size());
  std::vector<Rank> row(dims.size());
  for (const auto& values : cells) {
    for (size_t c = 0; c < dims.size(); ++c) {
      if (offsets[c].has_value()) {
        int64_t v = 0;
        (void)absl::SimpleAtoi(values[c], &v);
        row[c] = static_cast<Rank>(v - *offsets[c]);
      } else {
        row[c] = ranks[c].at(values[c]);
      }
    }
    if (absl::Status s = table.AppendRow(row); !s.ok()) return s;
  }
  return table;
}

absl::StatusOr<std::unique_ptr<LocalFederation>> AdultLikeFederation(
    const FederationOptions& options, int num_providers, int64_t rows, uint64_t seed) {
  absl::StatusOr<CountTensor> tensor = AdultLikeTensor(rows, seed);
  if (!tensor.ok()) return tensor.status();
  absl::StatusOr<std::vector<CountTensor>> parts =
      PartitionHorizontal(*tensor, num_providers, MixSeed(seed, 0x9a));
  if (!parts.ok()) return parts.status();
  return LocalFederation::Create(*parts, options);
}

}  // namespace fedrange
