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

#ifndef FEDRANGE_BENCH_REPORT_H_
#define FEDRANGE_BENCH_REPORT_H_

#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "fedrange/bench/attack.h"
#include "fedrange/bench/smc_compare.h"
#include "fedrange/bench/workload.h"

namespace fedrange {

// A table of string cells plus key/value summary lines.
struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, std::string>> summary;
};

enum class ReportFormat { kCsv, kTable };

absl::StatusOr<ReportFormat> ParseReportFormat(absl::string_view name);

// Column sets of the three report kinds.
const std::vector<std::string>& WorkloadColumns();
const std::vector<std::string>& SmcColumns();
const std::vector<std::string>& AttackColumns();

// Shortest decimal form that parses back to the same double; "" for NaN.
std::string FormatNumber(double v);

Report WorkloadReport(const MetricsReport& metrics);
Report SmcReport(const std::vector<SmcNoiseRow>& rows);

struct AttackCell {
  std::string composition;
  double xi = 0.0;
  double psi = 0.0;
  AttackResult result;
};
Report AttackReport(const std::vector<AttackCell>& cells);

// CSV: header, one line per row, then "# key=value" summary lines. Table:
// space-aligned columns followed by the same summary lines. A report without
// rows is written as its header alone.
std::string RenderReport(const Report& report, ReportFormat format);
absl::Status EmitReport(const Report& report, const std::string& path, ReportFormat format);

// Inverse of RenderReport(..., kCsv).
absl::StatusOr<Report> ParseCsvReport(absl::string_view text);

}  // namespace fedrange

#endif  // FEDRANGE_BENCH_REPORT_H_
