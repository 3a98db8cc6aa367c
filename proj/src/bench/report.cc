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

#include "fedrange/bench/report.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace fedrange {
namespace {

std::string Num(int64_t v) { return absl::StrCat(v); }

std::string OptNum(const std::optional<double>& v) {
  return v.has_value() ? FormatNumber(*v) : "";
}

std::string CsvCell(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void AppendCsvLine(const std::vector<std::string>& cells, std::string& out) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += ',';
    out += CsvCell(cells[i]);
  }
  out += '\n';
}

absl::StatusOr<std::vector<std::string>> ParseCsvLine(absl::string_view line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cells.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cells.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back();
    } else {
      cells.back() += c;
    }
  }
  if (quoted) return absl::InvalidArgumentError("unterminated quoted cell");
  return cells;
}

void AppendSummary(const Report& report, std::string& out) {
  for (const auto& [key, value] : report.summary) absl::StrAppend(&out, "# ", key, "=", value, "\n");
}

}  // namespace

absl::StatusOr<ReportFormat> ParseReportFormat(absl::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "table") return ReportFormat::kTable;
  return absl::InvalidArgumentError(absl::StrCat("unknown report format: ", name));
}

const std::vector<std::string>& WorkloadColumns() {
  static const auto* columns = new std::vector<std::string>{
      "index",        "mode",         "query",          "dims",          "exact",
      "answer",       "refusal",      "relative_error", "federated_ms",  "full_scan_ms",
      "pruned_ms",    "speedup_full", "speedup_pruned", "cluster_reads", "total_clusters",
      "approximated", "epsilon",      "delta"};
  return *columns;
}

const std::vector<std::string>& SmcColumns() {
  static const auto* columns = new std::vector<std::string>{
      "index",      "mode",       "query",         "runs",
      "refused",    "noise_min",  "noise_max",     "noise_mean",
      "noise_var",  "predicted_var", "mean_ms"};
  return *columns;
}

const std::vector<std::string>& AttackColumns() {
  static const auto* columns = new std::vector<std::string>{
      "composition", "xi",          "psi",     "queries",  "answered", "refused",
      "epsilon_per_query", "delta_per_query", "predictions", "correct", "accuracy",
      "random_guess"};
  return *columns;
}

std::string FormatNumber(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

Report WorkloadReport(const MetricsReport& metrics) {
  Report report;
  report.columns = WorkloadColumns();
  for (const QueryRecord& r : metrics.records) {
    const bool answered = r.answer.has_value() && r.federated_ms > 0;
    report.rows.push_back({
        Num(r.index),
        r.mode,
        r.query,
        Num(r.num_dims),
        FormatNumber(r.exact),
        OptNum(r.answer),
        r.refusal,
        OptNum(r.relative_error),
        FormatNumber(r.federated_ms),
        FormatNumber(r.full_scan_ms),
        FormatNumber(r.pruned_ms),
        answered ? FormatNumber(r.full_scan_ms / r.federated_ms) : "",
        answered ? FormatNumber(r.pruned_ms / r.federated_ms) : "",
        r.cluster_reads >= 0 ? Num(r.cluster_reads) : "",
        Num(r.total_clusters),
        r.approximated.has_value() ? (*r.approximated ? "1" : "0") : "",
        FormatNumber(r.budget.epsilon),
        FormatNumber(r.budget.delta),
    });
  }
  const Budget spent = metrics.budget_consumed();
  report.summary = {
      {"queries", Num(static_cast<int64_t>(metrics.records.size()))},
      {"answered", Num(metrics.answered())},
      {"refused", Num(metrics.refused())},
      {"undefined_error", Num(metrics.undefined_errors())},
      {"mean_relative_error", FormatNumber(metrics.mean_relative_error())},
      {"median_relative_error", FormatNumber(metrics.percentile_relative_error(0.5))},
      {"p90_relative_error", FormatNumber(metrics.percentile_relative_error(0.9))},
      {"mean_speedup_full", FormatNumber(metrics.mean_speedup_full_scan())},
      {"mean_speedup_pruned", FormatNumber(metrics.mean_speedup_pruned())},
      {"mean_scanned_fraction", FormatNumber(metrics.mean_scanned_fraction())},
      {"epsilon_spent", FormatNumber(spent.epsilon)},
      {"delta_spent", FormatNumber(spent.delta)},
  };
  return report;
}

Report SmcReport(const std::vector<SmcNoiseRow>& rows) {
  Report report;
  report.columns = SmcColumns();
  double plain_ms = 0.0, smc_ms = 0.0;
  int plain_n = 0, smc_n = 0;
  for (const SmcNoiseRow& r : rows) {
    report.rows.push_back({Num(r.query_index), r.mode, r.query, Num(r.runs), Num(r.refused),
                           FormatNumber(r.noise_min), FormatNumber(r.noise_max),
                           FormatNumber(r.noise_mean), FormatNumber(r.noise_variance),
                           FormatNumber(r.predicted_variance), FormatNumber(r.mean_ms)});
    if (r.mode == "smc") {
      smc_ms += r.mean_ms;
      ++smc_n;
    } else {
      plain_ms += r.mean_ms;
      ++plain_n;
    }
  }
  if (plain_n > 0 && smc_n > 0) {
    report.summary = {{"mean_plain_ms", FormatNumber(plain_ms / plain_n)},
                      {"mean_smc_ms", FormatNumber(smc_ms / smc_n)}};
  }
  return report;
}

Report AttackReport(const std::vector<AttackCell>& cells) {
  Report report;
  report.columns = AttackColumns();
  for (const AttackCell& c : cells) {
    const AttackResult& r = c.result;
    report.rows.push_back({c.composition, FormatNumber(c.xi), FormatNumber(c.psi),
                           Num(r.num_queries), Num(r.answered), Num(r.refused),
                           FormatNumber(r.per_query.epsilon), FormatNumber(r.per_query.delta),
                           Num(r.predictions), Num(r.correct), FormatNumber(r.accuracy),
                           FormatNumber(r.random_guess)});
  }
  return report;
}

std::string RenderReport(const Report& report, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::kCsv) {
    AppendCsvLine(report.columns, out);
    if (report.rows.empty()) return out;
    for (const auto& row : report.rows) AppendCsvLine(row, out);
    AppendSummary(report, out);
    return out;
  }
  std::vector<size_t> width(report.columns.size());
  for (size_t c = 0; c < width.size(); ++c) width[c] = report.columns[c].size();
  for (const auto& row : report.rows) {
    for (size_t c = 0; c < width.size() && c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (size_t c = 0; c < width.size(); ++c) {
      const std::string cell = c < cells.size() ? cells[c] : "";
      absl::StrAppend(&out, c > 0 ? "  " : "", cell, std::string(width[c] - cell.size(), ' '));
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  };
  line(report.columns);
  if (report.rows.empty()) return out;
  for (const auto& row : report.rows) line(row);
  AppendSummary(report, out);
  return out;
}

absl::Status EmitReport(const Report& report, const std::string& path, ReportFormat format) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  file << RenderReport(report, format);
  file.close();
  if (!file) return absl::UnavailableError(absl::StrCat("failed writing ", path));
  return absl::OkStatus();
}

absl::StatusOr<Report> ParseCsvReport(absl::string_view text) {
  Report report;
  bool header = true;
  for (absl::string_view line : absl::StrSplit(text, '\n', absl::SkipEmpty())) {
    if (absl::ConsumePrefix(&line, "# ")) {
      const size_t eq = line.find('=');
      if (eq == absl::string_view::npos) {
        return absl::InvalidArgumentError(absl::StrCat("summary line without '=': ", line));
      }
      report.summary.emplace_back(std::string(line.substr(0, eq)),
                                  std::string(line.substr(eq + 1)));
      continue;
    }
    absl::StatusOr<std::vector<std::string>> cells = ParseCsvLine(line);
    if (!cells.ok()) return cells.status();
    if (header) {
      report.columns = *std::move(cells);
      header = false;
      continue;
    }
    if (cells->size() != report.columns.size()) {
      return absl::InvalidArgumentError(absl::StrCat("row has ", cells->size(), " cells, expected ",
                                                     report.columns.size()));
    }
    report.rows.push_back(*std::move(cells));
  }
  if (header) return absl::InvalidArgumentError("missing header");
  return report;
}

}  // namespace fedrange
