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

#include "fedrange/bench/workload.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "fedrange/datamodel/cluster.h"
#include "fedrange/dp/random.h"
#include "fedrange/metastore/metadata.h"

namespace fedrange {
namespace {

double Millis(absl::Duration d) { return absl::ToDoubleMilliseconds(d); }

template <typename F>
double TimeMs(F&& f) {
  const absl::Time start = absl::Now();
  f();
  return Millis(absl::Now() - start);
}

std::vector<double> SortedErrors(const std::vector<QueryRecord>& records) {
  std::vector<double> out;
  for (const QueryRecord& r : records) {
    if (r.relative_error.has_value()) out.push_back(*r.relative_error);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double Mean(const std::vector<double>& v) {
  if (v.empty()) return std::nan("");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

absl::StatusOr<std::vector<RangeQuery>> GenerateWorkload(const WorkloadSpec& spec,
                                                         const Schema& schema,
                                                         const QueryFilter& filter) {
  if (spec.m < 1) return absl::InvalidArgumentError("workload needs m >= 1");
  if (spec.n < 1 || spec.n > schema.num_dimensions()) {
    return absl::InvalidArgumentError(absl::StrCat("n must lie in [1, ",
                                                   schema.num_dimensions(), "]"));
  }
  if (!(spec.min_width_fraction > 0.0 && spec.min_width_fraction <= 1.0)) {
    return absl::InvalidArgumentError("min_width_fraction must lie in (0, 1]");
  }
  Rng rng(spec.seed);
  std::vector<RangeQuery> out;
  std::set<std::string> seen;
  std::vector<int> dims(schema.num_dimensions());
  for (int attempt = 0; attempt < spec.max_attempts && static_cast<int>(out.size()) < spec.m;
       ++attempt) {
    std::iota(dims.begin(), dims.end(), 0);
    RangeQuery q;
    q.aggregation = spec.aggregation;
    for (int k = 0; k < spec.n; ++k) {
      std::swap(dims[k], dims[k + rng.UniformInt(dims.size() - k)]);
      const Dimension& d = schema.dimensions[dims[k]];
      const int domain = d.size();
      const int min_width =
          std::max(1, static_cast<int>(std::ceil(spec.min_width_fraction * domain)));
      const int width = min_width + static_cast<int>(rng.UniformInt(domain - min_width + 1));
      const Rank lo = static_cast<Rank>(rng.UniformInt(domain - width + 1));
      q.ranges[d.name] = {lo, static_cast<Rank>(lo + width - 1)};
    }
    const std::string key = DebugString(q);
    if (seen.contains(key)) continue;
    if (filter && !filter(q)) continue;
    seen.insert(key);
    out.push_back(std::move(q));
  }
  if (static_cast<int>(out.size()) < spec.m) {
    return absl::ResourceExhaustedError(
        absl::StrCat("only ", out.size(), " of ", spec.m, " queries found in ",
                     spec.max_attempts, " attempts"));
  }
  return out;
}

QueryFilter ApproximationFilter(const LocalFederation& federation) {
  return [&federation](const RangeQuery& q) {
    auto& fed = const_cast<LocalFederation&>(federation);
    absl::StatusOr<CompiledQuery> compiled = Compile(q, fed.schema());
    if (!compiled.ok()) return false;
    for (int i = 0; i < fed.num_providers(); ++i) {
      const ProviderNode& p = fed.provider(i);
      if (static_cast<int>(IdentifyCQ(*compiled, p.metadata().global).size()) < p.n_min()) {
        return false;
      }
    }
    return true;
  };
}

std::optional<double> RelativeError(double answer, double estimate) {
  if (answer == 0.0) return std::nullopt;
  return std::fabs(answer - estimate) / std::fabs(answer);
}

Message LocalTarget::Ask(const RangeQuery& query, double sample_rate, const Budget& budget) {
  return federation_->Query(query, sample_rate, budget, *accountant_);
}

Message RemoteTarget::Ask(const RangeQuery& query, double sample_rate, const Budget& budget) {
  QueryPayload payload;
  payload.query = query;
  payload.sample_rate = sample_rate;
  payload.budget = budget;
  payload.analyst = analyst_;
  const std::string id = absl::StrCat(analyst_, "-", next_++);
  absl::StatusOr<Message> reply = channel_.Exchange(Message{id, payload}, timeout_);
  if (!reply.ok()) return Message{id, RefusalPayload{reply.status().ToString()}};
  return *std::move(reply);
}

int64_t MetricsReport::answered() const {
  return std::count_if(records.begin(), records.end(),
                       [](const QueryRecord& r) { return r.answer.has_value(); });
}

int64_t MetricsReport::refused() const {
  return static_cast<int64_t>(records.size()) - answered();
}

int64_t MetricsReport::undefined_errors() const {
  return std::count_if(records.begin(), records.end(), [](const QueryRecord& r) {
    return r.answer.has_value() && !r.relative_error.has_value();
  });
}

double MetricsReport::mean_relative_error() const { return Mean(SortedErrors(records)); }

double MetricsReport::percentile_relative_error(double q) const {
  const std::vector<double> e = SortedErrors(records);
  if (e.empty()) return std::nan("");
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(e.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = static_cast<size_t>(std::ceil(pos));
  return e[lo] + (pos - static_cast<double>(lo)) * (e[hi] - e[lo]);
}

double MetricsReport::mean_speedup_full_scan() const {
  std::vector<double> v;
  for (const QueryRecord& r : records) {
    if (r.answer.has_value() && r.federated_ms > 0) v.push_back(r.full_scan_ms / r.federated_ms);
  }
  return Mean(v);
}

double MetricsReport::mean_speedup_pruned() const {
  std::vector<double> v;
  for (const QueryRecord& r : records) {
    if (r.answer.has_value() && r.federated_ms > 0) v.push_back(r.pruned_ms / r.federated_ms);
  }
  return Mean(v);
}

double MetricsReport::mean_scanned_fraction() const {
  std::vector<double> v;
  for (const QueryRecord& r : records) {
    if (r.cluster_reads >= 0 && r.total_clusters > 0) {
      v.push_back(static_cast<double>(r.cluster_reads) / static_cast<double>(r.total_clusters));
    }
  }
  return Mean(v);
}

Budget MetricsReport::budget_consumed() const {
  Budget b;
  for (const QueryRecord& r : records) {
    if (r.answer.has_value()) {
      b.epsilon += r.budget.epsilon;
      b.delta += r.budget.delta;
    }
  }
  return b;
}

Baseline BaselineOf(LocalFederation& federation) {
  Baseline b;
  b.schema = federation.schema();
  for (int i = 0; i < federation.num_providers(); ++i) {
    b.providers.push_back(federation.provider(i).store().clusters());
    b.metadata.push_back(&federation.provider(i).metadata().global);
  }
  return b;
}

MetricsReport RunWorkload(const std::vector<RangeQuery>& queries, double sample_rate,
                          const Budget& per_query, QueryTarget& target,
                          const Baseline& baseline, const std::string& mode,
                          LocalFederation* instrumented) {
  MetricsReport report;
  int64_t total_clusters = 0;
  for (const auto& p : baseline.providers) total_clusters += static_cast<int64_t>(p.size());
  for (size_t i = 0; i < queries.size(); ++i) {
    const RangeQuery& q = queries[i];
    QueryRecord rec;
    rec.index = static_cast<int>(i);
    rec.mode = mode;
    rec.query = DebugString(q);
    rec.num_dims = static_cast<int>(q.ranges.size());
    rec.budget = per_query;
    rec.total_clusters = total_clusters;

    absl::StatusOr<CompiledQuery> compiled = Compile(q, baseline.schema);
    if (compiled.ok()) {
      // Full scan without metadata.
      double exact = 0.0;
      rec.full_scan_ms = TimeMs([&] {
        for (const auto& clusters : baseline.providers) {
          exact += EvaluateExact(*compiled, clusters);
        }
      });
      rec.exact = exact;
      // Exact evaluation restricted to C^Q.
      if (baseline.metadata.size() == baseline.providers.size()) {
        double pruned = 0.0;
        rec.pruned_ms = TimeMs([&] {
          for (size_t p = 0; p < baseline.providers.size(); ++p) {
            for (int id : IdentifyCQ(*compiled, *baseline.metadata[p])) {
              pruned += EvaluateOnCluster(*compiled, baseline.providers[p][id]);
            }
          }
        });
      }
    }

    std::vector<int64_t> reads_before;
    int64_t fallbacks_before = 0;
    if (instrumented != nullptr) {
      for (int p = 0; p < instrumented->num_providers(); ++p) {
        reads_before.push_back(instrumented->provider(p).store().reads());
        fallbacks_before += instrumented->provider(p).fallback_count();
      }
    }
    Message reply;
    rec.federated_ms = TimeMs([&] { reply = target.Ask(q, sample_rate, per_query); });
    if (instrumented != nullptr) {
      rec.cluster_reads = 0;
      int64_t fallbacks = 0;
      for (int p = 0; p < instrumented->num_providers(); ++p) {
        const ProviderNode& node = instrumented->provider(p);
        rec.provider_reads.push_back(node.store().reads() - reads_before[p]);
        rec.cluster_reads += rec.provider_reads.back();
        fallbacks += node.fallback_count();
      }
      rec.approximated = fallbacks == fallbacks_before;
      rec.allocated = instrumented->aggregator().last_trace().allocation.target_total;
    }
    if (const auto* answer = std::get_if<AnswerPayload>(&reply.payload)) {
      rec.answer = answer->value;
      rec.relative_error = RelativeError(rec.exact, answer->value);
    } else if (const auto* refusal = std::get_if<RefusalPayload>(&reply.payload)) {
      rec.refusal = refusal->reason;
    } else {
      rec.refusal = absl::StrCat("unexpected reply ", MessageTypeName(reply.type()));
    }
    report.records.push_back(std::move(rec));
  }
  return report;
}

}  // namespace fedrange
