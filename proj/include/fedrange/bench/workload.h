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

#ifndef FEDRANGE_BENCH_WORKLOAD_H_
#define FEDRANGE_BENCH_WORKLOAD_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/time/time.h"
#include "fedrange/datamodel/cluster.h"
#include "fedrange/datamodel/query.h"
#include "fedrange/datamodel/schema.h"
#include "fedrange/dp/accountant.h"
#include "fedrange/federation/local_federation.h"
#include "fedrange/federation/message.h"
#include "fedrange/federation/tcp.h"
#include "fedrange/metastore/metadata.h"

namespace fedrange {

struct WorkloadSpec {
  int m = 50;  // distinct queries
  int n = 2;   // dimensions per query
  Aggregation aggregation = Aggregation::kCount;
  double sample_rate = 0.2;
  uint64_t seed = 1;
  // Each range covers at least this fraction of its dimension's domain.
  double min_width_fraction = 0.5;
  // Candidate queries drawn before giving up.
  int max_attempts = 100'000;
};

// Accepts a candidate query; used to keep only queries that trigger
// approximation.
using QueryFilter = std::function<bool(const RangeQuery&)>;

// `m` distinct random range queries over `n` distinct dimensions each. Range
// widths are uniform between min_width_fraction and the full domain.
// Candidates rejected by `filter` are redrawn. ResourceExhausted when
// max_attempts candidates do not yield `m` accepted queries.
absl::StatusOr<std::vector<RangeQuery>> GenerateWorkload(const WorkloadSpec& spec,
                                                         const Schema& schema,
                                                         const QueryFilter& filter = {});

// True when every provider of `federation` would approximate the query,
// i.e. |C^Q| >= N^min at each of them.
QueryFilter ApproximationFilter(const LocalFederation& federation);

// |answer - estimate| / answer; std::nullopt when answer is 0.
std::optional<double> RelativeError(double answer, double estimate);

// Where a workload sends its queries.
class QueryTarget {
 public:
  virtual ~QueryTarget() = default;
  // ANSWER or REFUSAL. Transport errors become REFUSAL.
  virtual Message Ask(const RangeQuery& query, double sample_rate, const Budget& budget) = 0;
};

// An in-process federation charging one local accountant.
class LocalTarget : public QueryTarget {
 public:
  LocalTarget(LocalFederation* federation, Accountant* accountant)
      : federation_(federation), accountant_(accountant) {}
  Message Ask(const RangeQuery& query, double sample_rate, const Budget& budget) override;

 private:
  LocalFederation* federation_;
  Accountant* accountant_;
};

// A remote aggregator reached over TCP as analyst `analyst`.
class RemoteTarget : public QueryTarget {
 public:
  RemoteTarget(Endpoint aggregator, std::string analyst, absl::Duration timeout)
      : channel_(std::move(aggregator)), analyst_(std::move(analyst)), timeout_(timeout) {}
  Message Ask(const RangeQuery& query, double sample_rate, const Budget& budget) override;

 private:
  TcpChannel channel_;
  std::string analyst_;
  absl::Duration timeout_;
  int64_t next_ = 0;
};

struct QueryRecord {
  int index = 0;
  std::string mode;  // free-form label, e.g. "plain" or "smc"
  std::string query;
  int num_dims = 0;
  double exact = 0.0;
  std::optional<double> answer;  // empty on refusal
  std::string refusal;
  std::optional<double> relative_error;  // empty when refused or exact is 0
  double federated_ms = 0.0;
  double full_scan_ms = 0.0;
  double pruned_ms = 0.0;
  // Clusters the providers read; -1 when not instrumented.
  int64_t cluster_reads = -1;
  std::vector<int64_t> provider_reads;  // per provider, when instrumented
  int64_t total_clusters = 0;
  // Clusters the aggregator asked the providers to sample, when instrumented.
  int64_t allocated = -1;
  // Every provider sampled (none fell back to exact evaluation); only known
  // for instrumented runs.
  std::optional<bool> approximated;
  Budget budget;
};

struct MetricsReport {
  std::vector<QueryRecord> records;

  int64_t answered() const;
  int64_t refused() const;
  int64_t undefined_errors() const;  // answered queries whose exact value is 0
  double mean_relative_error() const;
  double percentile_relative_error(double q) const;
  double mean_speedup_full_scan() const;
  double mean_speedup_pruned() const;
  double mean_scanned_fraction() const;
  Budget budget_consumed() const;
};

// Local clusters the baselines run on, one list per provider.
struct Baseline {
  Schema schema;
  std::vector<std::span<const Cluster>> providers;
  // Per-provider metadata for the pruned baseline; empty disables it.
  std::vector<const GlobalMeta*> metadata;
};

Baseline BaselineOf(LocalFederation& federation);

// Runs every query through `target` and both exact baselines, timing each.
// `instrumented` (optional) is the federation behind `target`, used for
// cluster-read counters.
MetricsReport RunWorkload(const std::vector<RangeQuery>& queries, double sample_rate,
                          const Budget& per_query, QueryTarget& target,
                          const Baseline& baseline, const std::string& mode,
                          LocalFederation* instrumented = nullptr);

}  // namespace fedrange

#endif  // FEDRANGE_BENCH_WORKLOAD_H_
