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

#include "fedrange/bench/smc_compare.h"

#include <algorithm>
#include <limits>

#include "absl/status/status.h"
#include "absl/time/clock.h"
#include "fedrange/bench/workload.h"

namespace fedrange {
namespace {

struct Sample {
  double noise = 0.0;
  double predicted = 0.0;
};

// The noise of the answer just produced by `federation`, from the
// providers' and the aggregator's release records.
Sample LastNoise(LocalFederation& federation, double answer, bool smc) {
  Sample s;
  if (smc) {
    const QueryTrace& trace = federation.aggregator().last_trace();
    s.noise = answer - trace.pre_noise_sum;
    s.predicted = 2.0 * trace.noise_scale * trace.noise_scale;
    return s;
  }
  for (int i = 0; i < federation.num_providers(); ++i) {
    const ProviderNode::Release r = federation.provider(i).last_release();
    s.noise += r.released - r.pre_noise;
    s.predicted += 2.0 * r.noise_scale * r.noise_scale;
  }
  return s;
}

SmcNoiseRow Summarize(int index, const RangeQuery& query, const char* mode,
                      const std::vector<Sample>& samples, int refused, double total_ms) {
  SmcNoiseRow row;
  row.query_index = index;
  row.query = DebugString(query);
  row.mode = mode;
  row.runs = static_cast<int>(samples.size());
  row.refused = refused;
  if (samples.empty()) return row;
  row.noise_min = std::numeric_limits<double>::infinity();
  row.noise_max = -std::numeric_limits<double>::infinity();
  double sum = 0.0, predicted = 0.0;
  for (const Sample& s : samples) {
    row.noise_min = std::min(row.noise_min, s.noise);
    row.noise_max = std::max(row.noise_max, s.noise);
    sum += s.noise;
    predicted += s.predicted;
  }
  const double n = static_cast<double>(samples.size());
  row.noise_mean = sum / n;
  row.predicted_variance = predicted / n;
  if (samples.size() > 1) {
    double ss = 0.0;
    for (const Sample& s : samples) ss += (s.noise - row.noise_mean) * (s.noise - row.noise_mean);
    row.noise_variance = ss / (n - 1);
  }
  row.mean_ms = total_ms / (n + refused);
  return row;
}

}  // namespace

absl::StatusOr<std::vector<SmcNoiseRow>> CompareSmcNoise(const std::vector<RangeQuery>& queries,
                                                         LocalFederation& plain,
                                                         LocalFederation& smc,
                                                         const SmcCompareConfig& config) {
  if (config.repetitions < 1) return absl::InvalidArgumentError("repetitions must be >= 1");
  if (plain.aggregator().config().smc_mode || !smc.aggregator().config().smc_mode) {
    return absl::InvalidArgumentError("expected one plain and one SMC federation");
  }
  std::vector<SmcNoiseRow> rows;
  for (size_t q = 0; q < queries.size(); ++q) {
    for (bool secure : {false, true}) {
      LocalFederation& fed = secure ? smc : plain;
      std::vector<Sample> samples;
      int refused = 0;
      double total_ms = 0.0;
      for (int r = 0; r < config.repetitions; ++r) {
        // Every repetition is a fresh analyst holding exactly one query's budget.
        Accountant accountant = Accountant::Sequential(config.per_query);
        const absl::Time start = absl::Now();
        const Message reply =
            fed.Query(queries[q], config.sample_rate, config.per_query, accountant);
        total_ms += absl::ToDoubleMilliseconds(absl::Now() - start);
        const auto* answer = std::get_if<AnswerPayload>(&reply.payload);
        if (answer == nullptr) {
          ++refused;
          continue;
        }
        samples.push_back(LastNoise(fed, answer->value, secure));
      }
      rows.push_back(Summarize(static_cast<int>(q), queries[q], secure ? "smc" : "plain",
                               samples, refused, total_ms));
    }
  }
  return rows;
}

}  // namespace fedrange
