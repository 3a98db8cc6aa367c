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

#ifndef FEDRANGE_BENCH_SMC_COMPARE_H_
#define FEDRANGE_BENCH_SMC_COMPARE_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fedrange/datamodel/count_tensor.h"
#include "fedrange/datamodel/query.h"
#include "fedrange/dp/accountant.h"
#include "fedrange/federation/local_federation.h"

namespace fedrange {

struct SmcCompareConfig {
  int repetitions = 100;
  double sample_rate = 0.2;
  Budget per_query{1.0, 1e-3};
};

// Injected noise for one query in one mode across the repetitions.
struct SmcNoiseRow {
  int query_index = 0;
  std::string query;
  std::string mode;  // "plain" or "smc"
  int runs = 0;
  int refused = 0;
  double noise_min = 0.0;
  double noise_max = 0.0;
  double noise_mean = 0.0;
  double noise_variance = 0.0;  // sample variance of the injected noise
  // Mean of the Laplace variances implied by the recorded scales: the sum of
  // 2 b_i^2 over providers in plain mode, 2 b^2 for the single SMC draw.
  double predicted_variance = 0.0;
  double mean_ms = 0.0;
};

// Runs every query `repetitions` times through `plain` and `smc` (the same
// data, secure aggregation off and on) and records the noise each answer
// carries: released minus noiseless value.
absl::StatusOr<std::vector<SmcNoiseRow>> CompareSmcNoise(const std::vector<RangeQuery>& queries,
                                                         LocalFederation& plain,
                                                         LocalFederation& smc,
                                                         const SmcCompareConfig& config);

}  // namespace fedrange

#endif  // FEDRANGE_BENCH_SMC_COMPARE_H_
