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

#ifndef FEDRANGE_SAMPLING_SAMPLING_H_
#define FEDRANGE_SAMPLING_SAMPLING_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "fedrange/dp/random.h"

namespace fedrange {

// p_j = R_j / sum(R). FailedPrecondition when every R is zero; callers fall
// back to UniformProbabilities in that case.
absl::StatusOr<std::vector<double>> SamplingProbabilities(
    std::span<const double> r_hat);

std::vector<double> UniformProbabilities(size_t n);

enum class Replacement { kWithout, kWith };

// Positions into the candidate list, in draw order.
struct ClusterSample {
  std::vector<size_t> positions;
};

// Exponential-mechanism cluster sampling. Each of the `s` draws spends
// epsilon_total / s and selects candidate i with weight
// exp(eps_draw * p_i / (2 * delta_p)). Without replacement the remaining
// weights are renormalized after every draw.
absl::StatusOr<ClusterSample> EmSampling(std::span<const double> p, int s,
                                         double epsilon_total, double delta_p,
                                         Rng& rng,
                                         Replacement replacement = Replacement::kWithout);

// Non-private probability-proportional-to-size draws, used as a reference.
absl::StatusOr<ClusterSample> PpsSampling(std::span<const double> p, int s,
                                          Rng& rng, Replacement replacement);

// Mean of answers[i] / p[i].
absl::StatusOr<double> HansenHurwitz(std::span<const double> answers,
                                     std::span<const double> p);

}  // namespace fedrange

#endif  // FEDRANGE_SAMPLING_SAMPLING_H_
