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

#ifndef FEDRANGE_DP_MECHANISMS_H_
#define FEDRANGE_DP_MECHANISMS_H_

#include <cstddef>
#include <span>

#include "absl/status/statusor.h"
#include "fedrange/dp/random.h"

namespace fedrange {

// One draw from Laplace(0, scale) by inverse CDF. scale == 0 returns 0.
double SampleLaplace(double scale, Rng& rng);

// Laplace mechanism: value + Lap(scale). A zero scale is an exact
// passthrough; negative or non-finite scales are rejected.
absl::StatusOr<double> AddLaplaceNoise(double value, double scale, Rng& rng);

// Exponential mechanism over a finite candidate set. Candidate i is chosen
// with probability proportional to exp(epsilon * scores[i] / (2 *
// sensitivity)). Weights are shifted by the maximum score before
// exponentiation. When the uniform draw lands exactly on a cumulative
// boundary the lower index wins.
absl::StatusOr<size_t> ExponentialSelect(std::span<const double> scores,
                                         double epsilon, double sensitivity,
                                         Rng& rng);

}  // namespace fedrange

#endif  // FEDRANGE_DP_MECHANISMS_H_
