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

#include "fedrange/dp/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace fedrange {

double SampleLaplace(double scale, Rng& rng) {
  if (scale == 0.0) return 0.0;
  const double u = rng.UniformOpen01() - 0.5;
  // u in (-0.5, 0.5); 1 - 2|u| stays in (0, 1].
  const double magnitude = -scale * std::log1p(-2.0 * std::abs(u));
  return u < 0 ? -magnitude : magnitude;
}

absl::StatusOr<double> AddLaplaceNoise(double value, double scale, Rng& rng) {
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Laplace scale must be finite and non-negative, got ",
                     scale));
  }
  return value + SampleLaplace(scale, rng);
}

absl::StatusOr<size_t> ExponentialSelect(std::span<const double> scores,
                                         double epsilon, double sensitivity,
                                         Rng& rng) {
  if (scores.empty()) {
    return absl::InvalidArgumentError("exponential mechanism needs candidates");
  }
  if (!(sensitivity > 0.0)) {
    return absl::InvalidArgumentError("sensitivity must be positive");
  }
  if (!(epsilon >= 0.0)) {
    return absl::InvalidArgumentError("epsilon must be non-negative");
  }
  const auto max_it = std::max_element(scores.begin(), scores.end());
  const double max_score = *max_it;
  const double factor = epsilon / (2.0 * sensitivity);
  if (std::isinf(factor)) {
    return static_cast<size_t>(max_it - scores.begin());
  }
  std::vector<double> cumulative(scores.size());
  double total = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    total += std::exp(factor * (scores[i] - max_score));
    cumulative[i] = total;
  }
  const double u = rng.Uniform01() * total;
  auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) --it;
  return static_cast<size_t>(it - cumulative.begin());
}

}  // namespace fedrange
