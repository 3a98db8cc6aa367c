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

#include "fedrange/dp/sensitivity.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace fedrange {

double DeltaR(int capacity, int num_query_dims) {
  const double inv = 1.0 / static_cast<double>(capacity);
  // -expm1(n log1p(-x)) keeps precision for large S.
  return -std::expm1(num_query_dims * std::log1p(-inv));
}

double DeltaAvgR(int capacity, int num_query_dims, int n_min) {
  const double n = static_cast<double>(n_min);
  return std::max(DeltaR(capacity, num_query_dims) / n, 1.0 / (n + 1.0));
}

double DeltaP(int n_min) {
  const double n = static_cast<double>(n_min);
  return 1.0 / (n * (n + 1.0));
}

double LocalSensitivityAtDistance(Scenario scenario, int k,
                                  const SensitivityContext& ctx) {
  if (k == 0) return 0.0;
  switch (scenario) {
    case Scenario::kOtherClusterGainsRow:
      return k * ctx.answer * ctx.delta_r() / ctx.r;
    case Scenario::kMeasureIncrement:
      return k / ctx.p;
  }
  return 0.0;
}

Scenario DominantScenario(const SensitivityContext& ctx) {
  return ctx.answer > ctx.sum_r / ctx.delta_r()
             ? Scenario::kOtherClusterGainsRow
             : Scenario::kMeasureIncrement;
}

double SmoothingBeta(double epsilon, double delta) {
  return epsilon / (2.0 * std::log(2.0 / delta));
}

int KBound(double beta) {
  // -expm1(-beta) == 1 - e^{-beta}; goes to 1 as beta grows.
  const double bound = std::ceil(1.0 / -std::expm1(-beta));
  return static_cast<int>(bound) + 1;
}

absl::StatusOr<double> SmoothSensitivity(const SensitivityContext& ctx,
                                         double epsilon, double delta) {
  if (!(epsilon > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("smooth sensitivity needs epsilon > 0, got ", epsilon));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("smooth sensitivity needs 0 < delta < 1, got ", delta));
  }
  if (!(ctx.p > 0.0)) {
    return absl::InvalidArgumentError("sampling probability must be positive");
  }
  const double beta = SmoothingBeta(epsilon, delta);
  const int k_max = KBound(beta);
  const Scenario scenario = DominantScenario(ctx);
  // LS^k is linear in k, so e^{-beta k} LS^k peaks at k = 1/beta; only the
  // integers around it (clamped to the bound) need evaluating.
  const double peak = 1.0 / beta;
  double best = 0.0;
  for (double k : {std::floor(peak), std::ceil(peak), static_cast<double>(k_max)}) {
    const int kk = static_cast<int>(std::clamp(k, 0.0, static_cast<double>(k_max)));
    best = std::max(best, std::exp(-beta * kk) *
                              LocalSensitivityAtDistance(scenario, kk, ctx));
  }
  return best;
}

}  // namespace fedrange
