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

#include "fedrange/sampling/sampling.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "fedrange/dp/mechanisms.h"

namespace fedrange {
namespace {

absl::Status CheckSampleSize(size_t candidates, int s, Replacement replacement) {
  if (candidates == 0) return absl::InvalidArgumentError("no candidate clusters");
  if (s < 1) return absl::InvalidArgumentError(absl::StrCat("sample size ", s));
  if (replacement == Replacement::kWithout && static_cast<size_t>(s) > candidates) {
    return absl::InvalidArgumentError(absl::StrCat(
        "sample size ", s, " exceeds ", candidates, " candidate clusters"));
  }
  return absl::OkStatus();
}

// Draws s positions where each draw picks i with probability weights[i] over
// the weights still in play. Ties on a cumulative boundary go to the lower
// position.
ClusterSample DrawWeighted(std::vector<double> weights, int s, Rng& rng,
                           Replacement replacement) {
  ClusterSample sample;
  sample.positions.reserve(s);
  std::vector<double> cumulative(weights.size());
  for (int draw = 0; draw < s; ++draw) {
    double total = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
      total += weights[i];
      cumulative[i] = total;
    }
    const double u = rng.Uniform01() * total;
    // First position whose cumulative weight exceeds u, skipping removed
    // (zero-weight) positions that share the boundary.
    size_t pick = std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                  cumulative.begin();
    if (pick == weights.size()) {
      pick = weights.size() - 1;
      while (weights[pick] == 0.0) --pick;
    }
    sample.positions.push_back(pick);
    if (replacement == Replacement::kWithout) weights[pick] = 0.0;
  }
  return sample;
}

}  // namespace

absl::StatusOr<std::vector<double>> SamplingProbabilities(
    std::span<const double> r_hat) {
  double sum = 0.0;
  for (double r : r_hat) {
    if (!(r >= 0.0)) {
      return absl::InvalidArgumentError(absl::StrCat("negative proportion ", r));
    }
    sum += r;
  }
  if (!(sum > 0.0)) {
    return absl::FailedPreconditionError("degenerate distribution: all R are zero");
  }
  std::vector<double> p(r_hat.size());
  for (size_t i = 0; i < r_hat.size(); ++i) p[i] = r_hat[i] / sum;
  return p;
}

std::vector<double> UniformProbabilities(size_t n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

absl::StatusOr<ClusterSample> EmSampling(std::span<const double> p, int s,
                                         double epsilon_total, double delta_p,
                                         Rng& rng, Replacement replacement) {
  if (absl::Status st = CheckSampleSize(p.size(), s, replacement); !st.ok()) {
    return st;
  }
  if (!(epsilon_total > 0.0)) {
    return absl::InvalidArgumentError("sampling epsilon must be positive");
  }
  if (!(delta_p > 0.0)) {
    return absl::InvalidArgumentError("sensitivity of p must be positive");
  }
  const double epsilon_draw = epsilon_total / s;
  const double factor = epsilon_draw / (2.0 * delta_p);
  if (std::isinf(factor)) {
    // Zero-noise limit: the largest remaining probabilities, lowest position
    // first among equals.
    std::vector<size_t> order(p.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return p[a] > p[b]; });
    ClusterSample sample;
    for (int k = 0; k < s; ++k) {
      sample.positions.push_back(
          order[replacement == Replacement::kWithout ? k : 0]);
    }
    return sample;
  }
  const double max_p = *std::max_element(p.begin(), p.end());
  std::vector<double> weights(p.size());
  for (size_t i = 0; i < p.size(); ++i) {
    weights[i] = std::exp(factor * (p[i] - max_p));
  }
  return DrawWeighted(std::move(weights), s, rng, replacement);
}

absl::StatusOr<ClusterSample> PpsSampling(std::span<const double> p, int s,
                                          Rng& rng, Replacement replacement) {
  if (absl::Status st = CheckSampleSize(p.size(), s, replacement); !st.ok()) {
    return st;
  }
  size_t positive = 0;
  for (double v : p) {
    if (!(v >= 0.0)) return absl::InvalidArgumentError("negative probability");
    if (v > 0.0) ++positive;
  }
  if (replacement == Replacement::kWithout && static_cast<size_t>(s) > positive) {
    return absl::InvalidArgumentError("sample larger than the support of p");
  }
  return DrawWeighted(std::vector<double>(p.begin(), p.end()), s, rng, replacement);
}

absl::StatusOr<double> HansenHurwitz(std::span<const double> answers,
                                     std::span<const double> p) {
  if (answers.empty() || answers.size() != p.size()) {
    return absl::InvalidArgumentError("answers and probabilities must pair up");
  }
  double total = 0.0;
  for (size_t i = 0; i < answers.size(); ++i) {
    if (!(p[i] > 0.0)) {
      return absl::InternalError("sampled cluster has zero probability");
    }
    total += answers[i] / p[i];
  }
  return total / static_cast<double>(answers.size());
}

}  // namespace fedrange
