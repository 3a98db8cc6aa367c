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

#include <cmath>
#include <numeric>
#include <vector>

#include "fedrange/allocation/allocation.h"
#include "fedrange/dp/random.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "testing/oracles.h"

namespace fedrange {
namespace {

using ::testing::ElementsAre;

ProviderSummary Summary(int id, int64_t n, double avg) {
  return ProviderSummary{id, n, avg};
}

TEST(PerturbSummaryTest, ZeroNoiseLimit) {
  Rng rng(1);
  ProviderSummary s = *PerturbSummary(3, 100, 0.4, 1e300, 0.09, rng);
  EXPECT_EQ(s.provider_id, 3);
  EXPECT_EQ(s.n_q_noisy, 100);
  EXPECT_DOUBLE_EQ(s.avg_r_noisy, 0.4);
  EXPECT_FALSE(PerturbSummary(3, 100, 0.4, 0.0, 0.09, rng).ok());
}

TEST(PerturbSummaryTest, CountNoiseVarianceAndClamps) {
  Rng rng(2);
  // Pre-rounding variance 2 * (2 / 0.1)^2 = 800; rounding adds 1/12.
  constexpr int kRuns = 10'000;
  double sum = 0, sum_sq = 0;
  for (int i = 0; i < kRuns; ++i) {
    ProviderSummary s = *PerturbSummary(0, 1000, 0.99, 0.1, 0.5, rng);
    sum += s.n_q_noisy;
    sum_sq += static_cast<double>(s.n_q_noisy) * s.n_q_noisy;
    EXPECT_LE(s.avg_r_noisy, 1.0);
    EXPECT_GE(s.avg_r_noisy, 0.0);
    EXPECT_GE(s.n_q_noisy, 0);
  }
  const double mean = sum / kRuns;
  EXPECT_NEAR(sum_sq / kRuns - mean * mean, 800.0, 0.05 * 800.0);
  ProviderSummary small = *PerturbSummary(0, 0, 0.0, 0.01, 0.5, rng);
  EXPECT_GE(small.n_q_noisy, 0);
}

TEST(SolveAllocationTest, TwoProviderExample) {
  const std::vector<ProviderSummary> s = {Summary(0, 10, 0.8), Summary(1, 10, 0.2)};
  Allocation a = *SolveAllocation(s, 0.5);
  EXPECT_THAT(a.sample_sizes, ElementsAre(8, 2));
  EXPECT_EQ(a.target_total, 10);
  EXPECT_FALSE(a.clamped);
  EXPECT_NEAR(AllocationObjective(s, a.sample_sizes), 6.8, 1e-12);
}

TEST(SolveAllocationTest, TiesGoToLowerProviderId) {
  const std::vector<ProviderSummary> s = {Summary(0, 10, 0.5), Summary(1, 10, 0.5),
                                          Summary(2, 10, 0.5)};
  Allocation a = *SolveAllocation(s, 0.5);
  EXPECT_THAT(a.sample_sizes, ElementsAre(9, 4, 2));
  EXPECT_DOUBLE_EQ(AllocationObjective(s, a.sample_sizes),
                   testing::BruteForceAllocationObjective(s, 0.5));
}

TEST(SolveAllocationTest, ClampsInfeasibleTotals) {
  const std::vector<ProviderSummary> s = {Summary(0, 4, 0.5), Summary(1, 4, 0.5)};
  Allocation low = *SolveAllocation(s, 0.05);
  EXPECT_TRUE(low.clamped);
  EXPECT_EQ(low.target_total, 4);
  EXPECT_FALSE(low.warning.empty());
  Allocation high = *SolveAllocation(s, 0.99);
  EXPECT_TRUE(high.clamped);
  EXPECT_THAT(high.sample_sizes, ElementsAre(3, 3));
}

TEST(SolveAllocationTest, DegenerateProvidersGetAtMostOne) {
  const std::vector<ProviderSummary> s = {Summary(0, 0, 0.9), Summary(1, 2, 0.9),
                                          Summary(2, 40, 0.1)};
  Allocation a = *SolveAllocation(s, 0.5);
  EXPECT_EQ(a.sample_sizes[0], 0);
  EXPECT_EQ(a.sample_sizes[1], 1);
  EXPECT_EQ(a.sample_sizes[2], a.target_total - 1);
}

TEST(SolveAllocationTest, RejectsBadInput) {
  EXPECT_FALSE(SolveAllocation({}, 0.5).ok());
  const std::vector<ProviderSummary> s = {Summary(0, 10, 0.5)};
  EXPECT_FALSE(SolveAllocation(s, 1.0).ok());
  EXPECT_FALSE(SolveAllocation(s, 0.0).ok());
}

TEST(SolveAllocationTest, GreedyMatchesExhaustiveOptimum) {
  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng.UniformInt(4));
    std::vector<ProviderSummary> s;
    for (int i = 0; i < n; ++i) {
      s.push_back(Summary(i, static_cast<int64_t>(rng.UniformInt(13)),
                          std::round(rng.Uniform01() * 20) / 20));
    }
    const double sr = 0.05 + 0.9 * rng.Uniform01();
    Allocation a = *SolveAllocation(s, sr);
    EXPECT_EQ(std::accumulate(a.sample_sizes.begin(), a.sample_sizes.end(), int64_t{0}),
              a.target_total);
    EXPECT_NEAR(AllocationObjective(s, a.sample_sizes),
                testing::BruteForceAllocationObjective(s, sr), 1e-9)
        << "trial " << trial;
  }
}

TEST(SolveAllocationTest, MonotoneFairness) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const int64_t n = 3 + static_cast<int64_t>(rng.UniformInt(30));
    const std::vector<ProviderSummary> s = {
        Summary(0, n, rng.Uniform01()), Summary(1, n, rng.Uniform01()),
        Summary(2, 3 + static_cast<int64_t>(rng.UniformInt(30)), rng.Uniform01())};
    Allocation a = *SolveAllocation(s, 0.05 + 0.9 * rng.Uniform01());
    if (s[0].avg_r_noisy > s[1].avg_r_noisy) {
      EXPECT_GE(a.sample_sizes[0], a.sample_sizes[1]);
    } else if (s[1].avg_r_noisy > s[0].avg_r_noisy) {
      EXPECT_GE(a.sample_sizes[1], a.sample_sizes[0]);
    }
  }
}

}  // namespace
}  // namespace fedrange
