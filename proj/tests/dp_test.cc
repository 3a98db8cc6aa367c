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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "absl/status/status.h"
#include "fedrange/dp/accountant.h"
#include "fedrange/dp/mechanisms.h"
#include "fedrange/dp/random.h"
#include "fedrange/dp/sensitivity.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "testing/oracles.h"

namespace fedrange {
namespace {

using ::testing::HasSubstr;

TEST(LaplaceTest, ZeroScaleIsPassthrough) {
  Rng rng(1);
  EXPECT_EQ(*AddLaplaceNoise(42.5, 0.0, rng), 42.5);
}

TEST(LaplaceTest, RejectsNegativeScale) {
  Rng rng(1);
  EXPECT_EQ(AddLaplaceNoise(1.0, -1.0, rng).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(LaplaceTest, MomentsAndMedianAtScaleTwo) {
  Rng rng(7);
  constexpr int kN = 1'000'000;
  constexpr double kScale = 2.0;
  std::vector<double> xs(kN);
  double sum = 0.0;
  for (double& x : xs) {
    x = SampleLaplace(kScale, rng);
    sum += x;
  }
  const double mean = sum / kN;
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= kN - 1;
  EXPECT_NEAR(mean, 0.0, 3.0 * kScale / std::sqrt(kN));
  EXPECT_NEAR(var, 8.0, 0.05 * 8.0);
  std::nth_element(xs.begin(), xs.begin() + kN / 2, xs.end());
  EXPECT_NEAR(xs[kN / 2], 0.0, 0.01 * kScale);
}

TEST(ExponentialSelectTest, EqualScoresAreUniform) {
  Rng rng(3);
  const std::vector<double> scores(5, 0.3);
  constexpr int kDraws = 100'000;
  std::vector<int> hits(scores.size());
  for (int i = 0; i < kDraws; ++i) ++hits[*ExponentialSelect(scores, 1.0, 1.0, rng)];
  const double p = 1.0 / scores.size();
  const double sigma = std::sqrt(kDraws * p * (1 - p));
  for (int h : hits) EXPECT_NEAR(h, kDraws * p, 3 * sigma);
}

TEST(ExponentialSelectTest, LargeEpsilonPicksTheMaximum) {
  Rng rng(3);
  const std::vector<double> scores = {0.1, 0.9, 0.2};
  int hits = 0;
  for (int i = 0; i < 1000; ++i) hits += *ExponentialSelect(scores, 1e4, 1.0, rng) == 1;
  EXPECT_EQ(hits, 1000);
  EXPECT_EQ(*ExponentialSelect(scores, INFINITY, 1.0, rng), 1u);
}

TEST(ExponentialSelectTest, MatchesSoftmaxWithinTwoPercent) {
  Rng rng(11);
  const std::vector<double> scores = {0.1, 0.2, 0.7};
  const double eps = 1.0;
  const double sens = 1.0 / 110.0;
  constexpr int kDraws = 100'000;
  std::vector<double> freq(scores.size());
  for (int i = 0; i < kDraws; ++i) freq[*ExponentialSelect(scores, eps, sens, rng)] += 1.0;
  for (double& f : freq) f /= kDraws;
  const std::vector<double> expected =
      testing::SoftmaxOracle(scores, eps / (2.0 * sens));
  EXPECT_LT(testing::TotalVariation(freq, expected), 0.02);
}

TEST(ExponentialSelectTest, RejectsBadArguments) {
  Rng rng(1);
  EXPECT_FALSE(ExponentialSelect({}, 1.0, 1.0, rng).ok());
  const std::vector<double> one = {1.0};
  EXPECT_FALSE(ExponentialSelect(one, 1.0, 0.0, rng).ok());
}

TEST(SensitivityTest, DeltaRValues) {
  EXPECT_DOUBLE_EQ(DeltaR(37, 1), 1.0 / 37);
  EXPECT_NEAR(DeltaR(100, 2), 0.0199, 1e-12);
  EXPECT_NEAR(DeltaR(800, 3), 1.0 - std::pow(1.0 - 1.0 / 800, 3), 1e-15);
}

TEST(SensitivityTest, DeltaRDominatesNeighbourEnumeration) {
  Rng rng(5);
  constexpr int kCapacity = 20;
  for (int trial = 0; trial < 10; ++trial) {
    // One row short of capacity so the neighbour still fits.
    const testing::ToyRows rows =
        testing::RandomToyRows(kCapacity - 1, 2, 5, rng);
    for (int qd = 1; qd <= 2; ++qd) {
      EXPECT_LE(testing::MaxProportionChange(rows, kCapacity, 2, 5, qd),
                DeltaR(kCapacity, qd) + 1e-12);
    }
  }
}

TEST(SensitivityTest, DeltaAvgRValues) {
  EXPECT_NEAR(DeltaAvgR(100, 2, 10), 1.0 / 11.0, 1e-15);
  EXPECT_LT(DeltaAvgR(100, 2, 1'000'000), 1e-5);
  // The first term wins for a tiny cluster with many query dimensions.
  EXPECT_NEAR(DeltaAvgR(2, 3, 1), 0.875, 1e-15);
}

TEST(SensitivityTest, DeltaAvgRDominatesSmallInstances) {
  Rng rng(9);
  constexpr int kCapacity = 4;
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int num_clusters = 2 + static_cast<int>(rng.UniformInt(2));
    std::vector<testing::ToyRows> clusters;
    for (int c = 0; c < num_clusters; ++c) {
      clusters.push_back(testing::RandomToyRows(
          1 + static_cast<int>(rng.UniformInt(kCapacity)), 2, 3, rng));
    }
    std::vector<testing::ToyRange> ranges(2);
    for (auto& r : ranges) {
      int a = static_cast<int>(rng.UniformInt(3));
      int b = static_cast<int>(rng.UniformInt(3));
      r = {std::min(a, b), std::max(a, b)};
    }
    const testing::AvgChangeResult res =
        testing::MaxAvgProportionChange(clusters, kCapacity, 2, 3, ranges);
    if (res.n_q == 0) continue;
    ++checked;
    EXPECT_LE(res.max_change, DeltaAvgR(kCapacity, 2, res.n_q) + 1e-12);
  }
  EXPECT_GT(checked, 30);
}

TEST(SensitivityTest, DeltaPValues) {
  EXPECT_NEAR(DeltaP(10), 0.0090909090909, 1e-12);
  EXPECT_DOUBLE_EQ(DeltaP(1), 0.5);
  // Three equal clusters; a fourth one gains a matching row.
  const double before = 1.0 / 3.0;
  const double after = 1.0 / 4.0;
  EXPECT_NEAR(before - after, DeltaP(3), 1e-15);
}

SensitivityContext Context(double answer, double r, double p, double sum_r) {
  SensitivityContext ctx;
  ctx.capacity = 100;
  ctx.num_query_dims = 2;
  ctx.n_min = 10;
  ctx.answer = answer;
  ctx.r = r;
  ctx.p = p;
  ctx.sum_r = sum_r;
  return ctx;
}

TEST(SensitivityTest, LocalSensitivityExamples) {
  SensitivityContext ctx = Context(100, 0.5, 0.25, 5);
  EXPECT_EQ(LocalSensitivityAtDistance(Scenario::kOtherClusterGainsRow, 0, ctx), 0);
  EXPECT_EQ(LocalSensitivityAtDistance(Scenario::kMeasureIncrement, 0, ctx), 0);
  EXPECT_NEAR(LocalSensitivityAtDistance(Scenario::kOtherClusterGainsRow, 2, ctx),
              7.96, 1e-9);
  EXPECT_NEAR(LocalSensitivityAtDistance(Scenario::kMeasureIncrement, 3, ctx), 12.0,
              1e-12);
}

TEST(SensitivityTest, DominantScenarioThreshold) {
  // Threshold sum_R / delta_R = 5 / 0.0199 = 251.26.
  EXPECT_EQ(DominantScenario(Context(100, 0.5, 0.1, 5)), Scenario::kMeasureIncrement);
  EXPECT_EQ(DominantScenario(Context(300, 0.5, 0.1, 5)),
            Scenario::kOtherClusterGainsRow);
}

TEST(SensitivityTest, DominantScenarioAgreesWithExhaustiveMaximum) {
  Rng rng(21);
  const double eps = 0.8;
  const double delta = 1e-3;
  for (int i = 0; i < 1000; ++i) {
    SensitivityContext ctx;
    ctx.capacity = 2 + static_cast<int>(rng.UniformInt(2000));
    ctx.num_query_dims = 1 + static_cast<int>(rng.UniformInt(6));
    ctx.n_min = 10;
    ctx.sum_r = 0.1 + 50.0 * rng.Uniform01();
    ctx.r = std::min(ctx.sum_r, 1.0) * (0.01 + 0.99 * rng.Uniform01());
    ctx.p = ctx.r / ctx.sum_r;
    const double dr = 1.0 - std::pow(1.0 - 1.0 / ctx.capacity, ctx.num_query_dims);
    // Answers on both sides of the threshold.
    ctx.answer = ctx.sum_r / dr * (2.0 * rng.Uniform01());
    const double b = eps / (2.0 * std::log(2.0 / delta));
    const int k_max = 10 * KBound(b);
    const double s1 = testing::MaxDecayedLinear(ctx.answer * dr / ctx.r, b, k_max);
    const double s4 = testing::MaxDecayedLinear(1.0 / ctx.p, b, k_max);
    const Scenario expected =
        s1 > s4 ? Scenario::kOtherClusterGainsRow : Scenario::kMeasureIncrement;
    EXPECT_EQ(DominantScenario(ctx), expected) << "case " << i;
  }
}

TEST(SensitivityTest, BetaAndKBound) {
  const double beta = SmoothingBeta(0.8, 1e-3);
  EXPECT_NEAR(beta, 0.0526253, 1e-6);
  EXPECT_EQ(KBound(beta), 21);
  EXPECT_EQ(KBound(1e6), 2);
}

TEST(SensitivityTest, DecayedLinearNonIncreasingPastKBound) {
  for (double beta : {0.001, 0.01, 0.0526, 0.3, 1.0, 5.0}) {
    const int bound = KBound(beta);
    for (int k = bound; k < bound + 100; ++k) {
      EXPECT_GE(std::exp(-beta * k) * k, std::exp(-beta * (k + 1)) * (k + 1));
    }
  }
}

TEST(SensitivityTest, SmoothSensitivityOfLinearSeries) {
  // Scenario 4 with p = 1: LS^k = k, so S_LS = max_k k e^{-beta k}.
  SensitivityContext ctx = Context(0, 0.5, 1.0, 0.5);
  EXPECT_NEAR(*SmoothSensitivity(ctx, 0.8, 1e-3), 6.990539323760913, 1e-9);
  ctx.p = 0.25;
  EXPECT_NEAR(*SmoothSensitivity(ctx, 0.8, 1e-3), 4 * 6.990539323760913, 1e-8);
}

TEST(SensitivityTest, SmoothSensitivityScanToBoundIsEnough) {
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const double eps = 0.01 + 5.0 * rng.Uniform01();
    const double delta = std::pow(10.0, -1.0 - 8.0 * rng.Uniform01());
    SensitivityContext ctx = Context(500 * rng.Uniform01(), 0.3, 0.05, 4);
    const double b = SmoothingBeta(eps, delta);
    const double slope = DominantScenario(ctx) == Scenario::kMeasureIncrement
                             ? 1.0 / ctx.p
                             : ctx.answer * ctx.delta_r() / ctx.r;
    const double got = *SmoothSensitivity(ctx, eps, delta);
    EXPECT_GE(got * (1 + 1e-12), testing::MaxDecayedLinear(slope, b, 10 * KBound(b)));
    EXPECT_GE(got, LocalSensitivityAtDistance(DominantScenario(ctx), 1, ctx) *
                       std::exp(-b));
  }
}

TEST(SensitivityTest, SmoothSensitivityEqualsFullScanUpToTheBound) {
  Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    const double eps = std::pow(10.0, -4.0 + 5.0 * rng.Uniform01());
    const double delta = std::pow(10.0, -1.0 - 9.0 * rng.Uniform01());
    SensitivityContext ctx = Context(500 * rng.Uniform01(), 0.3, 0.05, 4);
    const double b = SmoothingBeta(eps, delta);
    const Scenario scenario = DominantScenario(ctx);
    double scan = 0.0;
    for (int k = 0; k <= KBound(b); ++k) {
      scan = std::max(scan, std::exp(-b * k) * LocalSensitivityAtDistance(scenario, k, ctx));
    }
    EXPECT_NEAR(*SmoothSensitivity(ctx, eps, delta), scan, 1e-12 * scan) << eps << " " << delta;
  }
}

TEST(SensitivityTest, SmoothSensitivityRejectsBadBudget) {
  SensitivityContext ctx = Context(1, 0.5, 0.5, 1);
  EXPECT_FALSE(SmoothSensitivity(ctx, 0.8, 1.0).ok());
  EXPECT_FALSE(SmoothSensitivity(ctx, 0.0, 1e-3).ok());
  ctx.p = 0.0;
  EXPECT_FALSE(SmoothSensitivity(ctx, 0.8, 1e-3).ok());
}

TEST(AccountantTest, SequentialTenThenRefuse) {
  Accountant acc = Accountant::Sequential({1.0, 1e-2});
  for (int i = 0; i < 10; ++i) ASSERT_TRUE(acc.Charge({0.1, 1e-4}).ok()) << i;
  absl::Status refused = acc.Charge({0.1, 1e-4});
  EXPECT_EQ(refused.code(), absl::StatusCode::kResourceExhausted);
  EXPECT_THAT(refused.message(), HasSubstr("remaining"));
  EXPECT_EQ(acc.num_charges(), 10);
}

TEST(AccountantTest, DeltaRefusal) {
  Accountant acc = Accountant::Sequential({100.0, 1e-3});
  EXPECT_TRUE(acc.Charge({0.1, 1e-3}).ok());
  EXPECT_EQ(acc.Charge({0.1, 1e-3}).code(), absl::StatusCode::kResourceExhausted);
  EXPECT_EQ(acc.consumed().delta, 1e-3);
}

TEST(AccountantTest, NoDriftOverLongSequences) {
  const BudgetSplit split;
  const QueryBudget q = QueryBudget::Split({1e-5, 0.0}, split);
  Accountant acc = Accountant::Sequential({1.0, 0.0});
  long double exact = 0.0L;
  for (int i = 0; i < 100'000; ++i) {
    ASSERT_TRUE(acc.Charge(q.total()).ok()) << i;
    exact += static_cast<long double>(q.epsilon_overview) + q.epsilon_sampling +
             q.epsilon_estimate;
  }
  EXPECT_NEAR(acc.consumed().epsilon, static_cast<double>(exact), 1e-12);
  EXPECT_EQ(acc.Charge(q.total()).code(), absl::StatusCode::kResourceExhausted);
}

TEST(AccountantTest, AdvancedCompositionValues) {
  const Budget one = AdvancedCompositionBudget(1.0, 1e-6, 1);
  EXPECT_DOUBLE_EQ(one.delta, 1e-6);
  EXPECT_NEAR(one.epsilon, 1.0 / (2.0 * std::sqrt(2.0 * std::log(1e6))), 1e-15);

  const Budget b = AdvancedCompositionBudget(1.0, 1e-6, 3101);
  EXPECT_NEAR(b.delta, 3.2247662e-10, 1e-16);
  EXPECT_NEAR(b.epsilon, 1.3580908e-3, 1e-9);
}

TEST(AccountantTest, AdvancedBeatsSequentialOnlyPastTheCrossover) {
  // eps_adv > xi/n  <=>  n > 8 ln(n / psi); at psi = 1e-6 that starts at 151.
  for (int64_t n = 2; n <= 100'000; ++n) {
    const double adv = AdvancedCompositionBudget(1.0, 1e-6, n).epsilon;
    EXPECT_EQ(adv > 1.0 / n, n >= 151) << n;
  }
}

TEST(AccountantTest, AdvancedModeCapsCountAndSize) {
  Accountant acc = Accountant::Advanced({1.0, 1e-6}, 3);
  const Budget cap = AdvancedCompositionBudget(1.0, 1e-6, 3);
  EXPECT_FALSE(acc.Charge({cap.epsilon * 1.01, cap.delta}).ok());
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(acc.Charge(cap).ok());
  EXPECT_EQ(acc.Charge(cap).code(), absl::StatusCode::kResourceExhausted);
}

TEST(BudgetTest, SplitDefaults) {
  const QueryBudget q = QueryBudget::Split({1.0, 1e-3}, BudgetSplit{});
  EXPECT_DOUBLE_EQ(q.epsilon_overview, 0.1);
  EXPECT_DOUBLE_EQ(q.epsilon_sampling, 0.1);
  EXPECT_DOUBLE_EQ(q.epsilon_estimate, 0.8);
  EXPECT_DOUBLE_EQ(q.delta, 1e-3);
  EXPECT_TRUE(BudgetSplit{}.Validate().ok());
  EXPECT_FALSE((BudgetSplit{0.5, 0.5, 0.5}).Validate().ok());
}

TEST(RngTest, DeterministicAndDerived) {
  Rng a(99);
  Rng b(99);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.NextU64(), b.NextU64());
  Rng c(99);
  EXPECT_NE(c.Derive(1).NextU64(), c.Derive(2).NextU64());
  for (int i = 0; i < 1000; ++i) EXPECT_LT(c.UniformInt(7), 7u);
}

}  // namespace
}  // namespace fedrange
