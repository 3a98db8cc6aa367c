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

// Acceptance suite: one PASS or FAIL line per criterion. Exits non-zero when
// any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/time/clock.h"
#include "fedrange/allocation/allocation.h"
#include "fedrange/bench/attack.h"
#include "fedrange/bench/datagen.h"
#include "fedrange/bench/workload.h"
#include "fedrange/dp/random.h"
#include "fedrange/dp/sensitivity.h"
#include "fedrange/federation/secure_sum.h"
#include "fedrange/sampling/sampling.h"
#include "testing/oracles.h"

namespace fedrange {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;
  std::function<Outcome()> run;
};

// ------------------------------------------------------------ 1. estimator

Outcome EstimatorUnbiased() {
  const std::vector<double> q = {12, 40, 7, 55, 23, 3, 31, 18};
  const std::vector<double> r = {0.15, 0.4, 0.05, 0.5, 0.2, 0.05, 0.3, 0.2};
  // Exact pps probabilities, independent of the library.
  const double sum_r = std::accumulate(r.begin(), r.end(), 0.0);
  std::vector<double> p;
  for (double x : r) p.push_back(x / sum_r);
  Rng rng(101);
  constexpr int kRuns = 100'000;
  double total = 0;
  for (int i = 0; i < kRuns; ++i) {
    const size_t pos = PpsSampling(p, 1, rng, Replacement::kWith)->positions[0];
    total += *HansenHurwitz(std::vector<double>{q[pos]}, std::vector<double>{p[pos]});
  }
  const double truth = std::accumulate(q.begin(), q.end(), 0.0);
  const double rel = std::fabs(total / kRuns - truth) / truth;
  return {rel <= 0.01, absl::StrFormat("mean %.3f vs sum %.0f, relative gap %.4f (limit 0.01)",
                                       total / kRuns, truth, rel)};
}

// ------------------------------------------------------------ 2. EM draws

Outcome EmFidelity() {
  Rng rng(202);
  double worst = 0;
  for (int size : {2, 3, 5, 8, 10}) {
    std::vector<double> w(size);
    for (double& x : w) x = 0.05 + rng.Uniform01();
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= sum;
    const double eps = 0.2 + 2.0 * rng.Uniform01();
    const double dp = DeltaP(10);
    constexpr int kRuns = 100'000;
    std::vector<double> freq(size);
    for (int i = 0; i < kRuns; ++i) freq[EmSampling(w, 1, eps, dp, rng)->positions[0]] += 1;
    for (double& f : freq) f /= kRuns;
    worst = std::max(worst,
                     testing::TotalVariation(freq, testing::SoftmaxOracle(w, eps / (2 * dp))));
  }
  return {worst <= 0.02,
          absl::StrFormat("worst total variation %.4f over |C^Q| in {2,3,5,8,10} (limit 0.02)",
                          worst)};
}

// ------------------------------------------------------------ 3. sensitivity

Outcome SensitivityOracles() {
  Rng rng(303);
  int violations = 0, checked_r = 0, checked_avg = 0;
  while (checked_r < 500 || checked_avg < 500) {
    const int capacity = 2 + static_cast<int>(rng.UniformInt(19));  // 2..20
    const int dims = 1 + static_cast<int>(rng.UniformInt(3));
    const int domain = 2 + static_cast<int>(rng.UniformInt(4));  // 2..5
    if (checked_r < 500) {
      const int rows = 1 + static_cast<int>(rng.UniformInt(capacity - 1));
      const testing::ToyRows toy = testing::RandomToyRows(rows, dims, domain, rng);
      const int qd = 1 + static_cast<int>(rng.UniformInt(dims));
      if (testing::MaxProportionChange(toy, capacity, dims, domain, qd) >
          DeltaR(capacity, qd) + 1e-12) {
        ++violations;
      }
      ++checked_r;
    }
    if (checked_avg < 500) {
      const int num_clusters = 1 + static_cast<int>(rng.UniformInt(3));
      std::vector<testing::ToyRows> clusters;
      for (int c = 0; c < num_clusters; ++c) {
        clusters.push_back(testing::RandomToyRows(
            1 + static_cast<int>(rng.UniformInt(capacity)), dims, domain, rng));
      }
      std::vector<testing::ToyRange> ranges(dims);
      for (auto& range : ranges) {
        const int a = static_cast<int>(rng.UniformInt(domain));
        const int b = static_cast<int>(rng.UniformInt(domain));
        range = {std::min(a, b), std::max(a, b)};
      }
      const testing::AvgChangeResult res =
          testing::MaxAvgProportionChange(clusters, capacity, dims, domain, ranges);
      if (res.n_q >= 1 && res.n_q <= 3) {
        if (res.max_change > DeltaAvgR(capacity, dims, res.n_q) + 1e-12) ++violations;
        ++checked_avg;
      }
    }
  }
  return {violations == 0,
          absl::StrFormat("%d violations over %d delta_R and %d delta_avg_R instances",
                          violations, checked_r, checked_avg)};
}

// ------------------------------------------------------------ 4. scenario

SensitivityContext RandomContext(Rng& rng) {
  SensitivityContext ctx;
  ctx.capacity = 2 + static_cast<int>(rng.UniformInt(2000));
  ctx.num_query_dims = 1 + static_cast<int>(rng.UniformInt(6));
  ctx.n_min = 10;
  ctx.sum_r = 0.1 + 50.0 * rng.Uniform01();
  ctx.r = std::min(ctx.sum_r, 1.0) * (0.01 + 0.99 * rng.Uniform01());
  ctx.p = ctx.r / ctx.sum_r;
  const double dr = 1.0 - std::pow(1.0 - 1.0 / ctx.capacity, ctx.num_query_dims);
  ctx.answer = ctx.sum_r / dr * (2.0 * rng.Uniform01());
  return ctx;
}

Outcome DominantScenarioTheorem() {
  Rng rng(404);
  int agree = 0;
  constexpr int kCases = 1000;
  for (int i = 0; i < kCases; ++i) {
    const SensitivityContext ctx = RandomContext(rng);
    const double eps = 0.05 + 3.0 * rng.Uniform01();
    const double delta = std::pow(10.0, -2.0 - 6.0 * rng.Uniform01());
    const double b = eps / (2.0 * std::log(2.0 / delta));
    const int k_max = 10 * static_cast<int>(std::ceil(1.0 / (1.0 - std::exp(-b))) + 1);
    const double dr = 1.0 - std::pow(1.0 - 1.0 / ctx.capacity, ctx.num_query_dims);
    const double s1 = testing::MaxDecayedLinear(ctx.answer * dr / ctx.r, b, k_max);
    const double s4 = testing::MaxDecayedLinear(1.0 / ctx.p, b, k_max);
    const Scenario best = s1 > s4 ? Scenario::kOtherClusterGainsRow : Scenario::kMeasureIncrement;
    if (DominantScenario(ctx) == best) ++agree;
  }
  return {agree == kCases, absl::StrFormat("%d of %d contexts agree", agree, kCases)};
}

// ------------------------------------------------------------ 5. k bound

Outcome KBoundTermination() {
  Rng rng(505);
  int exceed = 0;
  for (int i = 0; i < 100; ++i) {
    const double eps = 0.01 + 5.0 * rng.Uniform01();
    const double delta = std::pow(10.0, -1.0 - 9.0 * rng.Uniform01());
    const double b = SmoothingBeta(eps, delta);
    const int bound = KBound(b);
    SensitivityContext ctx = RandomContext(rng);
    const double slope = DominantScenario(ctx) == Scenario::kMeasureIncrement
                             ? 1.0 / ctx.p
                             : ctx.answer * ctx.delta_r() / ctx.r;
    const double within = testing::MaxDecayedLinear(slope, b, bound);
    const double beyond = testing::MaxDecayedLinear(slope, b, 10 * bound);
    const double smooth = *SmoothSensitivity(ctx, eps, delta);
    if (beyond > within * (1 + 1e-12) || std::fabs(smooth - within) > 1e-9 * within) ++exceed;
  }
  return {exceed == 0,
          absl::StrFormat("%d of 100 (epsilon, delta) pairs found a larger value past the bound",
                          exceed)};
}

// ------------------------------------------------------------ 6. allocation

Outcome AllocationOptimality() {
  Rng rng(606);
  int mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng.UniformInt(4));
    std::vector<ProviderSummary> s;
    for (int i = 0; i < n; ++i) {
      s.push_back({i, static_cast<int64_t>(rng.UniformInt(13)),
                   std::round(rng.Uniform01() * 20) / 20});
    }
    const double sr = 0.05 + 0.9 * rng.Uniform01();
    const Allocation a = *SolveAllocation(s, sr);
    if (std::fabs(AllocationObjective(s, a.sample_sizes) -
                  testing::BruteForceAllocationObjective(s, sr)) > 1e-9) {
      ++mismatches;
    }
  }
  return {mismatches == 0, absl::StrFormat("%d of 500 instances differ from the exhaustive optimum",
                                           mismatches)};
}

// ------------------------------------------------------------ 7 and 8. Adult

std::unique_ptr<LocalFederation> AdultFederation() {
  FederationOptions o;
  o.seed = 77;
  return *AdultLikeFederation(o);
}

MetricsReport AdultWorkload(LocalFederation& fed, int n, double sr, uint64_t seed) {
  WorkloadSpec spec;
  spec.m = 50;
  spec.n = n;
  spec.sample_rate = sr;
  spec.seed = seed;
  const std::vector<RangeQuery> queries =
      *GenerateWorkload(spec, fed.schema(), ApproximationFilter(fed));
  const Budget per_query{1.0, 1e-3};
  Accountant accountant = Accountant::Sequential({50.0, 0.05 + 1e-9});
  LocalTarget target(&fed, &accountant);
  return RunWorkload(queries, sr, per_query, target, BaselineOf(fed), "plain", &fed);
}

Outcome EndToEndAccuracy() {
  auto fed = AdultFederation();
  const MetricsReport two = AdultWorkload(*fed, 2, 0.2, 7);
  const MetricsReport five = AdultWorkload(*fed, 5, 0.2, 7);
  const double e2 = two.mean_relative_error();
  const double e5 = five.mean_relative_error();
  const bool pass = two.refused() == 0 && five.refused() == 0 && e2 <= 0.05 && e5 > e2;
  return {pass, absl::StrFormat("mean relative error n=2: %.4f (limit 0.05), n=5: %.4f; "
                                "refused %d/%d; %d clusters",
                                e2, e5, two.refused(), five.refused(), fed->TotalClusters())};
}

Outcome SpeedUp() {
  auto fed = AdultFederation();
  const MetricsReport m = AdultWorkload(*fed, 2, 0.05, 8);
  const int providers = fed->num_providers();
  const double clusters_per_provider = static_cast<double>(fed->TotalClusters()) / providers;
  const double bound = 0.05 * clusters_per_provider + fed->provider(0).n_min();
  int approximated = 0;
  double reads = 0, full_ms = 0, fed_ms = 0;
  int64_t max_provider_reads = 0;
  for (const QueryRecord& r : m.records) {
    if (!r.answer.has_value()) continue;
    full_ms += r.full_scan_ms;
    fed_ms += r.federated_ms;
    if (!r.approximated.value_or(false)) continue;
    ++approximated;
    reads += static_cast<double>(r.cluster_reads) / providers;
    for (int64_t pr : r.provider_reads) max_provider_reads = std::max(max_provider_reads, pr);
  }
  const double mean_reads = approximated > 0 ? reads / approximated : 0.0;
  const double speedup = fed_ms > 0 ? full_ms / fed_ms : 0.0;
  const bool pass = approximated > 0 && mean_reads <= bound && speedup >= 2.0;
  return {pass,
          absl::StrFormat("%d approximated queries; mean reads per provider %.2f (bound %.2f, "
                          "largest single provider %d); speed-up %.2fx (limit 2x)",
                          approximated, mean_reads, bound, max_provider_reads, speedup)};
}

// ------------------------------------------------------------ 9. accounting

Outcome PrivacyAccounting() {
  std::string detail;
  bool pass = true;
  for (bool smc : {false, true}) {
    FederationOptions o;
    o.smc_mode = smc;
    o.seed = 9;
    auto fed = *AdultLikeFederation(o, 4, 40'000, 3);
    WorkloadSpec spec;
    spec.m = 11;
    spec.n = 2;
    const std::vector<RangeQuery> queries =
        *GenerateWorkload(spec, fed->schema(), ApproximationFilter(*fed));
    Accountant analyst = Accountant::Sequential({1.0, 1e-3});
    int answers = 0;
    bool refused_last = false, counters_ok = true;
    for (int i = 0; i < 11; ++i) {
      const int64_t provider_before = fed->TotalResultNoiseDraws();
      const int64_t aggregator_before = fed->aggregator().noise_draws();
      const Message reply = fed->Query(queries[i], 0.2, {0.1, 1e-5}, analyst);
      const int64_t provider_draws = fed->TotalResultNoiseDraws() - provider_before;
      const int64_t aggregator_draws = fed->aggregator().noise_draws() - aggregator_before;
      if (reply.type() == MessageType::kAnswer) {
        ++answers;
        if (smc) {
          counters_ok &= provider_draws == 0 && aggregator_draws == 1;
        } else {
          counters_ok &= provider_draws == fed->num_providers() && aggregator_draws == 0;
        }
      } else {
        refused_last = i == 10;
        counters_ok &= provider_draws == 0 && aggregator_draws == 0;
      }
    }
    const bool ok = answers == 10 && refused_last && counters_ok;
    pass &= ok;
    absl::StrAppend(&detail, detail.empty() ? "" : "; ", smc ? "smc" : "plain", ": ", answers,
                    " answers then ", refused_last ? "REFUSAL" : "no refusal",
                    counters_ok ? ", noise counters as expected" : ", noise counters WRONG");
  }
  return {pass, detail};
}

// ------------------------------------------------------------ 10. secure sum

Outcome SecureSumExactness() {
  Rng rng(1010);
  const std::vector<int> parties = {0, 1, 2, 3};
  int mismatches = 0;
  for (int session = 0; session < 10'000; ++session) {
    const PairwiseMasker masker(absl::StrCat("secret-", rng.NextU64()));
    const std::string id = absl::StrCat("s", session);
    SecureSumSession sum(parties);
    int64_t plain = 0;
    for (int p : parties) {
      const double v = (rng.Uniform01() - 0.5) * std::ldexp(1.0, 30);
      const uint64_t encoded = *EncodeFixedPoint(v);
      plain += static_cast<int64_t>(std::llround(std::ldexp(v, kFixedPointFractionBits)));
      if (!sum.Add(p, masker.Mask(p, parties, id, encoded)).ok()) ++mismatches;
    }
    const uint64_t got = *sum.Sum();
    if (got != static_cast<uint64_t>(plain) ||
        DecodeFixedPoint(got) != std::ldexp(static_cast<double>(plain), -kFixedPointFractionBits)) {
      ++mismatches;
    }
  }
  return {mismatches == 0,
          absl::StrFormat("%d of 10000 four-party sessions differ from the plaintext sum",
                          mismatches)};
}

// ------------------------------------------------------------ 11. attack

Outcome AttackResilience() {
  auto fed = AdultFederation();
  AttackConfig config;
  config.quasi_identifiers = {"workclass", "marital", "education"};
  config.sensitive = "hours";
  std::string detail;
  double worst = 0;
  bool pass = true;
  for (AttackComposition mode : {AttackComposition::kSequential, AttackComposition::kAdvanced}) {
    for (double xi : {1.0, 100.0}) {
      config.composition = mode;
      config.total = {xi, 1e-6};
      const AttackResult r = *RunNbcAttack(config, *fed);
      worst = std::max(worst, r.accuracy);
      pass &= r.accuracy <= 0.02 && r.refused == 0;
      absl::StrAppend(&detail, AttackCompositionName(mode), " xi=", xi, ": ",
                      absl::StrFormat("%.4f", r.accuracy), r.refused ? " (refusals)" : "", "; ");
    }
  }
  const AttackResult oracle = *RunNbcAttackNoiseless(config, *fed);
  pass &= oracle.accuracy > worst;
  absl::StrAppend(&detail, absl::StrFormat("noiseless oracle: %.4f (limit 0.02, random 0.01)",
                                           oracle.accuracy));
  return {pass, detail};
}

int Main() {
  const std::vector<Criterion> criteria = {
      {1, "estimator correctness", 10, EstimatorUnbiased},
      {2, "EM distribution fidelity", 30, EmFidelity},
      {3, "sensitivity oracles", 60, SensitivityOracles},
      {4, "dominant scenario", 10, DominantScenarioTheorem},
      {5, "k-bound termination", 10, KBoundTermination},
      {6, "allocation optimality", 30, AllocationOptimality},
      {7, "end-to-end accuracy", 600, EndToEndAccuracy},
      {8, "speed-up", 600, SpeedUp},
      {9, "privacy accounting", 60, PrivacyAccounting},
      {10, "secure sum exactness", 10, SecureSumExactness},
      {11, "attack resilience", 900, AttackResilience},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const absl::Time start = absl::Now();
    const Outcome o = c.run();
    const double seconds = absl::ToDoubleSeconds(absl::Now() - start);
    const bool pass = o.pass && seconds <= c.time_limit_s;
    if (!pass) ++failures;
    std::printf("%s [%2d] %s: %s (%.1f s, limit %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), seconds, c.time_limit_s);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace fedrange

int main() { return fedrange::Main(); }
