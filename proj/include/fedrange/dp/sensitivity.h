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

#ifndef FEDRANGE_DP_SENSITIVITY_H_
#define FEDRANGE_DP_SENSITIVITY_H_

#include "absl/status/statusor.h"

namespace fedrange {

// Upper bound on how much one added row moves a cluster's approximated
// proportion R: 1 - (1 - 1/S)^|D^Q|.
double DeltaR(int capacity, int num_query_dims);

// Sensitivity of the average proportion over the clusters touched by a query:
// max(DeltaR / N^min, 1 / (N^min + 1)).
double DeltaAvgR(int capacity, int num_query_dims, int n_min);

// Sensitivity of a single cluster's sampling probability: 1 / (N^min (N^min + 1)).
double DeltaP(int n_min);

// Neighbouring-database scenarios that bound the local sensitivity of the
// per-cluster estimator Q(C)/p. Only the two that can dominate are served.
enum class Scenario {
  // Another cluster in C^Q gained a matching row.
  kOtherClusterGainsRow = 1,
  // This cluster's Measure grew by one without a new row.
  kMeasureIncrement = 4,
};

// Inputs of the smooth-sensitivity computation for one sampled cluster.
struct SensitivityContext {
  int capacity = 1;        // agreed cluster capacity S
  int num_query_dims = 1;  // |D^Q|
  int n_min = 10;
  double r = 0.0;          // approximated proportion of this cluster
  double p = 1.0;          // its sampling probability
  double sum_r = 0.0;      // sum of R over C^Q
  double answer = 0.0;     // Q(C) evaluated on this cluster

  double delta_r() const { return DeltaR(capacity, num_query_dims); }
};

// LS^k for the given scenario: k * Q(C) * DeltaR / R, or k / p.
double LocalSensitivityAtDistance(Scenario scenario, int k,
                                  const SensitivityContext& ctx);

// Scenario 1 dominates iff Q(C) > sum_R / DeltaR; equality goes to scenario 4.
Scenario DominantScenario(const SensitivityContext& ctx);

// beta = epsilon / (2 ln(2 / delta)).
double SmoothingBeta(double epsilon, double delta);

// Distance past which e^{-beta k} * LS^k can only decrease:
// ceil(1 / (1 - e^{-beta})) + 1.
int KBound(double beta);

// max over k in [0, KBound(beta)] of e^{-beta k} * LS^k, evaluated on the
// dominant scenario only.
absl::StatusOr<double> SmoothSensitivity(const SensitivityContext& ctx,
                                         double epsilon, double delta);

}  // namespace fedrange

#endif  // FEDRANGE_DP_SENSITIVITY_H_
