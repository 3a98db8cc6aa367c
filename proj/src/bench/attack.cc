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

#include "fedrange/bench/attack.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace fedrange {
namespace {

struct Dims {
  int sa = 0;
  int sa_size = 0;
  std::vector<int> qi;
  std::vector<int> qi_sizes;
};

absl::StatusOr<Dims> ResolveDims(const AttackConfig& config, const Schema& schema) {
  Dims dims;
  absl::StatusOr<int> sa = schema.IndexOf(config.sensitive);
  if (!sa.ok()) return sa.status();
  dims.sa = *sa;
  dims.sa_size = schema.dimensions[*sa].size();
  if (config.quasi_identifiers.empty()) {
    return absl::InvalidArgumentError("the attack needs at least one quasi-identifier");
  }
  for (const std::string& name : config.quasi_identifiers) {
    absl::StatusOr<int> d = schema.IndexOf(name);
    if (!d.ok()) return d.status();
    if (*d == dims.sa) {
      return absl::InvalidArgumentError(
          absl::StrCat("sensitive dimension ", name, " is also a quasi-identifier"));
    }
    if (std::find(dims.qi.begin(), dims.qi.end(), *d) != dims.qi.end()) {
      return absl::InvalidArgumentError(absl::StrCat("duplicate quasi-identifier ", name));
    }
    dims.qi.push_back(*d);
    dims.qi_sizes.push_back(schema.dimensions[*d].size());
  }
  return dims;
}

}  // namespace

absl::string_view AttackCompositionName(AttackComposition mode) {
  switch (mode) {
    case AttackComposition::kSequential:
      return "sequential";
    case AttackComposition::kAdvanced:
      return "advanced";
    case AttackComposition::kCoalition:
      return "coalition";
  }
  return "unknown";
}

absl::StatusOr<AttackComposition> ParseAttackComposition(absl::string_view name) {
  for (AttackComposition m : {AttackComposition::kSequential, AttackComposition::kAdvanced,
                              AttackComposition::kCoalition}) {
    if (name == AttackCompositionName(m)) return m;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown composition mode: ", name));
}

int64_t NbcQueryCount(int sensitive_domain, const std::vector<int>& qi_domains) {
  int64_t sum = 0;
  for (int d : qi_domains) sum += d;
  return 1 + static_cast<int64_t>(sensitive_domain) + sensitive_domain * sum;
}

Budget AttackQueryBudget(const AttackConfig& config, int64_t num_queries) {
  const double n = static_cast<double>(num_queries);
  switch (config.composition) {
    case AttackComposition::kSequential:
      return Budget{config.total.epsilon / n, config.total.delta / n};
    case AttackComposition::kAdvanced:
      return AdvancedCompositionBudget(config.total.epsilon, config.total.delta, num_queries);
    case AttackComposition::kCoalition:
      return config.total;
  }
  return config.total;
}

absl::StatusOr<AttackResult> RunNbcAttack(const AttackConfig& config,
                                          LocalFederation& federation,
                                          const CountOracle& oracle) {
  absl::StatusOr<Dims> resolved = ResolveDims(config, federation.schema());
  if (!resolved.ok()) return resolved.status();
  const Dims& dims = *resolved;
  const std::string& sa_name = federation.schema().dimensions[dims.sa].name;
  const int k = dims.sa_size;

  AttackResult result;
  result.num_queries = NbcQueryCount(k, dims.qi_sizes);
  result.random_guess = 1.0 / k;
  auto ask = [&](RangeQuery q) {
    q.aggregation = Aggregation::kCount;
    std::optional<double> a = oracle(q);
    if (a.has_value()) {
      ++result.answered;
    } else {
      ++result.refused;
    }
    return std::max(0.0, a.value_or(0.0));
  };

  RangeQuery size_query;
  size_query.ranges[sa_name] = {0, static_cast<Rank>(k - 1)};
  const double total = ask(size_query);

  std::vector<double> class_count(k);
  // cond[q][y * |d_q| + v] = count(SA = y, d_q = v).
  std::vector<std::vector<double>> cond(dims.qi.size());
  for (size_t q = 0; q < dims.qi.size(); ++q) cond[q].resize(k * dims.qi_sizes[q]);
  for (int y = 0; y < k; ++y) {
    RangeQuery cq;
    cq.ranges[sa_name] = {static_cast<Rank>(y), static_cast<Rank>(y)};
    class_count[y] = ask(cq);
  }
  for (int y = 0; y < k; ++y) {
    for (size_t q = 0; q < dims.qi.size(); ++q) {
      const std::string& qi_name = federation.schema().dimensions[dims.qi[q]].name;
      for (int v = 0; v < dims.qi_sizes[q]; ++v) {
        RangeQuery cq;
        cq.ranges[sa_name] = {static_cast<Rank>(y), static_cast<Rank>(y)};
        cq.ranges[qi_name] = {static_cast<Rank>(v), static_cast<Rank>(v)};
        cond[q][y * dims.qi_sizes[q] + v] = ask(cq);
      }
    }
  }

  // The denominator P(v) is shared by every class, so the argmax only needs
  // P(y) * prod P(v | y). Predictions depend on the quasi-identifier values
  // alone, so they are computed once per combination.
  std::vector<double> log_prior(k);
  for (int y = 0; y < k; ++y) log_prior[y] = std::log((class_count[y] + 1) / (total + k));
  int64_t combos = 1;
  for (int s : dims.qi_sizes) combos *= s;
  std::vector<int> prediction(combos);
  std::vector<int> values(dims.qi.size());
  for (int64_t c = 0; c < combos; ++c) {
    int64_t rest = c;
    for (size_t q = dims.qi.size(); q-- > 0;) {
      values[q] = static_cast<int>(rest % dims.qi_sizes[q]);
      rest /= dims.qi_sizes[q];
    }
    double best = -std::numeric_limits<double>::infinity();
    int best_y = 0;
    for (int y = 0; y < k; ++y) {
      double score = log_prior[y];
      for (size_t q = 0; q < dims.qi.size(); ++q) {
        score += std::log((cond[q][y * dims.qi_sizes[q] + values[q]] + 1) /
                          (class_count[y] + dims.qi_sizes[q]));
      }
      if (score > best) {
        best = score;
        best_y = y;
      }
    }
    prediction[c] = best_y;
  }

  for (int p = 0; p < federation.num_providers(); ++p) {
    for (const Cluster& cluster : federation.provider(p).store().clusters()) {
      for (size_t i = 0; i < cluster.size(); ++i) {
        const std::span<const Rank> row = cluster.row(i);
        int64_t c = 0;
        for (size_t q = 0; q < dims.qi.size(); ++q) c = c * dims.qi_sizes[q] + row[dims.qi[q]];
        ++result.predictions;
        if (prediction[c] == static_cast<int>(row[dims.sa])) ++result.correct;
      }
    }
  }
  if (result.predictions > 0) {
    result.accuracy =
        static_cast<double>(result.correct) / static_cast<double>(result.predictions);
  }
  return result;
}

absl::StatusOr<AttackResult> RunNbcAttack(const AttackConfig& config,
                                          LocalFederation& federation) {
  absl::StatusOr<Dims> dims = ResolveDims(config, federation.schema());
  if (!dims.ok()) return dims.status();
  const int64_t n = NbcQueryCount(dims->sa_size, dims->qi_sizes);
  const Budget per_query = AttackQueryBudget(config, n);
  Accountant accountant = config.composition == AttackComposition::kAdvanced
                              ? Accountant::Advanced(config.total, n)
                              : Accountant::Sequential(config.total);
  CountOracle oracle = [&](const RangeQuery& q) -> std::optional<double> {
    // Each coalition member has a fresh accountant of its own.
    Accountant member = Accountant::Sequential(config.total);
    Accountant& charged =
        config.composition == AttackComposition::kCoalition ? member : accountant;
    const Message reply = federation.Query(q, config.sample_rate, per_query, charged);
    if (const auto* answer = std::get_if<AnswerPayload>(&reply.payload)) return answer->value;
    return std::nullopt;
  };
  absl::StatusOr<AttackResult> result = RunNbcAttack(config, federation, oracle);
  if (result.ok()) result->per_query = per_query;
  return result;
}

absl::StatusOr<AttackResult> RunNbcAttackNoiseless(const AttackConfig& config,
                                                   LocalFederation& federation) {
  CountOracle oracle = [&](const RangeQuery& q) -> std::optional<double> {
    absl::StatusOr<double> exact = federation.ExactAnswer(q);
    if (!exact.ok()) return std::nullopt;
    return *exact;
  };
  absl::StatusOr<AttackResult> result = RunNbcAttack(config, federation, oracle);
  if (result.ok()) result->per_query = Budget{0.0, 0.0};
  return result;
}

}  // namespace fedrange
