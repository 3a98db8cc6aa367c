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

#ifndef FEDRANGE_FEDERATION_AGGREGATOR_H_
#define FEDRANGE_FEDERATION_AGGREGATOR_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/time/time.h"
#include "fedrange/allocation/allocation.h"
#include "fedrange/datamodel/query.h"
#include "fedrange/dp/accountant.h"
#include "fedrange/federation/channel.h"
#include "fedrange/federation/message.h"
#include "fedrange/federation/secure_sum.h"

namespace fedrange {

struct AggregatorConfig {
  bool smc_mode = false;
  // Sent with every QUERY so all providers split the budget the same way.
  BudgetSplit split;
  // Per provider exchange.
  absl::Duration timeout = absl::Seconds(30);
  uint64_t seed = 1;
  // Distinguishes query ids across aggregator runs; derived from the seed
  // when empty.
  std::string id_prefix;
  // Shared with every provider; keys the sensitivity pads.
  std::string aggregator_secret = "fedrange-aggregator";
};

// What happened during the most recent query.
struct QueryTrace {
  std::string query_id;
  // Logical messages in protocol order: the broadcast QUERY once, then per
  // provider SUMMARY, ALLOCATION and RESULT (or SECURE_SHARE), then the
  // ANSWER or REFUSAL.
  std::vector<Message> transcript;
  // Encoded form of every message the aggregator sent or received.
  std::vector<std::string> wire;
  std::vector<ProviderSummary> summaries;
  Allocation allocation;
  // Laplace draws the aggregator itself applied (SMC mode only).
  int64_t aggregator_noise_draws = 0;
  // SMC mode: the unmasked sum before noise and the Laplace scale applied.
  double pre_noise_sum = 0.0;
  double noise_scale = 0.0;
  absl::Duration elapsed;
};

// Runs the query lifecycle against a fixed set of providers. Queries are
// served one at a time.
class Aggregator {
 public:
  struct ProviderLink {
    int provider_id;
    std::unique_ptr<Channel> channel;
  };

  // `max_protocol` defaults to UnmaskedMaxSensitivity keyed by the config.
  Aggregator(AggregatorConfig config, std::vector<ProviderLink> providers,
             std::unique_ptr<MaxSensitivityProtocol> max_protocol = nullptr);

  // Charges `accountant` first, then contacts the providers. Returns ANSWER,
  // or REFUSAL when the request is malformed, the budget is exhausted or any
  // provider fails. A refusal after the charge keeps the charge.
  Message HandleQuery(const RangeQuery& query, double sample_rate, const Budget& budget,
                      Accountant& accountant);

  const QueryTrace& last_trace() const { return trace_; }
  int64_t noise_draws() const { return noise_draws_; }
  int num_providers() const { return static_cast<int>(providers_.size()); }
  const AggregatorConfig& config() const { return config_; }

 private:
  Message Refuse(const std::string& query_id, std::string reason);
  absl::StatusOr<Message> Ask(ProviderLink& link, const Message& request,
                              MessageType expected);
  absl::StatusOr<Message> Run(const std::string& query_id, const QueryPayload& payload);

  AggregatorConfig config_;
  std::vector<ProviderLink> providers_;
  std::unique_ptr<MaxSensitivityProtocol> max_protocol_;
  std::mutex mu_;
  int64_t next_query_ = 0;
  int64_t noise_draws_ = 0;
  QueryTrace trace_;
};

// How a fresh analyst's accountant is configured.
struct AnalystPolicy {
  Budget total{1.0, 1e-6};
  CompositionMode mode = CompositionMode::kSequential;
  // Planned query count for advanced composition.
  int64_t planned_queries = 1;
};

// Front door for analysts: keeps one accountant per analyst name and turns
// QUERY requests into ANSWER or REFUSAL replies.
class AnalystFrontend {
 public:
  AnalystFrontend(Aggregator* aggregator, AnalystPolicy policy)
      : aggregator_(aggregator), policy_(policy) {}

  absl::StatusOr<Message> Handle(const Message& request);
  // Remaining budget of `analyst`, or the full policy budget if unseen.
  Budget Remaining(const std::string& analyst);

 private:
  Accountant& AccountantFor(const std::string& analyst);

  Aggregator* aggregator_;
  AnalystPolicy policy_;
  std::mutex mu_;
  std::map<std::string, std::unique_ptr<Accountant>> accountants_;
};

}  // namespace fedrange

#endif  // FEDRANGE_FEDERATION_AGGREGATOR_H_
