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

#include "fedrange/federation/aggregator.h"

#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "fedrange/dp/mechanisms.h"
#include "fedrange/dp/random.h"

namespace fedrange {

Aggregator::Aggregator(AggregatorConfig config, std::vector<ProviderLink> providers,
                       std::unique_ptr<MaxSensitivityProtocol> max_protocol)
    : config_(std::move(config)),
      providers_(std::move(providers)),
      max_protocol_(std::move(max_protocol)) {
  if (max_protocol_ == nullptr) {
    max_protocol_ = std::make_unique<UnmaskedMaxSensitivity>(config_.aggregator_secret);
  }
  if (config_.id_prefix.empty()) {
    config_.id_prefix = absl::StrFormat("%016x", MixSeed(config_.seed, 0x71));
  }
}

Message Aggregator::Refuse(const std::string& query_id, std::string reason) {
  return Message{query_id, RefusalPayload{std::move(reason)}};
}

absl::StatusOr<Message> Aggregator::Ask(ProviderLink& link, const Message& request,
                                        MessageType expected) {
  absl::StatusOr<std::string> body = EncodeMessage(request);
  if (!body.ok()) return body.status();
  trace_.wire.push_back(*std::move(body));
  absl::StatusOr<Message> reply = link.channel->Exchange(request, config_.timeout);
  if (!reply.ok()) {
    return absl::Status(reply.status().code(),
                        absl::StrCat("provider ", link.provider_id, ": ",
                                     reply.status().message()));
  }
  absl::StatusOr<std::string> reply_body = EncodeMessage(*reply);
  if (reply_body.ok()) trace_.wire.push_back(*std::move(reply_body));
  if (const auto* refusal = std::get_if<RefusalPayload>(&reply->payload)) {
    return absl::UnavailableError(
        absl::StrCat("provider ", link.provider_id, " refused: ", refusal->reason));
  }
  if (reply->query_id != request.query_id || reply->type() != expected) {
    return absl::InternalError(absl::StrCat(
        "provider ", link.provider_id, " replied ", MessageTypeName(reply->type()),
        " for '", reply->query_id, "'"));
  }
  trace_.transcript.push_back(*reply);
  return reply;
}

absl::StatusOr<Message> Aggregator::Run(const std::string& query_id,
                                        const QueryPayload& payload) {
  const Message query{query_id, payload};
  trace_.transcript.push_back(query);

  // Steps 1-3: every provider answers with its noisy summary.
  std::vector<ProviderSummary>& summaries = trace_.summaries;
  for (ProviderLink& link : providers_) {
    absl::StatusOr<Message> reply = Ask(link, query, MessageType::kSummary);
    if (!reply.ok()) return reply.status();
    const auto& s = std::get<SummaryPayload>(reply->payload);
    if (s.provider_id != link.provider_id) {
      return absl::InternalError(absl::StrCat("summary from provider ", s.provider_id,
                                              " on the link of ", link.provider_id));
    }
    summaries.push_back(ProviderSummary{s.provider_id, s.n_q_noisy, s.avg_r_noisy});
  }

  // Step 4: allocation from the noisy summaries only.
  absl::StatusOr<Allocation> allocation = SolveAllocation(summaries, payload.sample_rate);
  if (!allocation.ok()) return allocation.status();
  trace_.allocation = *allocation;

  // Steps 5-6: local estimates.
  const MessageType expected =
      config_.smc_mode ? MessageType::kSecureShare : MessageType::kResult;
  std::vector<int> ids;
  for (const ProviderLink& link : providers_) ids.push_back(link.provider_id);
  SecureSumSession session(ids);
  std::map<int, uint64_t> sensitivities;
  double plain_sum = 0.0;
  for (size_t i = 0; i < providers_.size(); ++i) {
    const Message request{
        query_id, AllocationPayload{providers_[i].provider_id, allocation->sample_sizes[i]}};
    trace_.transcript.push_back(request);
    absl::StatusOr<Message> reply = Ask(providers_[i], request, expected);
    if (!reply.ok()) return reply.status();
    if (config_.smc_mode) {
      const auto& share = std::get<SecureSharePayload>(reply->payload);
      if (share.provider_id != providers_[i].provider_id) {
        return absl::InternalError("secure share from the wrong provider");
      }
      if (absl::Status s = session.Add(share.provider_id, share.masked_value); !s.ok()) {
        return s;
      }
      sensitivities[share.provider_id] = share.masked_sensitivity;
    } else {
      plain_sum += std::get<ResultPayload>(reply->payload).dp_result;
    }
  }

  // Step 7: combine.
  AnswerPayload answer;
  answer.spent = payload.budget;
  answer.warning = allocation->warning;
  if (!config_.smc_mode) {
    answer.value = plain_sum;
  } else {
    absl::StatusOr<uint64_t> sum = session.Sum();
    if (!sum.ok()) return sum.status();
    absl::StatusOr<double> max_sensitivity = max_protocol_->Max(query_id, sensitivities);
    if (!max_sensitivity.ok()) return max_sensitivity.status();
    const QueryBudget budget = QueryBudget::Split(payload.budget, payload.split);
    Rng rng(MixSeed(config_.seed, HashString(query_id)));
    trace_.pre_noise_sum = DecodeFixedPoint(*sum);
    trace_.noise_scale = 2.0 * *max_sensitivity / budget.epsilon_estimate;
    absl::StatusOr<double> noisy = AddLaplaceNoise(trace_.pre_noise_sum, trace_.noise_scale, rng);
    if (!noisy.ok()) return noisy.status();
    ++noise_draws_;
    ++trace_.aggregator_noise_draws;
    answer.value = *noisy;
  }
  return Message{query_id, answer};
}

Message Aggregator::HandleQuery(const RangeQuery& query, double sample_rate,
                                const Budget& budget, Accountant& accountant) {
  std::lock_guard<std::mutex> lock(mu_);
  const absl::Time start = absl::Now();
  trace_ = QueryTrace();
  const std::string query_id = absl::StrCat(config_.id_prefix, "-", next_query_++);
  trace_.query_id = query_id;

  Message reply;
  if (!(sample_rate > 0.0 && sample_rate < 1.0)) {
    reply = Refuse(query_id, absl::StrCat("sample rate ", sample_rate, " outside (0, 1)"));
  } else if (providers_.empty()) {
    reply = Refuse(query_id, "no providers");
  } else if (absl::Status s = accountant.Charge(budget); !s.ok()) {
    reply = Refuse(query_id, s.ToString());
  } else {
    QueryPayload payload;
    payload.query = query;
    payload.sample_rate = sample_rate;
    payload.budget = budget;
    payload.split = config_.split;
    payload.smc_mode = config_.smc_mode;
    absl::StatusOr<Message> answer = Run(query_id, payload);
    reply = answer.ok() ? *std::move(answer)
                        : Refuse(query_id, absl::StrCat("query aborted: ",
                                                        answer.status().ToString()));
  }
  trace_.transcript.push_back(reply);
  if (absl::StatusOr<std::string> body = EncodeMessage(reply); body.ok()) {
    trace_.wire.push_back(*std::move(body));
  }
  trace_.elapsed = absl::Now() - start;
  return reply;
}

Accountant& AnalystFrontend::AccountantFor(const std::string& analyst) {
  std::unique_ptr<Accountant>& slot = accountants_[analyst];
  if (slot == nullptr) {
    slot = std::make_unique<Accountant>(
        policy_.mode == CompositionMode::kAdvanced
            ? Accountant::Advanced(policy_.total, policy_.planned_queries)
            : Accountant::Sequential(policy_.total));
  }
  return *slot;
}

Budget AnalystFrontend::Remaining(const std::string& analyst) {
  std::lock_guard<std::mutex> lock(mu_);
  return AccountantFor(analyst).remaining();
}

absl::StatusOr<Message> AnalystFrontend::Handle(const Message& request) {
  const auto* q = std::get_if<QueryPayload>(&request.payload);
  if (q == nullptr) {
    return absl::FailedPreconditionError(
        absl::StrCat("protocol error: analysts may only send QUERY, got ",
                     MessageTypeName(request.type())));
  }
  // Queries from one analyst are serialized through their accountant.
  std::lock_guard<std::mutex> lock(mu_);
  Accountant& accountant = AccountantFor(q->analyst);
  Message reply = aggregator_->HandleQuery(q->query, q->sample_rate, q->budget, accountant);
  // Analysts see their own request id, not the internal one.
  reply.query_id = request.query_id;
  return reply;
}

}  // namespace fedrange
