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

#ifndef FEDRANGE_FEDERATION_MESSAGE_H_
#define FEDRANGE_FEDERATION_MESSAGE_H_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "fedrange/datamodel/query.h"
#include "fedrange/dp/accountant.h"

namespace fedrange {

enum class MessageType {
  kQuery,
  kSummary,
  kAllocation,
  kResult,
  kSecureShare,
  kAnswer,
  kRefusal,
};

absl::string_view MessageTypeName(MessageType type);

// Field-wise equality, used by the message round-trip tests.
inline bool operator==(const Budget& a, const Budget& b) {
  return a.epsilon == b.epsilon && a.delta == b.delta;
}
inline bool operator==(const BudgetSplit& a, const BudgetSplit& b) {
  return a.overview == b.overview && a.sampling == b.sampling &&
         a.estimate == b.estimate;
}

struct QueryPayload {
  RangeQuery query;
  double sample_rate = 0.2;
  Budget budget;
  BudgetSplit split;
  bool smc_mode = false;
  // Set by analysts talking to an aggregator; empty between nodes.
  std::string analyst;
  friend bool operator==(const QueryPayload&, const QueryPayload&) = default;
};

struct SummaryPayload {
  int provider_id = 0;
  int64_t n_q_noisy = 0;
  double avg_r_noisy = 0.0;
  friend bool operator==(const SummaryPayload&, const SummaryPayload&) = default;
};

struct AllocationPayload {
  int provider_id = 0;
  int64_t sample_size = 0;
  friend bool operator==(const AllocationPayload&, const AllocationPayload&) = default;
};

struct ResultPayload {
  int provider_id = 0;
  double dp_result = 0.0;
  friend bool operator==(const ResultPayload&, const ResultPayload&) = default;
};

struct SecureSharePayload {
  int provider_id = 0;
  uint64_t masked_value = 0;
  uint64_t masked_sensitivity = 0;
  friend bool operator==(const SecureSharePayload&, const SecureSharePayload&) = default;
};

struct AnswerPayload {
  double value = 0.0;
  Budget spent;
  std::string warning;
  friend bool operator==(const AnswerPayload&, const AnswerPayload&) = default;
};

struct RefusalPayload {
  std::string reason;
  friend bool operator==(const RefusalPayload&, const RefusalPayload&) = default;
};

using Payload = std::variant<QueryPayload, SummaryPayload, AllocationPayload,
                             ResultPayload, SecureSharePayload, AnswerPayload,
                             RefusalPayload>;

struct Message {
  std::string query_id;
  Payload payload;

  MessageType type() const { return static_cast<MessageType>(payload.index()); }
  friend bool operator==(const Message&, const Message&) = default;
};

// Serializes a message as one `key=value` line per field, starting with
// `type=`. Reals use the shortest round-trip decimal form. Fails on string
// fields that contain line breaks.
absl::StatusOr<std::string> EncodeMessage(const Message& message);

// Strict inverse of EncodeMessage: unknown, duplicate or missing fields and
// malformed numbers are InvalidArgument.
absl::StatusOr<Message> DecodeMessage(absl::string_view body);

// `<decimal length>\n<body>`.
std::string FrameBody(absl::string_view body);

// Splits one frame off the front of `buffer`, returning the body and erasing
// the frame. NotFound while the frame is still incomplete; InvalidArgument on
// a malformed length prefix.
absl::StatusOr<std::string> TakeFrame(std::string& buffer);

// The field names a message of `type` may carry on the wire.
const std::vector<std::string>& AllowedFields(MessageType type);

// Checks an encoded body against AllowedFields. Used to audit transcripts for
// anything beyond the documented payloads.
absl::Status CheckFieldsAllowed(absl::string_view body);

}  // namespace fedrange

#endif  // FEDRANGE_FEDERATION_MESSAGE_H_
