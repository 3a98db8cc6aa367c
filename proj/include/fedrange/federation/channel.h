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

#ifndef FEDRANGE_FEDERATION_CHANNEL_H_
#define FEDRANGE_FEDERATION_CHANNEL_H_

#include <functional>

#include "absl/status/statusor.h"
#include "absl/time/time.h"
#include "fedrange/federation/message.h"
#include "fedrange/federation/provider.h"

namespace fedrange {

// A request/response link from the aggregator to one provider (or from an
// analyst to the aggregator).
class Channel {
 public:
  virtual ~Channel() = default;
  // DeadlineExceeded when no reply arrives within `timeout`. A REFUSAL reply
  // is returned as a message, not as an error.
  virtual absl::StatusOr<Message> Exchange(const Message& request,
                                           absl::Duration timeout) = 0;
};

// Reply function of a node: maps one request to one reply.
using MessageHandler = std::function<absl::StatusOr<Message>(const Message&)>;

// Wraps handler errors into a REFUSAL carrying the status text, so every
// request gets exactly one reply on the wire.
Message ReplyOrRefusal(const Message& request, const MessageHandler& handler);

// Calls a handler in the same process. Both directions pass through
// EncodeMessage / DecodeMessage so in-process runs exercise the wire format.
class InProcessChannel : public Channel {
 public:
  explicit InProcessChannel(MessageHandler handler) : handler_(std::move(handler)) {}
  // Convenience for a provider node that outlives the channel.
  explicit InProcessChannel(ProviderNode* node)
      : handler_([node](const Message& m) { return node->Handle(m); }) {}

  absl::StatusOr<Message> Exchange(const Message& request, absl::Duration timeout) override;

  // Total encoded bytes sent and received.
  int64_t bytes_transferred() const { return bytes_; }

 private:
  MessageHandler handler_;
  int64_t bytes_ = 0;
};

}  // namespace fedrange

#endif  // FEDRANGE_FEDERATION_CHANNEL_H_
