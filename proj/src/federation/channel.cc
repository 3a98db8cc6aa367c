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

#include "fedrange/federation/channel.h"

#include <string>

namespace fedrange {

Message ReplyOrRefusal(const Message& request, const MessageHandler& handler) {
  absl::StatusOr<Message> reply = handler(request);
  if (reply.ok()) return *std::move(reply);
  return Message{request.query_id, RefusalPayload{reply.status().ToString()}};
}

absl::StatusOr<Message> InProcessChannel::Exchange(const Message& request,
                                                   absl::Duration /*timeout*/) {
  absl::StatusOr<std::string> sent = EncodeMessage(request);
  if (!sent.ok()) return sent.status();
  absl::StatusOr<Message> received = DecodeMessage(*sent);
  if (!received.ok()) return received.status();
  const Message reply = ReplyOrRefusal(*received, handler_);
  absl::StatusOr<std::string> back = EncodeMessage(reply);
  if (!back.ok()) return back.status();
  bytes_ += static_cast<int64_t>(sent->size() + back->size());
  return DecodeMessage(*back);
}

}  // namespace fedrange
