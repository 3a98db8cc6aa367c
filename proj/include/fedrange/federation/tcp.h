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

#ifndef FEDRANGE_FEDERATION_TCP_H_
#define FEDRANGE_FEDERATION_TCP_H_

#include <atomic>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/time/time.h"
#include "fedrange/federation/channel.h"

namespace fedrange {

struct Endpoint {
  std::string host;
  int port = 0;
};

// "host:port"; the port must be in [0, 65535].
absl::StatusOr<Endpoint> ParseEndpoint(absl::string_view text);

// A Channel over one TCP connection, opened on first use and reopened after
// any transport error.
class TcpChannel : public Channel {
 public:
  explicit TcpChannel(Endpoint endpoint) : endpoint_(std::move(endpoint)) {}
  ~TcpChannel() override;
  TcpChannel(const TcpChannel&) = delete;
  TcpChannel& operator=(const TcpChannel&) = delete;

  absl::StatusOr<Message> Exchange(const Message& request, absl::Duration timeout) override;

 private:
  void Close();

  Endpoint endpoint_;
  int fd_ = -1;
  std::string buffer_;
};

// Serves framed messages on a listening socket, one thread per connection.
// Each request gets exactly one reply (handler errors become REFUSAL).
class TcpServer {
 public:
  // Port 0 picks a free port; see port().
  static absl::StatusOr<std::unique_ptr<TcpServer>> Start(const Endpoint& listen,
                                                          MessageHandler handler);
  ~TcpServer();
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  int port() const { return port_; }
  // Stops accepting, closes connections and joins all threads.
  void Stop();
  // Blocks until Stop() is called from another thread.
  void Wait();

 private:
  TcpServer(int listen_fd, int port, MessageHandler handler);
  void AcceptLoop();
  void Serve(int fd);

  int listen_fd_;
  int port_;
  MessageHandler handler_;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;
  std::mutex mu_;
  std::vector<std::thread> workers_;
};

}  // namespace fedrange

#endif  // FEDRANGE_FEDERATION_TCP_H_
