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

#include "fedrange/federation/tcp.h"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"

namespace fedrange {
namespace {

constexpr absl::Duration kPollSlice = absl::Milliseconds(100);

absl::Status Errno(absl::string_view what) {
  return absl::UnavailableError(absl::StrCat(what, ": ", std::strerror(errno)));
}

int PollMillis(absl::Time deadline) {
  const absl::Duration left = std::min(deadline - absl::Now(), kPollSlice);
  return std::max<int>(0, static_cast<int>(absl::ToInt64Milliseconds(left)));
}

// Waits until `fd` is ready for `events` or the deadline passes.
absl::Status WaitFor(int fd, short events, absl::Time deadline,
                     const std::atomic<bool>* stop = nullptr) {
  while (true) {
    if (stop != nullptr && stop->load()) return absl::CancelledError("stopping");
    if (absl::Now() >= deadline) return absl::DeadlineExceededError("timed out");
    pollfd p{fd, events, 0};
    const int n = ::poll(&p, 1, PollMillis(deadline));
    if (n < 0 && errno != EINTR) return Errno("poll");
    if (n > 0) {
      if (p.revents & (POLLERR | POLLNVAL)) return absl::UnavailableError("socket error");
      return absl::OkStatus();
    }
  }
}

absl::Status WriteAll(int fd, absl::string_view data, absl::Time deadline) {
  while (!data.empty()) {
    if (absl::Status s = WaitFor(fd, POLLOUT, deadline); !s.ok()) return s;
    const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      return Errno("send");
    }
    data.remove_prefix(static_cast<size_t>(n));
  }
  return absl::OkStatus();
}

// Reads until `buffer` holds a complete frame and returns its body.
absl::StatusOr<std::string> ReadFrame(int fd, std::string& buffer, absl::Time deadline,
                                      const std::atomic<bool>* stop = nullptr) {
  while (true) {
    absl::StatusOr<std::string> frame = TakeFrame(buffer);
    if (frame.ok() || !absl::IsNotFound(frame.status())) return frame;
    if (absl::Status s = WaitFor(fd, POLLIN, deadline, stop); !s.ok()) return s;
    char chunk[4096];
    const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n == 0) return absl::UnavailableError("connection closed");
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      return Errno("recv");
    }
    buffer.append(chunk, static_cast<size_t>(n));
  }
}

absl::StatusOr<int> Connect(const Endpoint& endpoint, absl::Time deadline) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* result = nullptr;
  const std::string port = absl::StrCat(endpoint.port);
  if (int rc = ::getaddrinfo(endpoint.host.c_str(), port.c_str(), &hints, &result); rc != 0) {
    return absl::UnavailableError(
        absl::StrCat("resolve ", endpoint.host, ": ", ::gai_strerror(rc)));
  }
  absl::Status last = absl::UnavailableError("no addresses");
  for (addrinfo* ai = result; ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_NONBLOCK, ai->ai_protocol);
    if (fd < 0) {
      last = Errno("socket");
      continue;
    }
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0 || errno == EINPROGRESS) {
      absl::Status s = WaitFor(fd, POLLOUT, deadline);
      int err = 0;
      socklen_t len = sizeof(err);
      if (s.ok() && ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len) == 0 && err == 0) {
        const int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
        ::freeaddrinfo(result);
        return fd;
      }
      last = s.ok() ? absl::UnavailableError(absl::StrCat("connect: ", std::strerror(err)))
                    : s;
    } else {
      last = Errno("connect");
    }
    ::close(fd);
  }
  ::freeaddrinfo(result);
  return absl::Status(last.code(), absl::StrCat("connect to ", endpoint.host, ":",
                                                endpoint.port, ": ", last.message()));
}

}  // namespace

absl::StatusOr<Endpoint> ParseEndpoint(absl::string_view text) {
  const size_t colon = text.rfind(':');
  Endpoint e;
  if (colon == absl::string_view::npos || colon == 0 ||
      !absl::SimpleAtoi(text.substr(colon + 1), &e.port) || e.port < 0 || e.port > 65535) {
    return absl::InvalidArgumentError(absl::StrCat("malformed endpoint '", text, "'"));
  }
  e.host = std::string(text.substr(0, colon));
  return e;
}

TcpChannel::~TcpChannel() { Close(); }

void TcpChannel::Close() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
  buffer_.clear();
}

absl::StatusOr<Message> TcpChannel::Exchange(const Message& request, absl::Duration timeout) {
  const absl::Time deadline = absl::Now() + timeout;
  absl::StatusOr<std::string> body = EncodeMessage(request);
  if (!body.ok()) return body.status();
  if (fd_ < 0) {
    absl::StatusOr<int> fd = Connect(endpoint_, deadline);
    if (!fd.ok()) return fd.status();
    fd_ = *fd;
  }
  absl::StatusOr<std::string> reply;
  if (absl::Status s = WriteAll(fd_, FrameBody(*body), deadline); !s.ok()) {
    reply = s;
  } else {
    reply = ReadFrame(fd_, buffer_, deadline);
  }
  if (!reply.ok()) {
    Close();
    return reply.status();
  }
  return DecodeMessage(*reply);
}

absl::StatusOr<std::unique_ptr<TcpServer>> TcpServer::Start(const Endpoint& listen,
                                                            MessageHandler handler) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* result = nullptr;
  const std::string port = absl::StrCat(listen.port);
  const char* host = listen.host.empty() ? nullptr : listen.host.c_str();
  if (int rc = ::getaddrinfo(host, port.c_str(), &hints, &result); rc != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("resolve ", listen.host, ": ", ::gai_strerror(rc)));
  }
  const int fd = ::socket(result->ai_family, result->ai_socktype | SOCK_NONBLOCK,
                          result->ai_protocol);
  if (fd < 0) {
    ::freeaddrinfo(result);
    return Errno("socket");
  }
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(fd, result->ai_addr, result->ai_addrlen) != 0 || ::listen(fd, 64) != 0) {
    absl::Status s = Errno(absl::StrCat("listen on ", listen.host, ":", listen.port));
    ::freeaddrinfo(result);
    ::close(fd);
    return s;
  }
  ::freeaddrinfo(result);
  sockaddr_storage addr{};
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  const int bound_port =
      addr.ss_family == AF_INET6
          ? ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port)
          : ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
  auto server =
      std::unique_ptr<TcpServer>(new TcpServer(fd, bound_port, std::move(handler)));
  server->acceptor_ = std::thread([s = server.get()] { s->AcceptLoop(); });
  return server;
}

TcpServer::TcpServer(int listen_fd, int port, MessageHandler handler)
    : listen_fd_(listen_fd), port_(port), handler_(std::move(handler)) {}

TcpServer::~TcpServer() { Stop(); }

void TcpServer::Stop() {
  if (stopping_.exchange(true)) {
    if (acceptor_.joinable()) acceptor_.join();
    return;
  }
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard<std::mutex> lock(mu_);
    workers.swap(workers_);
  }
  for (std::thread& t : workers) t.join();
  ::close(listen_fd_);
}

void TcpServer::Wait() {
  while (!stopping_.load()) absl::SleepFor(kPollSlice);
}

void TcpServer::AcceptLoop() {
  while (!stopping_.load()) {
    pollfd p{listen_fd_, POLLIN, 0};
    if (::poll(&p, 1, static_cast<int>(absl::ToInt64Milliseconds(kPollSlice))) <= 0) {
      continue;
    }
    const int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_NONBLOCK);
    if (fd < 0) continue;
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    std::lock_guard<std::mutex> lock(mu_);
    workers_.emplace_back([this, fd] { Serve(fd); });
  }
}

void TcpServer::Serve(int fd) {
  std::string buffer;
  while (!stopping_.load()) {
    absl::StatusOr<std::string> body =
        ReadFrame(fd, buffer, absl::InfiniteFuture(), &stopping_);
    if (!body.ok()) break;
    absl::StatusOr<Message> request = DecodeMessage(*body);
    Message reply = request.ok()
                        ? ReplyOrRefusal(*request, handler_)
                        : Message{"", RefusalPayload{request.status().ToString()}};
    absl::StatusOr<std::string> out = EncodeMessage(reply);
    if (!out.ok() ||
        !WriteAll(fd, FrameBody(*out), absl::Now() + absl::Seconds(30)).ok()) {
      break;
    }
  }
  ::close(fd);
}

}  // namespace fedrange
