// Copyright 2026 The CWM Arena Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "cwm/host/host.hpp"

namespace cwm::host {
namespace {

using Clock = std::chrono::steady_clock;

void write_all(int fd, const std::string& data) {
  std::size_t written = 0;
  while (written < data.size()) {
    const ssize_t n = ::write(fd, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw SessionDead(std::string("host pipe closed: ") + std::strerror(errno));
    }
    written += static_cast<std::size_t>(n);
  }
}

}  // namespace

HostSession::HostSession(HostConfig config) : config_(std::move(config)) {
  if (config_.argv.empty()) throw HostError("host command is empty");
  // A dead child must surface as an error on write, not kill this process.
  ::signal(SIGPIPE, SIG_IGN);
  spawn();
}

HostSession::~HostSession() {
  try {
    shutdown();
  } catch (...) {
  }
}

void HostSession::spawn() {
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0 || ::pipe2(out_pipe, O_CLOEXEC) != 0) {
    throw HostError(std::string("pipe failed: ") + std::strerror(errno));
  }
  const pid_t pid = ::fork();
  if (pid < 0) throw HostError(std::string("fork failed: ") + std::strerror(errno));
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    std::vector<char*> args;
    for (auto& a : config_.argv) args.push_back(a.data());
    args.push_back(nullptr);
    ::execvp(args[0], args.data());
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  buffer_.clear();
  poisoned_ = false;
}

void HostSession::kill_child() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, nullptr, 0);
  }
  pid_ = -1;
}

std::optional<std::string> HostSession::read_line(std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  while (true) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    if (remaining.count() <= 0) return std::nullopt;
    pollfd pfd{from_child_, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw SessionDead(std::string("poll failed: ") + std::strerror(errno));
    }
    if (rc == 0) return std::nullopt;
    char chunk[65536];
    const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw SessionDead(std::string("read failed: ") + std::strerror(errno));
    }
    if (n == 0) throw SessionDead("host process closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

Value HostSession::call(const std::string& op, const Value& args) {
  std::lock_guard<std::recursive_mutex> lock(mutex_);
  if (poisoned_ || pid_ <= 0) throw SessionDead("host session is not running; respawn required");
  const std::int64_t id = next_id_++;
  try {
    write_all(to_child_, encode_request(id, op, args) + "\n");
    const auto timeout = op == "load" ? std::max(config_.call_timeout, config_.startup_timeout) : config_.call_timeout;
    const auto line = read_line(timeout);
    if (!line) {
      poisoned_ = true;
      kill_child();
      throw HostTimeout("host call '" + op + "' exceeded " + std::to_string(timeout.count()) + " ms");
    }
    const Reply reply = decode_reply(*line);
    if (reply.id != id) {
      throw ProtocolDesync("reply id " + std::to_string(reply.id) + " does not match request id " +
                           std::to_string(id));
    }
    if (!reply.ok) {
      const std::string message = reply.error_type + ": " + reply.error_message;
      if (reply.error_type == "IllegalAction") throw IllegalAction(message, reply.error_trace);
      throw ModelFault(message, reply.error_trace);
    }
    return reply.value;
  } catch (const SessionDead&) {
    poisoned_ = true;
    kill_child();
    throw;
  } catch (const ProtocolDesync&) {
    poisoned_ = true;
    kill_child();
    throw;
  }
}

Value HostSession::load(const std::string& source) {
  std::lock_guard<std::recursive_mutex> lock(mutex_);
  loaded_source_ = source;
  return call("load", Value{{"source", source}});
}

bool HostSession::ping() {
  try {
    call("ping", Value::object());
    return true;
  } catch (const Error&) {
    return false;
  }
}

void HostSession::shutdown() {
  std::lock_guard<std::recursive_mutex> lock(mutex_);
  if (pid_ <= 0) return;
  if (!poisoned_) {
    try {
      write_all(to_child_, encode_request(next_id_++, "shutdown", Value::object()) + "\n");
      read_line(std::chrono::milliseconds(1000));
    } catch (const Error&) {
    }
  }
  kill_child();
}

void HostSession::respawn() {
  std::lock_guard<std::recursive_mutex> lock(mutex_);
  kill_child();
  spawn();
  if (loaded_source_) call("load", Value{{"source", *loaded_source_}});
}

}  // namespace cwm::host
