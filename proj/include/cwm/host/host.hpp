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

#ifndef CWM_HOST_HOST_HPP_
#define CWM_HOST_HOST_HPP_

#include <sys/types.h>

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cwm/core/errors.hpp"
#include "cwm/core/world_model.hpp"

namespace cwm::host {

class HostError : public Error {
 public:
  using Error::Error;
};
// The child exited or its pipes closed.
class SessionDead : public HostError {
 public:
  using HostError::HostError;
};
// No reply within the per-call limit; the child is killed.
class HostTimeout : public HostError {
 public:
  using HostError::HostError;
};
// A reply that is malformed or carries the wrong id.
class ProtocolDesync : public HostError {
 public:
  using HostError::HostError;
};

// Wire format: one canonical request object per line,
//   {"id": n, "op": "...", "args": {...}}
// answered by exactly one reply line, in order,
//   {"id": n, "ok": true, "value": ...}
//   {"id": n, "ok": false, "error": {"type", "message", "trace"}}
std::string encode_request(std::int64_t id, const std::string& op, const Value& args);

struct Reply {
  std::int64_t id = 0;
  bool ok = false;
  Value value;
  std::string error_type;
  std::string error_message;
  std::string error_trace;
};

// Throws ProtocolDesync on malformed text.
Reply decode_reply(const std::string& line);
std::string encode_reply(const Reply& reply);

struct HostConfig {
  std::vector<std::string> argv;  // host executable and its flags
  std::chrono::milliseconds call_timeout{5000};
  std::chrono::milliseconds startup_timeout{10000};
};

// One child process serving the wire protocol over its stdin/stdout.
// Requests are serialized; a session is used from one thread at a time.
class HostSession {
 public:
  explicit HostSession(HostConfig config);
  ~HostSession();
  HostSession(const HostSession&) = delete;
  HostSession& operator=(const HostSession&) = delete;

  // Sends a request and waits for its reply. Candidate errors come back as
  // ModelFault (IllegalAction for illegal actions); transport problems as
  // HostError. A timeout or dead child poisons the session until respawn().
  Value call(const std::string& op, const Value& args);

  // Loads candidate source; remembered so respawn() can reload it. The reply
  // lists the optional functions the source defines, e.g.
  // {"resample_history": true, "resample_state": false, "value_function": false}.
  Value load(const std::string& source);
  bool ping();
  void shutdown();
  // Restarts the child and reloads the last loaded source.
  void respawn();

  bool alive() const { return pid_ > 0 && !poisoned_; }
  pid_t pid() const { return pid_; }
  std::int64_t calls() const { return next_id_; }

 private:
  void spawn();
  void kill_child();
  std::optional<std::string> read_line(std::chrono::milliseconds timeout);

  HostConfig config_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  std::int64_t next_id_ = 0;
  bool poisoned_ = false;
  std::optional<std::string> loaded_source_;
  std::recursive_mutex mutex_;
};

// The six-function API served by a host session. States are plain value
// trees. The static initial state is supplied by the caller.
class RemoteWorldModel : public WorldModel {
 public:
  RemoteWorldModel(std::shared_ptr<HostSession> session, int num_players, Value initial_state);

  int num_players() const override { return num_players_; }
  GameState initial_state() const override { return GameState::from_value(initial_); }
  GameState state_from_value(const Value& value) const override { return GameState::from_value(value); }
  GameState apply_action(const GameState& state, const Action& action) const override;
  PlayerId get_current_player(const GameState& state) const override;
  std::string get_player_name(PlayerId id) const override;
  std::vector<double> get_rewards(const GameState& state) const override;
  std::vector<Action> get_legal_actions(const GameState& state) const override;
  std::vector<Value> get_observations(const GameState& state) const override;
  bool thread_safe() const override { return false; }

  const std::shared_ptr<HostSession>& session() const { return session_; }

 private:
  std::shared_ptr<HostSession> session_;
  int num_players_;
  Value initial_;
};

class RemoteHistorySampler : public HistorySampler {
 public:
  explicit RemoteHistorySampler(std::shared_ptr<HostSession> session) : session_(std::move(session)) {}
  std::vector<Action> resample_history(const ObsActionHistory& history, PlayerId player, bool last_is_terminal,
                                       Rng& rng) const override;

 private:
  std::shared_ptr<HostSession> session_;
};

class RemoteStateSampler : public StateSampler {
 public:
  explicit RemoteStateSampler(std::shared_ptr<HostSession> session) : session_(std::move(session)) {}
  GameState resample_state(const ObsActionHistory& history, PlayerId player, Rng& rng) const override;

 private:
  std::shared_ptr<HostSession> session_;
};

class RemoteValueFunction : public ValueFunction {
 public:
  explicit RemoteValueFunction(std::shared_ptr<HostSession> session) : session_(std::move(session)) {}
  double value(const GameState& state, PlayerId player) const override;

 private:
  std::shared_ptr<HostSession> session_;
};

// Spawns a session, loads `source` and wraps whatever it defines.
WorldModelHandle load_remote_candidate(const HostConfig& config, const std::string& source, int num_players,
                                       const Value& initial_state);

}  // namespace cwm::host

#endif  // CWM_HOST_HOST_HPP_
