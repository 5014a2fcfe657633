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

#include "cwm/host/host.hpp"

namespace cwm::host {
namespace {

template <class F>
auto guarded(const char* fn, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ModelFault(std::string(fn) + " returned a value of the wrong type: " + e.what());
  }
}

}  // namespace

RemoteWorldModel::RemoteWorldModel(std::shared_ptr<HostSession> session, int num_players, Value initial_state)
    : session_(std::move(session)), num_players_(num_players), initial_(std::move(initial_state)) {}

GameState RemoteWorldModel::apply_action(const GameState& state, const Action& action) const {
  return GameState::from_value(session_->call("apply_action", Value{{"state", state.to_value()}, {"action", action}}));
}

PlayerId RemoteWorldModel::get_current_player(const GameState& state) const {
  return guarded("get_current_player",
                 [&] { return session_->call("get_current_player", Value{{"state", state.to_value()}}).get<int>(); });
}

std::string RemoteWorldModel::get_player_name(PlayerId id) const {
  return guarded("get_player_name", [&] {
    return session_->call("get_player_name", Value{{"player_id", id}}).get<std::string>();
  });
}

std::vector<double> RemoteWorldModel::get_rewards(const GameState& state) const {
  return guarded("get_rewards", [&] {
    return session_->call("get_rewards", Value{{"state", state.to_value()}}).get<std::vector<double>>();
  });
}

std::vector<Action> RemoteWorldModel::get_legal_actions(const GameState& state) const {
  return guarded("get_legal_actions", [&] {
    return session_->call("get_legal_actions", Value{{"state", state.to_value()}}).get<std::vector<std::string>>();
  });
}

std::vector<Value> RemoteWorldModel::get_observations(const GameState& state) const {
  return guarded("get_observations", [&] {
    const Value v = session_->call("get_observations", Value{{"state", state.to_value()}});
    if (!v.is_array()) throw ModelFault("get_observations must return a list");
    return std::vector<Value>(v.begin(), v.end());
  });
}

std::vector<Action> RemoteHistorySampler::resample_history(const ObsActionHistory& history, PlayerId player,
                                                           bool last_is_terminal, Rng& rng) const {
  return guarded("resample_history", [&] {
    return session_
        ->call("resample_history", Value{{"obs_action_history", to_value(history)},
                                         {"player_id", player},
                                         {"last_is_terminal", last_is_terminal},
                                         {"seed", rng.next() >> 1}})
        .get<std::vector<std::string>>();
  });
}

GameState RemoteStateSampler::resample_state(const ObsActionHistory& history, PlayerId player, Rng& rng) const {
  return GameState::from_value(session_->call(
      "resample_state",
      Value{{"obs_action_history", to_value(history)}, {"player_id", player}, {"seed", rng.next() >> 1}}));
}

double RemoteValueFunction::value(const GameState& state, PlayerId player) const {
  return guarded("value_function", [&] {
    return session_->call("value_function", Value{{"state", state.to_value()}, {"player_id", player}}).get<double>();
  });
}

WorldModelHandle load_remote_candidate(const HostConfig& config, const std::string& source, int num_players,
                                       const Value& initial_state) {
  auto session = std::make_shared<HostSession>(config);
  Value caps = session->load(source);
  if (!caps.is_object()) caps = Value::object();
  WorldModelHandle handle;
  handle.model = std::make_shared<RemoteWorldModel>(session, num_players, initial_state);
  if (caps.value("resample_history", false)) handle.history_sampler = std::make_shared<RemoteHistorySampler>(session);
  if (caps.value("resample_state", false)) handle.state_sampler = std::make_shared<RemoteStateSampler>(session);
  if (caps.value("value_function", false)) handle.value_function = std::make_shared<RemoteValueFunction>(session);
  return handle;
}

}  // namespace cwm::host
