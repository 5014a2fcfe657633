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

#ifndef CWM_CORE_WORLD_MODEL_HPP_
#define CWM_CORE_WORLD_MODEL_HPP_

#include <memory>
#include <string>
#include <vector>

#include "cwm/core/game_state.hpp"
#include "cwm/core/random.hpp"

namespace cwm {

// The six-function game contract shared by ground-truth engines and
// synthesized models. All functions are deterministic; randomness enters only
// through chance-player actions, which are uniform over get_legal_actions.
class WorldModel {
 public:
  virtual ~WorldModel() = default;

  virtual int num_players() const = 0;
  virtual GameState initial_state() const = 0;
  // Interprets a value tree (from a file, an observation of a perfect
  // information game, or another model) as a state of this model.
  virtual GameState state_from_value(const Value& value) const = 0;

  virtual GameState apply_action(const GameState& state,
                                 const Action& action) const = 0;
  virtual PlayerId get_current_player(const GameState& state) const = 0;
  virtual std::string get_player_name(PlayerId id) const {
    return player_name(id);
  }
  virtual std::vector<double> get_rewards(const GameState& state) const = 0;
  virtual std::vector<Action> get_legal_actions(
      const GameState& state) const = 0;
  virtual std::vector<Value> get_observations(
      const GameState& state) const = 0;

  // Whether concurrent calls from several threads are allowed.
  virtual bool thread_safe() const { return true; }

  bool is_terminal(const GameState& state) const {
    return get_current_player(state) == kTerminalPlayer;
  }
};

// Samples a full action history (chance and all players) consistent with one
// player's evidence.
class HistorySampler {
 public:
  virtual ~HistorySampler() = default;
  virtual std::vector<Action> resample_history(const ObsActionHistory& history,
                                               PlayerId player,
                                               bool last_is_terminal,
                                               Rng& rng) const = 0;
};

// Samples a state directly from one player's evidence.
class StateSampler {
 public:
  virtual ~StateSampler() = default;
  virtual GameState resample_state(const ObsActionHistory& history,
                                   PlayerId player, Rng& rng) const = 0;
};

class ValueFunction {
 public:
  virtual ~ValueFunction() = default;
  virtual double value(const GameState& state, PlayerId player) const = 0;
};

// A model plus its optional capabilities.
struct WorldModelHandle {
  std::shared_ptr<const WorldModel> model;
  std::shared_ptr<const HistorySampler> history_sampler;
  std::shared_ptr<const StateSampler> state_sampler;
  std::shared_ptr<const ValueFunction> value_function;

  bool has_history_sampler() const { return history_sampler != nullptr; }
  bool has_state_sampler() const { return state_sampler != nullptr; }
  bool has_value_function() const { return value_function != nullptr; }
};

}  // namespace cwm

#endif  // CWM_CORE_WORLD_MODEL_HPP_
