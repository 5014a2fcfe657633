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

#ifndef CWM_CORE_GAME_STATE_HPP_
#define CWM_CORE_GAME_STATE_HPP_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cwm/core/value.hpp"

namespace cwm {

using Action = std::string;

using PlayerId = int;
inline constexpr PlayerId kChancePlayer = -1;
inline constexpr PlayerId kTerminalPlayer = -4;

// "chance" for -1, "terminal" for -4, the decimal id otherwise.
// Throws InvalidPlayer for any other negative id.
std::string player_name(PlayerId id);

// Backing storage of a GameState. Engines subclass this with their native
// representation; remote models store the value tree directly.
class StateData {
 public:
  virtual ~StateData() = default;
  virtual Value to_value() const = 0;
};

// Immutable handle to a game state. Copies share the underlying data.
// Equality is structural over the canonical value projection.
class GameState {
 public:
  GameState() = default;
  explicit GameState(std::shared_ptr<const StateData> data)
      : data_(std::move(data)) {}

  // Wraps a plain value tree (used for remote models and parsed files).
  static GameState from_value(Value value);

  bool empty() const { return data_ == nullptr; }
  Value to_value() const;
  std::string canonical() const;

  template <class T>
  std::shared_ptr<const T> as() const {
    return std::dynamic_pointer_cast<const T>(data_);
  }

  friend bool operator==(const GameState& a, const GameState& b);

 private:
  std::shared_ptr<const StateData> data_;
};

class ValueStateData final : public StateData {
 public:
  explicit ValueStateData(Value value) : value_(std::move(value)) {}
  Value to_value() const override { return value_; }
  const Value& value() const { return value_; }

 private:
  Value value_;
};

// One entry of a player's evidence: the observation at one of the player's
// decision points and the action taken there (none for the current decision
// point or a terminal observation).
struct ObsActionEntry {
  Value observation;
  std::optional<Action> action;
};
using ObsActionHistory = std::vector<ObsActionEntry>;

Value to_value(const ObsActionHistory& history);
ObsActionHistory history_from_value(const Value& value);

}  // namespace cwm

#endif  // CWM_CORE_GAME_STATE_HPP_
