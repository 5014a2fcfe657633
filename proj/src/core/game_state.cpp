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

#include "cwm/core/game_state.hpp"

#include "cwm/core/errors.hpp"

namespace cwm {

std::string player_name(PlayerId id) {
  if (id == kChancePlayer) return "chance";
  if (id == kTerminalPlayer) return "terminal";
  if (id < 0) throw InvalidPlayer("invalid player id " + std::to_string(id));
  return std::to_string(id);
}

GameState GameState::from_value(Value value) {
  return GameState(std::make_shared<const ValueStateData>(std::move(value)));
}

Value GameState::to_value() const {
  if (!data_) return Value();
  return data_->to_value();
}

std::string GameState::canonical() const { return canonical_serialize(to_value()); }

bool operator==(const GameState& a, const GameState& b) {
  if (a.data_ == b.data_) return true;
  return structurally_equal(a.to_value(), b.to_value());
}

Value to_value(const ObsActionHistory& history) {
  Value out = Value::array();
  for (const auto& entry : history) {
    out.push_back(Value::array(
        {entry.observation, entry.action ? Value(*entry.action) : Value()}));
  }
  return out;
}

ObsActionHistory history_from_value(const Value& value) {
  if (!value.is_array()) throw ParseError("observation-action history must be a sequence");
  ObsActionHistory out;
  out.reserve(value.size());
  for (const auto& item : value) {
    if (!item.is_array() || item.size() != 2) {
      throw ParseError("history entries must be [observation, action] pairs");
    }
    ObsActionEntry entry{item[0], std::nullopt};
    if (!item[1].is_null()) {
      if (!item[1].is_string()) throw ParseError("history actions must be strings");
      entry.action = item[1].get<std::string>();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace cwm
