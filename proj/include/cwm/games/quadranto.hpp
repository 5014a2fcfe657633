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

#ifndef CWM_GAMES_QUADRANTO_HPP_
#define CWM_GAMES_QUADRANTO_HPP_

#include <array>
#include <string>
#include <vector>

#include "cwm/games/native_engine.hpp"

namespace cwm::games {

struct QuadrantoState {
  std::array<int, 2> cells{-1, -1};  // row * 4 + col, -1 before placement
  PlayerId current = kChancePlayer;
  int moves = 0;
  int winner = -1;

  Value to_value() const;
};

// Two pursuers on a 4x4 grid. Chance places player 0 in the top-left
// quadrant and then player 1 in the bottom-right quadrant ("place(r,c)");
// player 0 moves first. Moving onto the opponent wins; 20 moves in total
// without a catch is a draw. Each player observes its own cell and only the
// quadrant of the opponent.
//
// Actions, in order: "Left", "Right", "Up", "Down", "Stay", restricted to
// those that stay on the board.
class Quadranto final : public NativeEngine<QuadrantoState, Quadranto> {
 public:
  static constexpr int kSize = 4;
  static constexpr int kMaxMoves = 20;

  int num_players() const override { return 2; }
  GameState initial_state() const override;
  GameState apply_action(const GameState& state,
                         const Action& action) const override;
  PlayerId get_current_player(const GameState& state) const override;
  std::vector<double> get_rewards(const GameState& state) const override;
  std::vector<Action> get_legal_actions(const GameState& state) const override;
  std::vector<Value> get_observations(const GameState& state) const override;

  QuadrantoState parse(const Value& value) const;

  static std::string quadrant_name(int cell);
};

}  // namespace cwm::games

#endif  // CWM_GAMES_QUADRANTO_HPP_
