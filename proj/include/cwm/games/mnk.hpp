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

#ifndef CWM_GAMES_MNK_HPP_
#define CWM_GAMES_MNK_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "cwm/games/native_engine.hpp"

namespace cwm::games {

// Board of an m,n,k game. Cells hold -1 (empty), 0 ('x') or 1 ('o').
struct MnkState {
  int rows = 0;
  int cols = 0;
  std::vector<std::int8_t> cells;
  PlayerId current = 0;
  int winner = -1;
  bool gravity = false;

  Value to_value() const;
};

struct MnkConfig {
  int rows;
  int cols;
  int win_length;
  // Connect-four style: marks fall to the lowest free row of a column and
  // actions name the column ("x3"); otherwise actions name a cell ("x(1,2)").
  bool gravity;
};

// Tic-tac-toe, connect four and generalized tic-tac-toe.
//
// State value: {"board": [null|"x"|"o", ...] row-major with row 0 on top,
// "current_player_mark": "x"|"o"|null}. A null mark means the game is over.
// Legal actions are listed in row-major cell order (column order with gravity).
class MnkGame final : public NativeEngine<MnkState, MnkGame> {
 public:
  explicit MnkGame(MnkConfig config) : config_(config) {}

  int num_players() const override { return 2; }
  GameState initial_state() const override;
  GameState apply_action(const GameState& state,
                         const Action& action) const override;
  PlayerId get_current_player(const GameState& state) const override;
  std::vector<double> get_rewards(const GameState& state) const override;
  std::vector<Action> get_legal_actions(const GameState& state) const override;
  std::vector<Value> get_observations(const GameState& state) const override;

  const MnkConfig& config() const { return config_; }

  MnkState parse(const Value& value) const;
  bool accepts(const MnkState& s) const {
    return s.rows == config_.rows && s.cols == config_.cols &&
           s.gravity == config_.gravity;
  }

 private:
  // Index of the cell targeted by `action`, or -1 when it is not legal.
  int target_cell(const MnkState& s, const Action& action) const;
  bool wins_through(const MnkState& s, int cell) const;
  int scan_winner(const MnkState& s) const;

  MnkConfig config_;
};

MnkConfig tic_tac_toe_config();
MnkConfig connect_four_config();
MnkConfig gen_tic_tac_toe_config();

}  // namespace cwm::games

#endif  // CWM_GAMES_MNK_HPP_
