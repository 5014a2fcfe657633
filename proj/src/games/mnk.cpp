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

#include "cwm/games/mnk.hpp"

#include <charconv>

namespace cwm::games {
namespace {

constexpr char kMarks[2] = {'x', 'o'};

bool parse_int(std::string_view text, int& out) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

MnkConfig tic_tac_toe_config() { return {3, 3, 3, false}; }
MnkConfig connect_four_config() { return {6, 7, 4, true}; }
MnkConfig gen_tic_tac_toe_config() { return {6, 6, 4, false}; }

Value MnkState::to_value() const {
  Value board = Value::array();
  for (auto c : cells) {
    board.push_back(c < 0 ? Value() : Value(std::string(1, kMarks[c])));
  }
  Value mark = current == kTerminalPlayer ? Value() : Value(std::string(1, kMarks[current]));
  return Value{{"board", std::move(board)}, {"current_player_mark", std::move(mark)}};
}

GameState MnkGame::initial_state() const {
  MnkState s;
  s.rows = config_.rows;
  s.cols = config_.cols;
  s.gravity = config_.gravity;
  s.cells.assign(static_cast<std::size_t>(config_.rows * config_.cols), -1);
  return wrap(std::move(s));
}

MnkState MnkGame::parse(const Value& value) const {
  const int n = config_.rows * config_.cols;
  if (!value.is_object() || !value.contains("board") || !value["board"].is_array() ||
      static_cast<int>(value["board"].size()) != n) {
    throw ModelFault("malformed board state: " + canonical_serialize(value));
  }
  MnkState s;
  s.rows = config_.rows;
  s.cols = config_.cols;
  s.gravity = config_.gravity;
  s.cells.reserve(static_cast<std::size_t>(n));
  for (const auto& cell : value["board"]) {
    if (cell.is_null()) {
      s.cells.push_back(-1);
    } else if (cell == "x") {
      s.cells.push_back(0);
    } else if (cell == "o") {
      s.cells.push_back(1);
    } else {
      throw ModelFault("unknown board mark: " + canonical_serialize(cell));
    }
  }
  s.winner = scan_winner(s);
  const Value mark = value.value("current_player_mark", Value());
  if (mark.is_null()) {
    s.current = kTerminalPlayer;
  } else if (mark == "x") {
    s.current = 0;
  } else if (mark == "o") {
    s.current = 1;
  } else {
    throw ModelFault("unknown current_player_mark: " + canonical_serialize(mark));
  }
  return s;
}

int MnkGame::target_cell(const MnkState& s, const Action& action) const {
  if (s.current < 0 || action.empty() || action[0] != kMarks[s.current]) return -1;
  std::string_view rest(action);
  rest.remove_prefix(1);
  if (config_.gravity) {
    int col = 0;
    if (!parse_int(rest, col) || col < 0 || col >= s.cols) return -1;
    for (int row = s.rows - 1; row >= 0; --row) {
      int idx = row * s.cols + col;
      if (s.cells[static_cast<std::size_t>(idx)] < 0) return idx;
    }
    return -1;
  }
  if (rest.size() < 5 || rest.front() != '(' || rest.back() != ')') return -1;
  rest = rest.substr(1, rest.size() - 2);
  auto comma = rest.find(',');
  if (comma == std::string_view::npos) return -1;
  int row = 0;
  int col = 0;
  if (!parse_int(rest.substr(0, comma), row) || !parse_int(rest.substr(comma + 1), col)) {
    return -1;
  }
  if (row < 0 || row >= s.rows || col < 0 || col >= s.cols) return -1;
  int idx = row * s.cols + col;
  return s.cells[static_cast<std::size_t>(idx)] < 0 ? idx : -1;
}

bool MnkGame::wins_through(const MnkState& s, int cell) const {
  const int mark = s.cells[static_cast<std::size_t>(cell)];
  if (mark < 0) return false;
  const int r0 = cell / s.cols;
  const int c0 = cell % s.cols;
  static constexpr int kDirs[4][2] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}};
  for (const auto& d : kDirs) {
    int count = 1;
    for (int sign : {1, -1}) {
      int r = r0 + sign * d[0];
      int c = c0 + sign * d[1];
      while (r >= 0 && r < s.rows && c >= 0 && c < s.cols &&
             s.cells[static_cast<std::size_t>(r * s.cols + c)] == mark) {
        ++count;
        r += sign * d[0];
        c += sign * d[1];
      }
    }
    if (count >= config_.win_length) return true;
  }
  return false;
}

int MnkGame::scan_winner(const MnkState& s) const {
  for (int i = 0; i < static_cast<int>(s.cells.size()); ++i) {
    if (wins_through(s, i)) return s.cells[static_cast<std::size_t>(i)];
  }
  return -1;
}

GameState MnkGame::apply_action(const GameState& state, const Action& action) const {
  auto data = unwrap(state);
  const MnkState& s = data->state;
  if (s.current == kTerminalPlayer) throw IllegalAction("game is over; no action applies: " + action);
  const int cell = target_cell(s, action);
  if (cell < 0) throw IllegalAction("illegal action: " + action);
  MnkState next = s;
  next.cells[static_cast<std::size_t>(cell)] = static_cast<std::int8_t>(s.current);
  if (wins_through(next, cell)) {
    next.winner = s.current;
    next.current = kTerminalPlayer;
  } else {
    bool full = true;
    for (auto c : next.cells) {
      if (c < 0) {
        full = false;
        break;
      }
    }
    next.current = full ? kTerminalPlayer : 1 - s.current;
  }
  return wrap(std::move(next));
}

PlayerId MnkGame::get_current_player(const GameState& state) const {
  return unwrap(state)->state.current;
}

std::vector<double> MnkGame::get_rewards(const GameState& state) const {
  auto data = unwrap(state);
  const MnkState& s = data->state;
  if (s.current != kTerminalPlayer || s.winner < 0) return {0.0, 0.0};
  return s.winner == 0 ? std::vector<double>{1.0, -1.0} : std::vector<double>{-1.0, 1.0};
}

std::vector<Action> MnkGame::get_legal_actions(const GameState& state) const {
  auto data = unwrap(state);
  const MnkState& s = data->state;
  std::vector<Action> actions;
  if (s.current == kTerminalPlayer) return actions;
  const char mark = kMarks[s.current];
  if (config_.gravity) {
    for (int col = 0; col < s.cols; ++col) {
      if (s.cells[static_cast<std::size_t>(col)] < 0) {
        actions.push_back(std::string(1, mark) + std::to_string(col));
      }
    }
    return actions;
  }
  for (int i = 0; i < static_cast<int>(s.cells.size()); ++i) {
    if (s.cells[static_cast<std::size_t>(i)] < 0) {
      actions.push_back(std::string(1, mark) + "(" + std::to_string(i / s.cols) + "," +
                        std::to_string(i % s.cols) + ")");
    }
  }
  return actions;
}

std::vector<Value> MnkGame::get_observations(const GameState& state) const {
  Value v = unwrap(state)->state.to_value();
  return {v, v};
}

}  // namespace cwm::games
