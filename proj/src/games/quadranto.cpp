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

#include "cwm/games/quadranto.hpp"

namespace cwm::games {
namespace {

constexpr int kSize = Quadranto::kSize;

struct Move {
  const char* name;
  int dr;
  int dc;
};
constexpr Move kMoves[5] = {
    {"Left", 0, -1}, {"Right", 0, 1}, {"Up", -1, 0}, {"Down", 1, 0}, {"Stay", 0, 0}};

// Placement cells for each player's quadrant.
constexpr int kStartCells[2][4] = {{0, 1, 4, 5}, {10, 11, 14, 15}};

Value cell_value(int cell) {
  if (cell < 0) return Value();
  return Value::array({cell / kSize, cell % kSize});
}

int read_cell(const Value& v) {
  if (v.is_null()) return -1;
  int r = v.at(0).get<int>();
  int c = v.at(1).get<int>();
  if (r < 0 || r >= kSize || c < 0 || c >= kSize) throw ModelFault("cell off the board");
  return r * kSize + c;
}

std::string place_token(int cell) {
  return "place(" + std::to_string(cell / kSize) + "," + std::to_string(cell % kSize) + ")";
}

}  // namespace

std::string Quadranto::quadrant_name(int cell) {
  const bool top = cell / kSize < kSize / 2;
  const bool left = cell % kSize < kSize / 2;
  return std::string(top ? "top" : "bottom") + "_" + (left ? "left" : "right");
}

Value QuadrantoState::to_value() const {
  return Value{
      {"positions", Value::array({cell_value(cells[0]), cell_value(cells[1])})},
      {"current_player", current},
      {"moves", moves},
      {"winner", winner < 0 ? Value() : Value(winner)},
  };
}

QuadrantoState Quadranto::parse(const Value& v) const {
  try {
    QuadrantoState s;
    s.cells = {read_cell(v.at("positions").at(0)), read_cell(v.at("positions").at(1))};
    s.current = v.at("current_player").get<int>();
    s.moves = v.at("moves").get<int>();
    s.winner = v.at("winner").is_null() ? -1 : v.at("winner").get<int>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ModelFault(std::string("malformed quadranto state: ") + e.what());
  }
}

GameState Quadranto::initial_state() const { return wrap(QuadrantoState{}); }

std::vector<Action> Quadranto::get_legal_actions(const GameState& state) const {
  auto data = unwrap(state);
  const QuadrantoState& s = data->state;
  std::vector<Action> actions;
  if (s.current == kTerminalPlayer) return actions;
  if (s.current == kChancePlayer) {
    const int who = s.cells[0] < 0 ? 0 : 1;
    for (int cell : kStartCells[who]) actions.push_back(place_token(cell));
    return actions;
  }
  const int cell = s.cells[static_cast<std::size_t>(s.current)];
  const int r = cell / kSize;
  const int c = cell % kSize;
  for (const auto& m : kMoves) {
    const int nr = r + m.dr;
    const int nc = c + m.dc;
    if (nr >= 0 && nr < kSize && nc >= 0 && nc < kSize) actions.push_back(m.name);
  }
  return actions;
}

GameState Quadranto::apply_action(const GameState& state, const Action& action) const {
  auto data = unwrap(state);
  const QuadrantoState& s = data->state;
  QuadrantoState n = s;
  if (s.current == kTerminalPlayer) throw IllegalAction("game is over; no action applies: " + action);
  if (s.current == kChancePlayer) {
    const int who = s.cells[0] < 0 ? 0 : 1;
    for (int cell : kStartCells[who]) {
      if (action == place_token(cell)) {
        n.cells[static_cast<std::size_t>(who)] = cell;
        n.current = who == 0 ? kChancePlayer : 0;
        return wrap(std::move(n));
      }
    }
    throw IllegalAction("illegal placement: " + action);
  }
  const int p = s.current;
  const int cell = s.cells[static_cast<std::size_t>(p)];
  for (const auto& m : kMoves) {
    if (action != m.name) continue;
    const int nr = cell / kSize + m.dr;
    const int nc = cell % kSize + m.dc;
    if (nr < 0 || nr >= kSize || nc < 0 || nc >= kSize) {
      throw IllegalAction("move leaves the board: " + action);
    }
    const int target = nr * kSize + nc;
    n.cells[static_cast<std::size_t>(p)] = target;
    n.moves += 1;
    if (target != cell && target == s.cells[static_cast<std::size_t>(1 - p)]) {
      n.winner = p;
      n.current = kTerminalPlayer;
    } else if (n.moves >= kMaxMoves) {
      n.current = kTerminalPlayer;
    } else {
      n.current = 1 - p;
    }
    return wrap(std::move(n));
  }
  throw IllegalAction("illegal action: " + action);
}

PlayerId Quadranto::get_current_player(const GameState& state) const {
  return unwrap(state)->state.current;
}

std::vector<double> Quadranto::get_rewards(const GameState& state) const {
  auto data = unwrap(state);
  const QuadrantoState& s = data->state;
  if (s.current != kTerminalPlayer || s.winner < 0) return {0.0, 0.0};
  return s.winner == 0 ? std::vector<double>{1.0, -1.0} : std::vector<double>{-1.0, 1.0};
}

std::vector<Value> Quadranto::get_observations(const GameState& state) const {
  auto data = unwrap(state);
  const QuadrantoState& s = data->state;
  std::vector<Value> obs;
  for (int p = 0; p < 2; ++p) {
    const int opp = s.cells[static_cast<std::size_t>(1 - p)];
    obs.push_back(Value{
        {"player", p},
        {"my_position", cell_value(s.cells[static_cast<std::size_t>(p)])},
        {"opponent_quadrant", opp < 0 ? Value() : Value(quadrant_name(opp))},
        {"moves", s.moves},
        {"current_player", s.current},
        {"winner", s.winner < 0 ? Value() : Value(s.winner)},
    });
  }
  return obs;
}

}  // namespace cwm::games
