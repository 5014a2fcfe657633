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

#include "cwm/games/hand_of_war.hpp"

#include <bit>

namespace cwm::games {
namespace {

constexpr char kRanks[4] = {'J', 'Q', 'K', 'A'};
constexpr char kSuits[4] = {'S', 'H', 'D', 'C'};

constexpr CardSet bit(int card) { return static_cast<CardSet>(1u << card); }
int count(CardSet s) { return std::popcount(static_cast<unsigned>(s)); }

Value cards_value(CardSet s) {
  Value out = Value::array();
  for (int c = 0; c < HandOfWar::kNumCards; ++c) {
    if (s & bit(c)) out.push_back(HandOfWar::card_name(c));
  }
  return out;
}

CardSet read_cards(const Value& v) {
  CardSet s = 0;
  for (const auto& c : v) {
    int idx = HandOfWar::card_index(c.get<std::string>());
    if (idx < 0) throw ModelFault("unknown card " + c.get<std::string>());
    s |= bit(idx);
  }
  return s;
}

Value card_or_null(int card) { return card < 0 ? Value() : Value(HandOfWar::card_name(card)); }

int read_card_or_null(const Value& v) {
  if (v.is_null()) return -1;
  int idx = HandOfWar::card_index(v.get<std::string>());
  if (idx < 0) throw ModelFault("unknown card " + v.get<std::string>());
  return idx;
}

Value revealed_value(const std::vector<std::pair<int, int>>& revealed) {
  Value out = Value::array();
  for (const auto& [a, b] : revealed) {
    out.push_back(Value::array({HandOfWar::card_name(a), HandOfWar::card_name(b)}));
  }
  return out;
}

// Cards a player holds in any form; the undealt cards of its draw pile are
// counted by number only.
int possession(const HandOfWarState& s, int p) {
  return count(s.hands[static_cast<std::size_t>(p)]) + count(s.win_piles[static_cast<std::size_t>(p)]) +
         s.draw_counts[static_cast<std::size_t>(p)];
}

void check_capture_all(HandOfWarState& s) {
  for (int p = 0; p < 2; ++p) {
    if (possession(s, p) == HandOfWar::kNumCards) s.over = true;
  }
}

// After a decisive battle: refill both hands or end the game.
void start_refill(HandOfWarState& s) {
  check_capture_all(s);
  if (s.over) return;
  std::array<int, 2> need{};
  for (int p = 0; p < 2; ++p) {
    need[static_cast<std::size_t>(p)] = HandOfWar::kHandSize - count(s.hands[static_cast<std::size_t>(p)]);
    if (need[static_cast<std::size_t>(p)] > s.draw_counts[static_cast<std::size_t>(p)]) {
      s.over = true;
      return;
    }
  }
  s.pending_draws = need;
}

void start_showdown(HandOfWarState& s) {
  for (int p = 0; p < 2; ++p) {
    if (s.draw_counts[static_cast<std::size_t>(p)] == 0 || s.hands[static_cast<std::size_t>(p)] == 0) {
      s.over = true;
      return;
    }
  }
  s.pending_burns = {1, 1};
}

void resolve(HandOfWarState& s) {
  const int c0 = s.commits[0];
  const int c1 = s.commits[1];
  s.table |= static_cast<CardSet>(bit(c0) | bit(c1));
  s.revealed.emplace_back(c0, c1);
  s.commits = {-1, -1};
  const int r0 = HandOfWar::rank_of(c0);
  const int r1 = HandOfWar::rank_of(c1);
  if (r0 == r1) {
    start_showdown(s);
    return;
  }
  const int winner = r0 > r1 ? 0 : 1;
  s.win_piles[static_cast<std::size_t>(winner)] |= s.table;
  s.table = 0;
  start_refill(s);
}

// Index of the player whose draw or burn chance resolves next, or -1.
int pending_chance_owner(const HandOfWarState& s) {
  for (int p = 0; p < 2; ++p) {
    if (s.pending_burns[static_cast<std::size_t>(p)] > 0 || s.pending_draws[static_cast<std::size_t>(p)] > 0) return p;
  }
  return -1;
}

}  // namespace

std::string HandOfWar::card_name(int card) {
  return {kRanks[card / 4], kSuits[card % 4]};
}

int HandOfWar::card_index(std::string_view name) {
  if (name.size() != 2) return -1;
  int rank = -1;
  int suit = -1;
  for (int i = 0; i < 4; ++i) {
    if (name[0] == kRanks[i]) rank = i;
    if (name[1] == kSuits[i]) suit = i;
  }
  return rank < 0 || suit < 0 ? -1 : rank * 4 + suit;
}

PlayerId HandOfWar::current_player_of(const HandOfWarState& s) {
  if (s.over) return kTerminalPlayer;
  if (pending_chance_owner(s) >= 0) return kChancePlayer;
  return s.commits[0] < 0 ? 0 : 1;
}

Value HandOfWarState::to_value() const {
  PlayerId current = HandOfWar::current_player_of(*this);
  return Value{
      {"undealt", cards_value(undealt)},
      {"draw_counts", Value::array({draw_counts[0], draw_counts[1]})},
      {"hands", Value::array({cards_value(hands[0]), cards_value(hands[1])})},
      {"win_piles", Value::array({cards_value(win_piles[0]), cards_value(win_piles[1])})},
      {"table", cards_value(table)},
      {"commits", Value::array({card_or_null(commits[0]), card_or_null(commits[1])})},
      {"pending_draws", Value::array({pending_draws[0], pending_draws[1]})},
      {"pending_burns", Value::array({pending_burns[0], pending_burns[1]})},
      {"revealed", revealed_value(revealed)},
      {"over", over},
      {"current_player", current},
  };
}

HandOfWarState HandOfWar::parse(const Value& v) const {
  try {
    HandOfWarState s;
    s.undealt = read_cards(v.at("undealt"));
    s.draw_counts = {v.at("draw_counts").at(0).get<int>(), v.at("draw_counts").at(1).get<int>()};
    s.hands = {read_cards(v.at("hands").at(0)), read_cards(v.at("hands").at(1))};
    s.win_piles = {read_cards(v.at("win_piles").at(0)), read_cards(v.at("win_piles").at(1))};
    s.table = read_cards(v.at("table"));
    s.commits = {read_card_or_null(v.at("commits").at(0)), read_card_or_null(v.at("commits").at(1))};
    s.pending_draws = {v.at("pending_draws").at(0).get<int>(), v.at("pending_draws").at(1).get<int>()};
    s.pending_burns = {v.at("pending_burns").at(0).get<int>(), v.at("pending_burns").at(1).get<int>()};
    for (const auto& pair : v.at("revealed")) {
      s.revealed.emplace_back(card_index(pair.at(0).get<std::string>()), card_index(pair.at(1).get<std::string>()));
    }
    s.over = v.at("over").get<bool>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ModelFault(std::string("malformed hand of war state: ") + e.what());
  }
}

GameState HandOfWar::initial_state() const { return wrap(HandOfWarState{}); }

PlayerId HandOfWar::get_current_player(const GameState& state) const {
  return current_player_of(unwrap(state)->state);
}

std::vector<Action> HandOfWar::get_legal_actions(const GameState& state) const {
  auto data = unwrap(state);
  const HandOfWarState& s = data->state;
  std::vector<Action> actions;
  const PlayerId current = current_player_of(s);
  if (current == kTerminalPlayer) return actions;
  if (current == kChancePlayer) {
    const int owner = pending_chance_owner(s);
    const char* prefix = s.pending_burns[static_cast<std::size_t>(owner)] > 0 ? "burn:" : "draw:";
    for (int c = 0; c < kNumCards; ++c) {
      if (s.undealt & bit(c)) actions.push_back(prefix + card_name(c));
    }
    return actions;
  }
  for (int c = 0; c < kNumCards; ++c) {
    if (s.hands[static_cast<std::size_t>(current)] & bit(c)) actions.push_back("play:" + card_name(c));
  }
  return actions;
}

GameState HandOfWar::apply_action(const GameState& state, const Action& action) const {
  auto data = unwrap(state);
  const HandOfWarState& s = data->state;
  const PlayerId current = current_player_of(s);
  if (current == kTerminalPlayer) throw IllegalAction("game is over; no action applies: " + action);
  HandOfWarState n = s;
  auto colon = action.find(':');
  const int card = colon == std::string::npos ? -1 : card_index(std::string_view(action).substr(colon + 1));
  if (card < 0) throw IllegalAction("illegal action: " + action);
  const std::string kind = action.substr(0, colon);
  if (current == kChancePlayer) {
    const int owner = pending_chance_owner(s);
    const auto o = static_cast<std::size_t>(owner);
    const bool burning = s.pending_burns[o] > 0;
    if (kind != (burning ? "burn" : "draw") || !(s.undealt & bit(card))) {
      throw IllegalAction("illegal chance action: " + action);
    }
    n.undealt = static_cast<CardSet>(n.undealt & ~bit(card));
    n.draw_counts[o] -= 1;
    if (burning) {
      n.pending_burns[o] -= 1;
      n.table |= bit(card);
    } else {
      n.pending_draws[o] -= 1;
      n.hands[o] |= bit(card);
    }
    return wrap(std::move(n));
  }
  const auto p = static_cast<std::size_t>(current);
  if (kind != "play" || !(s.hands[p] & bit(card))) throw IllegalAction("card not in hand: " + action);
  n.hands[p] = static_cast<CardSet>(n.hands[p] & ~bit(card));
  n.commits[p] = card;
  if (current == 1) resolve(n);
  return wrap(std::move(n));
}

std::vector<double> HandOfWar::get_rewards(const GameState& state) const {
  auto data = unwrap(state);
  const HandOfWarState& s = data->state;
  if (!s.over) return {0.0, 0.0};
  int score0 = count(s.win_piles[0]);
  int score1 = count(s.win_piles[1]);
  if (possession(s, 0) == kNumCards) score0 = kNumCards;
  if (possession(s, 1) == kNumCards) score1 = kNumCards;
  if (score0 == score1) return {0.0, 0.0};
  return score0 > score1 ? std::vector<double>{1.0, -1.0} : std::vector<double>{-1.0, 1.0};
}

std::vector<Value> HandOfWar::get_observations(const GameState& state) const {
  auto data = unwrap(state);
  const HandOfWarState& s = data->state;
  const PlayerId current = current_player_of(s);
  std::vector<Value> obs;
  for (int p = 0; p < 2; ++p) {
    const auto me = static_cast<std::size_t>(p);
    const auto opp = static_cast<std::size_t>(1 - p);
    obs.push_back(Value{
        {"player", p},
        {"my_hand", cards_value(s.hands[me])},
        {"my_draw_count", s.draw_counts[me]},
        {"my_commit", card_or_null(s.commits[me])},
        {"opponent_hand_size", count(s.hands[opp])},
        {"opponent_draw_count", s.draw_counts[opp]},
        {"opponent_committed", s.commits[opp] >= 0},
        {"win_pile_sizes", Value::array({count(s.win_piles[0]), count(s.win_piles[1])})},
        {"table_size", count(s.table)},
        {"revealed", revealed_value(s.revealed)},
        {"current_player", current},
    });
  }
  return obs;
}

}  // namespace cwm::games
