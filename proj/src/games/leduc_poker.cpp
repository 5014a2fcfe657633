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

#include "cwm/games/leduc_poker.hpp"

namespace cwm::games {
namespace {

constexpr const char* kCardNames[6] = {"Js", "Jh", "Qs", "Qh", "Ks", "Kh"};
constexpr int kRaiseSize[2] = {2, 4};
constexpr int kMaxBets = 2;

Value card_value(int card) {
  return card < 0 ? Value() : Value(LeducPoker::card_name(card));
}

int read_card(const Value& v) {
  if (v.is_null()) return -1;
  if (!v.is_string()) throw ModelFault("card must be a string or null");
  int idx = LeducPoker::card_index(v.get<std::string>());
  if (idx < 0) throw ModelFault("unknown card " + v.get<std::string>());
  return idx;
}

// Positive when player 0 holds the better hand.
int compare_hands(const LeducState& s) {
  auto strength = [&](int card) {
    int rank = card / 2;
    bool pair = rank == s.public_card / 2;
    return (pair ? 10 : 0) + rank;
  };
  return strength(s.private_cards[0]) - strength(s.private_cards[1]);
}

}  // namespace

std::string LeducPoker::card_name(int card) { return kCardNames[card]; }

int LeducPoker::card_index(std::string_view name) {
  for (int i = 0; i < 6; ++i) {
    if (name == kCardNames[i]) return i;
  }
  return -1;
}

Value LeducState::to_value() const {
  return Value{
      {"private_cards", Value::array({card_value(private_cards[0]), card_value(private_cards[1])})},
      {"public_card", card_value(public_card)},
      {"round", round},
      {"contributions", Value::array({contributions[0], contributions[1]})},
      {"raises", raises},
      {"actions_in_round", actions_in_round},
      {"history", Value::array({Value(history[0]), Value(history[1])})},
      {"current_player", current},
      {"folded", folded < 0 ? Value() : Value(folded)},
  };
}

LeducState LeducPoker::parse(const Value& v) const {
  try {
    LeducState s;
    s.private_cards = {read_card(v.at("private_cards").at(0)), read_card(v.at("private_cards").at(1))};
    s.public_card = read_card(v.at("public_card"));
    s.round = v.at("round").get<int>();
    s.contributions = {v.at("contributions").at(0).get<int>(), v.at("contributions").at(1).get<int>()};
    s.raises = v.at("raises").get<int>();
    s.actions_in_round = v.at("actions_in_round").get<int>();
    s.history = {v.at("history").at(0).get<std::vector<std::string>>(),
                 v.at("history").at(1).get<std::vector<std::string>>()};
    s.current = v.at("current_player").get<int>();
    s.folded = v.at("folded").is_null() ? -1 : v.at("folded").get<int>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ModelFault(std::string("malformed leduc state: ") + e.what());
  }
}

GameState LeducPoker::initial_state() const { return wrap(LeducState{}); }

std::vector<Action> LeducPoker::get_legal_actions(const GameState& state) const {
  auto data = unwrap(state);
  const LeducState& s = data->state;
  std::vector<Action> actions;
  if (s.current == kTerminalPlayer) return actions;
  if (s.current == kChancePlayer) {
    for (int c = 0; c < 6; ++c) {
      if (c != s.private_cards[0] && c != s.private_cards[1] && c != s.public_card) {
        actions.push_back("deal:" + card_name(c));
      }
    }
    return actions;
  }
  const int p = s.current;
  if (s.contributions[p] < s.contributions[1 - p]) actions.push_back("Fold");
  actions.push_back("Call");
  if (s.raises < kMaxBets) actions.push_back("Raise");
  return actions;
}

GameState LeducPoker::apply_action(const GameState& state, const Action& action) const {
  auto data = unwrap(state);
  const LeducState& s = data->state;
  LeducState n = s;
  if (s.current == kTerminalPlayer) throw IllegalAction("hand is over; no action applies: " + action);
  if (s.current == kChancePlayer) {
    if (action.rfind("deal:", 0) != 0) throw IllegalAction("chance must deal a card, got " + action);
    int card = card_index(std::string_view(action).substr(5));
    if (card < 0 || card == s.private_cards[0] || card == s.private_cards[1] || card == s.public_card) {
      throw IllegalAction("card not in deck: " + action);
    }
    if (n.private_cards[0] < 0) {
      n.private_cards[0] = card;
    } else if (n.private_cards[1] < 0) {
      n.private_cards[1] = card;
      n.current = 0;
    } else {
      n.public_card = card;
      n.current = 0;
    }
    return wrap(std::move(n));
  }
  const int p = s.current;
  const int o = 1 - p;
  if (action == "Fold") {
    if (s.contributions[p] >= s.contributions[o]) throw IllegalAction("cannot fold without an outstanding bet");
    n.folded = p;
    n.history[static_cast<std::size_t>(s.round - 1)].push_back(action);
    n.current = kTerminalPlayer;
    return wrap(std::move(n));
  }
  if (action == "Call") {
    n.contributions[p] = s.contributions[o];
  } else if (action == "Raise") {
    if (s.raises >= kMaxBets) throw IllegalAction("betting cap reached; cannot raise");
    n.contributions[p] = s.contributions[o] + kRaiseSize[s.round - 1];
    n.raises += 1;
  } else {
    throw IllegalAction("illegal action: " + action);
  }
  n.history[static_cast<std::size_t>(s.round - 1)].push_back(action);
  n.actions_in_round += 1;
  const bool round_over = action == "Call" && n.actions_in_round >= 2;
  if (!round_over) {
    n.current = o;
  } else if (s.round == 1) {
    n.round = 2;
    n.raises = 0;
    n.actions_in_round = 0;
    n.current = kChancePlayer;
  } else {
    n.current = kTerminalPlayer;
  }
  return wrap(std::move(n));
}

PlayerId LeducPoker::get_current_player(const GameState& state) const {
  return unwrap(state)->state.current;
}

std::vector<double> LeducPoker::get_rewards(const GameState& state) const {
  auto data = unwrap(state);
  const LeducState& s = data->state;
  if (s.current != kTerminalPlayer) return {0.0, 0.0};
  if (s.folded >= 0) {
    std::vector<double> r(2);
    r[static_cast<std::size_t>(s.folded)] = -s.contributions[static_cast<std::size_t>(s.folded)];
    r[static_cast<std::size_t>(1 - s.folded)] = s.contributions[static_cast<std::size_t>(s.folded)];
    return r;
  }
  const int cmp = compare_hands(s);
  if (cmp == 0) return {0.0, 0.0};
  const double pot = s.contributions[0];
  return cmp > 0 ? std::vector<double>{pot, -pot} : std::vector<double>{-pot, pot};
}

std::vector<Value> LeducPoker::get_observations(const GameState& state) const {
  auto data = unwrap(state);
  const LeducState& s = data->state;
  std::vector<Value> obs;
  for (int p = 0; p < 2; ++p) {
    obs.push_back(Value{
        {"player", p},
        {"private_card", card_value(s.private_cards[static_cast<std::size_t>(p)])},
        {"public_card", card_value(s.public_card)},
        {"contributions", Value::array({s.contributions[0], s.contributions[1]})},
        {"round", s.round},
        {"history", Value::array({Value(s.history[0]), Value(s.history[1])})},
        {"current_player", s.current},
    });
  }
  return obs;
}

std::vector<double> LeducPoker::forfeit_payoffs(const GameState& state, PlayerId forfeiter) const {
  auto data = unwrap(state);
  const double lost = data->state.contributions[static_cast<std::size_t>(forfeiter)];
  std::vector<double> r(2, lost);
  r[static_cast<std::size_t>(forfeiter)] = -lost;
  return r;
}

}  // namespace cwm::games
