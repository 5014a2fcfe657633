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

#ifndef CWM_GAMES_LEDUC_POKER_HPP_
#define CWM_GAMES_LEDUC_POKER_HPP_

#include <array>
#include <string>
#include <vector>

#include "cwm/games/native_engine.hpp"

namespace cwm::games {

// Cards are indexed 0..5 as Js, Jh, Qs, Qh, Ks, Kh; rank = index / 2.
struct LeducState {
  std::array<int, 2> private_cards{-1, -1};
  int public_card = -1;
  int round = 1;
  std::array<int, 2> contributions{1, 2};
  int raises = 1;  // the big blind counts as the first bet of round one
  int actions_in_round = 0;
  std::array<std::vector<std::string>, 2> history;
  PlayerId current = kChancePlayer;
  int folded = -1;

  Value to_value() const;
};

// Two-player Leduc hold'em with blinds 1/2, raise sizes 2 then 4 and at most
// two bets per round. Player 0 posts the small blind and acts first in both
// rounds.
//
// Actions: "Fold", "Call", "Raise" (in that order); chance actions
// "deal:<card>" (e.g. "deal:Ks") over the undealt cards in index order.
// Fold is legal only when facing an outstanding bet.
class LeducPoker final : public NativeEngine<LeducState, LeducPoker> {
 public:
  int num_players() const override { return 2; }
  GameState initial_state() const override;
  GameState apply_action(const GameState& state,
                         const Action& action) const override;
  PlayerId get_current_player(const GameState& state) const override;
  std::vector<double> get_rewards(const GameState& state) const override;
  std::vector<Action> get_legal_actions(const GameState& state) const override;
  std::vector<Value> get_observations(const GameState& state) const override;

  LeducState parse(const Value& value) const;

  // Payoffs when `forfeiter` abandons the hand: treated as a fold.
  std::vector<double> forfeit_payoffs(const GameState& state,
                                      PlayerId forfeiter) const;

  static std::string card_name(int card);
  static int card_index(std::string_view name);  // -1 when unknown
};

}  // namespace cwm::games

#endif  // CWM_GAMES_LEDUC_POKER_HPP_
