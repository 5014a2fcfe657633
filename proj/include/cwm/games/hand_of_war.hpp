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

#ifndef CWM_GAMES_HAND_OF_WAR_HPP_
#define CWM_GAMES_HAND_OF_WAR_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cwm/games/native_engine.hpp"

namespace cwm::games {

using CardSet = std::uint16_t;  // bit i set when card i is present

struct HandOfWarState {
  CardSet undealt = 0xFFFF;  // cards still in the two draw piles
  std::array<int, 2> draw_counts{8, 8};
  std::array<CardSet, 2> hands{0, 0};
  std::array<CardSet, 2> win_piles{0, 0};
  CardSet table = 0;  // contested cards, including face-down burns
  std::array<int, 2> commits{-1, -1};
  std::array<int, 2> pending_draws{3, 3};
  std::array<int, 2> pending_burns{0, 0};
  std::vector<std::pair<int, int>> revealed;  // (player 0 card, player 1 card)
  bool over = false;

  Value to_value() const;
};

// Two-player card battle with 16 cards (A, K, Q, J in four suits).
//
// Dealing is lazy: each time a player draws from (or burns off) its draw pile,
// chance picks the card uniformly from the undealt cards ("draw:<card>" or
// "burn:<card>"), which is equivalent to shuffling and splitting the deck.
// Simultaneous selection is sequential with hidden commitment: player 0
// commits face down, then player 1, then both cards are revealed. Ties start
// a showdown (each player burns one card, then selects again). When a player
// cannot draw or burn as required the game ends and win piles are compared.
//
// Player actions: "play:<card>" for each card in hand, in card order.
// Cards are written rank then suit, e.g. "AS", "QH".
class HandOfWar final : public NativeEngine<HandOfWarState, HandOfWar> {
 public:
  static constexpr int kNumCards = 16;
  static constexpr int kHandSize = 3;

  int num_players() const override { return 2; }
  GameState initial_state() const override;
  GameState apply_action(const GameState& state,
                         const Action& action) const override;
  PlayerId get_current_player(const GameState& state) const override;
  std::vector<double> get_rewards(const GameState& state) const override;
  std::vector<Action> get_legal_actions(const GameState& state) const override;
  std::vector<Value> get_observations(const GameState& state) const override;

  HandOfWarState parse(const Value& value) const;

  static PlayerId current_player_of(const HandOfWarState& s);
  static std::string card_name(int card);
  static int card_index(std::string_view name);  // -1 when unknown
  static int rank_of(int card) { return card / 4; }
};

}  // namespace cwm::games

#endif  // CWM_GAMES_HAND_OF_WAR_HPP_
