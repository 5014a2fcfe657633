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

#ifndef CWM_GAMES_BARGAINING_HPP_
#define CWM_GAMES_BARGAINING_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cwm/games/native_engine.hpp"

namespace cwm::games {

using ItemCounts = std::array<int, 3>;

struct BargainingOffer {
  int player = 0;
  ItemCounts keep{};  // quantities the proposer keeps for itself
};

struct BargainingState {
  std::optional<ItemCounts> pool;
  std::array<std::optional<ItemCounts>, 2> values;
  std::vector<BargainingOffer> offers;
  bool agreed = false;
  PlayerId current = kChancePlayer;

  Value to_value() const;
};

// Alternating-offers negotiation over three item types.
//
// Chance draws, in order, the pool ("pool:a,b,c", each 1..3), player 0's
// private valuations ("p0_values:a,b,c", each 0..4) and player 1's
// ("p1_values:a,b,c"). Player 0 proposes first. Actions are
// "player <p> offers a,b,c" (the proposer keeps a,b,c; the other player gets
// the remainder), enumerated lexicographically, followed by
// "player <p> agrees" when an opponent offer is on the table. Agreement pays
// each player the value of its share; the tenth offer without agreement ends
// the game with zero for both.
class Bargaining final : public NativeEngine<BargainingState, Bargaining> {
 public:
  static constexpr int kMaxOffers = 10;
  static constexpr int kMaxQuantity = 3;
  static constexpr int kMaxValue = 4;

  int num_players() const override { return 2; }
  GameState initial_state() const override;
  GameState apply_action(const GameState& state,
                         const Action& action) const override;
  PlayerId get_current_player(const GameState& state) const override;
  std::vector<double> get_rewards(const GameState& state) const override;
  std::vector<Action> get_legal_actions(const GameState& state) const override;
  std::vector<Value> get_observations(const GameState& state) const override;

  BargainingState parse(const Value& value) const;

  // The forfeiting player receives 0; the other player receives the value of
  // its share under the standing offer, if any.
  std::vector<double> forfeit_payoffs(const GameState& state,
                                      PlayerId forfeiter) const;

  static std::string format_counts(const ItemCounts& counts);
  static std::optional<ItemCounts> parse_counts(std::string_view text);
};

}  // namespace cwm::games

#endif  // CWM_GAMES_BARGAINING_HPP_
