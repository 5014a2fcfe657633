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

#ifndef CWM_GAMES_REGISTRY_HPP_
#define CWM_GAMES_REGISTRY_HPP_

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cwm/core/world_model.hpp"

namespace cwm::games {

enum class Observability { kPerfect, kImperfect };
enum class PayoffKind { kWinLossDraw, kZeroSum, kGeneralSum };

struct GameMetadata {
  int num_players = 2;
  Observability observability = Observability::kPerfect;
  PayoffKind payoff_kind = PayoffKind::kWinLossDraw;
  int action_universe_size = 0;
};

// Payoffs assigned when `forfeiter` fails to provide a valid action at
// `state`.
using ForfeitRule =
    std::function<std::vector<double>(const GameState& state, PlayerId forfeiter)>;

struct GameBundle {
  std::string name;
  // Ground-truth engine; imperfect-information games also carry their
  // reference history sampler.
  WorldModelHandle model;
  GameState initial_state;
  GameMetadata metadata;
  std::string rules;  // natural-language rules used in synthesis prompts
  ForfeitRule forfeit_payoffs;

  bool perfect_information() const {
    return metadata.observability == Observability::kPerfect;
  }
};

// Throws UnknownGame.
GameBundle make_game(std::string_view name);
const std::vector<std::string>& game_names();

// Reference hidden-history inference for an imperfect-information game.
// Throws UnknownGame, or NotApplicable for perfect-information games.
std::shared_ptr<const HistorySampler> reference_inference(std::string_view name);

// Forfeit rule for win/loss/draw games: -1 for the forfeiter, +1 otherwise.
std::vector<double> win_loss_forfeit(int num_players, PlayerId forfeiter);

std::string to_string(Observability o);
std::string to_string(PayoffKind k);

}  // namespace cwm::games

#endif  // CWM_GAMES_REGISTRY_HPP_
