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

#ifndef CWM_GAMES_REFERENCE_SAMPLERS_HPP_
#define CWM_GAMES_REFERENCE_SAMPLERS_HPP_

#include <memory>
#include <vector>

#include "cwm/core/world_model.hpp"

namespace cwm::games {

// Hidden-history samplers written against the ground-truth engines. Each
// returns a full action history (chance and all players) that replays to the
// given evidence.

// Opponent card uniform over the cards not visible to the player; betting
// actions read from the latest observation.
class LeducHistorySampler final : public HistorySampler {
 public:
  std::vector<Action> resample_history(const ObsActionHistory& history,
                                       PlayerId player, bool last_is_terminal,
                                       Rng& rng) const override;
};

// Opponent valuations uniform over their range; offers read from the latest
// observation.
class BargainingHistorySampler final : public HistorySampler {
 public:
  std::vector<Action> resample_history(const ObsActionHistory& history,
                                       PlayerId player, bool last_is_terminal,
                                       Rng& rng) const override;
};

// Guided replay: own draws are the cards as they first appear in the
// player's hand, cards the opponent is seen to play are drawn for it as early
// as possible, and every other hidden card (burns, unseen opponent cards, a
// pending opponent commitment) is drawn at random from the unreserved cards.
class HandOfWarHistorySampler final : public HistorySampler {
 public:
  std::vector<Action> resample_history(const ObsActionHistory& history,
                                       PlayerId player, bool last_is_terminal,
                                       Rng& rng) const override;
};

}  // namespace cwm::games

#endif  // CWM_GAMES_REFERENCE_SAMPLERS_HPP_
