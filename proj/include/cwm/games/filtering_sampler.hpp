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

#ifndef CWM_GAMES_FILTERING_SAMPLER_HPP_
#define CWM_GAMES_FILTERING_SAMPLER_HPP_

#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "cwm/core/world_model.hpp"

namespace cwm::games {

// Exact posterior sampler for games with small trees.
//
// Computes, for every reachable (state, evidence position) pair, the
// probability that uniform play by chance and by the other players
// reproduces the remaining evidence, then walks down the tree choosing
// non-evidence actions in proportion to that mass. Own actions come from the
// evidence. The table of the most recent evidence is kept, so repeated calls
// during one search are cheap.
class FilteringHistorySampler final : public HistorySampler {
 public:
  explicit FilteringHistorySampler(std::shared_ptr<const WorldModel> model,
                                   int max_depth = 1000)
      : model_(std::move(model)), max_depth_(max_depth) {}

  std::vector<Action> resample_history(const ObsActionHistory& history,
                                       PlayerId player, bool last_is_terminal,
                                       Rng& rng) const override;

  // Probability of the evidence under uniform play of everyone but `player`
  // (0 when the evidence is inconsistent with the model).
  double evidence_probability(const ObsActionHistory& history, PlayerId player,
                              bool last_is_terminal) const;

 private:
  struct Table;

  std::shared_ptr<Table> table_for(const ObsActionHistory& history,
                                   PlayerId player,
                                   bool last_is_terminal) const;

  std::shared_ptr<const WorldModel> model_;
  int max_depth_;
  mutable std::mutex mutex_;
  mutable std::string cached_key_;
  mutable std::shared_ptr<Table> cached_;
};

}  // namespace cwm::games

#endif  // CWM_GAMES_FILTERING_SAMPLER_HPP_
