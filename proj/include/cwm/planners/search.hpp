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

#ifndef CWM_PLANNERS_SEARCH_HPP_
#define CWM_PLANNERS_SEARCH_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "cwm/core/world_model.hpp"

namespace cwm::planners {

struct SearchConfig {
  int num_simulations = 1000;
  int num_rollouts = 10;
  double exploration_constant = std::sqrt(2.0);
  int max_rollout_depth = 1000;
  std::uint64_t seed = 0;
  // Belief resampling attempts per simulation (ISMCTS only).
  int max_retries = 10;
};

inline constexpr double kUnvisitedPriority = std::numeric_limits<double>::infinity();

// UCB1 priority of an edge; +infinity for unvisited edges.
double ucb_priority(double q_mean, std::int64_t n_action, std::int64_t n_parent,
                    double c);

// Mean terminal reward vector over `num_rollouts` uniform-random playouts from
// `state`. Playouts cut off after `max_depth` steps score zero.
std::vector<double> rollout_value(const WorldModel& model, const GameState& state,
                                  int num_rollouts, int max_depth, Rng& rng);

struct EdgeStats {
  std::int64_t visits = 0;
  double total_value = 0.0;
  double mean() const { return visits == 0 ? 0.0 : total_value / static_cast<double>(visits); }
};

struct NodeStats {
  PlayerId actor = 0;
  std::int64_t visits = 0;
  std::vector<Action> actions;  // in first-seen legal order
  std::vector<EdgeStats> edges;

  EdgeStats& edge(const Action& action);
  const EdgeStats* find(const Action& action) const;
};

struct SearchCounters {
  std::int64_t simulations = 0;
  std::int64_t rollouts = 0;
  std::int64_t value_calls = 0;
  std::int64_t resample_attempts = 0;
  std::int64_t resample_failures = 0;
};

struct SearchResult {
  Action action;
  std::uint64_t root_key = 0;
  std::vector<Action> root_actions;  // legal actions at the root
  std::unordered_map<std::uint64_t, NodeStats> table;
  SearchCounters counters;

  const NodeStats& root() const { return table.at(root_key); }
  // Text table of the root edges (action, visits, total value, mean).
  std::string diagnostic_table() const;
};

// Plain UCT from a known state. Node keys digest the acting player's view of
// the state and its own actions along the path, so the tree is a tree over
// histories.
SearchResult mcts_search(const WorldModel& model, const GameState& state,
                         const SearchConfig& config,
                         const ValueFunction* value_fn = nullptr);
Action mcts_select_action(const WorldModel& model, const GameState& state,
                          const SearchConfig& config,
                          const ValueFunction* value_fn = nullptr);

// Source of determinized root states for ISMCTS.
class BeliefSampler {
 public:
  virtual ~BeliefSampler() = default;
  virtual GameState resample(const ObsActionHistory& history, PlayerId player,
                             Rng& rng, SearchCounters* counters = nullptr) const = 0;
  virtual std::string source() const = 0;
};

// Draws a full history from `sampler`, replays it through `model` from
// `initial` and accepts when the player's recreated observation equals the
// last recorded one. Histories that fault during replay count as failed
// attempts. Throws BeliefExhausted after `max_retries` failures.
GameState resample_with_retry(const HistorySampler& sampler, const WorldModel& model,
                              const GameState& initial, const ObsActionHistory& history,
                              PlayerId player, Rng& rng, int max_retries = 10,
                              SearchCounters* counters = nullptr);

class HistoryBelief final : public BeliefSampler {
 public:
  HistoryBelief(std::shared_ptr<const WorldModel> model,
                std::shared_ptr<const HistorySampler> sampler, int max_retries = 10,
                std::string source = "reference");
  GameState resample(const ObsActionHistory& history, PlayerId player, Rng& rng,
                     SearchCounters* counters = nullptr) const override;
  std::string source() const override { return source_; }

 private:
  std::shared_ptr<const WorldModel> model_;
  std::shared_ptr<const HistorySampler> sampler_;
  GameState initial_;
  int max_retries_;
  std::string source_;
};

// Draws states directly and accepts those whose observation for the player
// matches the last recorded one.
class StateBelief final : public BeliefSampler {
 public:
  StateBelief(std::shared_ptr<const WorldModel> model,
              std::shared_ptr<const StateSampler> sampler, int max_retries = 10);
  GameState resample(const ObsActionHistory& history, PlayerId player, Rng& rng,
                     SearchCounters* counters = nullptr) const override;
  std::string source() const override { return "synthesized-state"; }

 private:
  std::shared_ptr<const WorldModel> model_;
  std::shared_ptr<const StateSampler> sampler_;
  int max_retries_;
};

// Always returns the known true state; consumes no randomness.
class ExactStateBelief final : public BeliefSampler {
 public:
  explicit ExactStateBelief(GameState state) : state_(std::move(state)) {}
  GameState resample(const ObsActionHistory&, PlayerId, Rng&,
                     SearchCounters* = nullptr) const override {
    return state_;
  }
  std::string source() const override { return "exact-state"; }

 private:
  GameState state_;
};

// Information-set MCTS: every simulation starts from a fresh determinization
// drawn from `belief`; statistics are keyed by the acting player's
// observation-action history since the root, so they aggregate across
// determinizations.
SearchResult ismcts_search(const WorldModel& model, const BeliefSampler& belief,
                           const ObsActionHistory& history, PlayerId player,
                           const SearchConfig& config,
                           const ValueFunction* value_fn = nullptr);
Action ismcts_select_action(const WorldModel& model, const BeliefSampler& belief,
                            const ObsActionHistory& history, PlayerId player,
                            const SearchConfig& config,
                            const ValueFunction* value_fn = nullptr);

}  // namespace cwm::planners

#endif  // CWM_PLANNERS_SEARCH_HPP_
