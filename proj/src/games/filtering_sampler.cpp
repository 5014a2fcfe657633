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

#include "cwm/games/filtering_sampler.hpp"

#include <algorithm>

#include "cwm/core/errors.hpp"

namespace cwm::games {

struct FilteringHistorySampler::Table {
  const WorldModel* model = nullptr;
  PlayerId player = 0;
  bool last_is_terminal = false;
  int max_depth = 0;
  ObsActionHistory history_copy;
  std::unordered_map<std::string, double> memo;

  static std::string key(const GameState& state, std::size_t idx) {
    std::string k = state.canonical();
    k += '#';
    k += std::to_string(idx);
    return k;
  }

  bool observation_matches(const GameState& state, std::size_t idx) const {
    const auto obs = model->get_observations(state);
    const auto p = static_cast<std::size_t>(player);
    return p < obs.size() && structurally_equal(obs[p], history_copy[idx].observation);
  }

  // Probability that uniform play of everyone but `player`, starting at
  // `state`, reproduces evidence entries idx.. of the history.
  double mass(const GameState& state, std::size_t idx, int depth) {
    if (depth > max_depth) return 0.0;
    const std::string k = key(state, idx);
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    double m = 0.0;
    try {
      m = compute(state, idx, depth);
    } catch (const ModelFault&) {
      m = 0.0;
    }
    memo.emplace(k, m);
    return m;
  }

  double compute(const GameState& state, std::size_t idx, int depth) {
    const std::size_t n = history_copy.size();
    const PlayerId current = model->get_current_player(state);
    if (current == kTerminalPlayer) {
      return last_is_terminal && idx + 1 == n && observation_matches(state, idx) ? 1.0 : 0.0;
    }
    if (current == player) {
      if (idx >= n || !observation_matches(state, idx)) return 0.0;
      const auto& entry = history_copy[idx];
      if (!entry.action) return idx + 1 == n && !last_is_terminal ? 1.0 : 0.0;
      const auto legal = model->get_legal_actions(state);
      if (std::find(legal.begin(), legal.end(), *entry.action) == legal.end()) return 0.0;
      GameState next = model->apply_action(state, *entry.action);
      if (idx + 1 == n) return last_is_terminal ? 0.0 : 1.0;
      return mass(next, idx + 1, depth + 1);
    }
    const auto legal = model->get_legal_actions(state);
    if (legal.empty()) return 0.0;
    double total = 0.0;
    for (const auto& a : legal) total += mass(model->apply_action(state, a), idx, depth + 1);
    return total / static_cast<double>(legal.size());
  }
};

std::shared_ptr<FilteringHistorySampler::Table> FilteringHistorySampler::table_for(
    const ObsActionHistory& history, PlayerId player, bool last_is_terminal) const {
  std::string key = canonical_serialize(to_value(history));
  key += '|' + std::to_string(player) + (last_is_terminal ? "|t" : "|n");
  if (cached_ && key == cached_key_) return cached_;
  auto table = std::make_shared<Table>();
  table->model = model_.get();
  table->player = player;
  table->last_is_terminal = last_is_terminal;
  table->max_depth = max_depth_;
  table->history_copy = history;
  cached_key_ = std::move(key);
  cached_ = table;
  return table;
}

double FilteringHistorySampler::evidence_probability(const ObsActionHistory& history,
                                                     PlayerId player,
                                                     bool last_is_terminal) const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (history.empty()) return 0.0;
  auto table = table_for(history, player, last_is_terminal);
  return table->mass(model_->initial_state(), 0, 0);
}

std::vector<Action> FilteringHistorySampler::resample_history(const ObsActionHistory& history,
                                                              PlayerId player,
                                                              bool last_is_terminal,
                                                              Rng& rng) const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (history.empty()) throw BeliefExhausted("empty observation-action history");
  auto table = table_for(history, player, last_is_terminal);
  GameState state = model_->initial_state();
  if (table->mass(state, 0, 0) <= 0.0) {
    throw BeliefExhausted("no history of the model is consistent with the evidence");
  }
  std::vector<Action> actions;
  std::size_t idx = 0;
  int depth = 0;
  while (true) {
    const PlayerId current = model_->get_current_player(state);
    if (current == kTerminalPlayer) break;
    if (current == player) {
      const auto& entry = history[idx];
      if (!entry.action) break;
      actions.push_back(*entry.action);
      state = model_->apply_action(state, *entry.action);
      ++idx;
      if (idx == history.size()) break;
    } else {
      const auto legal = model_->get_legal_actions(state);
      std::vector<double> weights;
      std::vector<GameState> children;
      double total = 0.0;
      for (const auto& a : legal) {
        children.push_back(model_->apply_action(state, a));
        weights.push_back(table->mass(children.back(), idx, depth + 1));
        total += weights.back();
      }
      double u = rng.uniform01() * total;
      std::size_t pick = 0;
      // Skip zero-mass children so rounding never selects an inconsistent one.
      for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        pick = i;
        if (u < weights[i]) break;
        u -= weights[i];
      }
      actions.push_back(legal[pick]);
      state = children[pick];
    }
    ++depth;
  }
  return actions;
}

}  // namespace cwm::games
