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

#include "cwm/planners/search.hpp"

#include <functional>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "cwm/core/errors.hpp"
#include "cwm/core/hash.hpp"

namespace cwm::planners {
namespace {

using RootFn = std::function<GameState(Rng&, SearchCounters&)>;
using ObserveFn = std::function<std::string(const GameState&, PlayerId)>;

std::uint64_t player_seed(PlayerId p) { return splitmix64(static_cast<std::uint64_t>(p) + 1); }

std::vector<double> leaf_value(const WorldModel& model, const GameState& state,
                               const SearchConfig& config, const ValueFunction* value_fn,
                               int num_players, Rng& rng, SearchCounters& counters) {
  if (value_fn != nullptr) {
    ++counters.value_calls;
    std::vector<double> values(static_cast<std::size_t>(num_players));
    for (int p = 0; p < num_players; ++p) values[static_cast<std::size_t>(p)] = value_fn->value(state, p);
    return values;
  }
  counters.rollouts += config.num_rollouts;
  return rollout_value(model, state, config.num_rollouts, config.max_rollout_depth, rng);
}

// Shared UCT loop. `next_root` yields the (possibly determinized) root state
// of each simulation; `observe` renders what the acting player sees.
SearchResult run_search(const WorldModel& model, const RootFn& next_root, const ObserveFn& observe,
                        const SearchConfig& config, const ValueFunction* value_fn) {
  if (config.num_simulations < 1) throw std::invalid_argument("num_simulations must be at least 1");
  if (value_fn == nullptr && config.num_rollouts < 1) {
    throw std::invalid_argument("num_rollouts must be at least 1 without a value function");
  }
  const int n = model.num_players();
  SearchResult result;
  Rng rng(config.seed);
  std::vector<std::uint64_t> chain(static_cast<std::size_t>(n));
  std::vector<std::pair<NodeStats*, std::size_t>> path;

  for (int sim = 0; sim < config.num_simulations; ++sim) {
    GameState state = next_root(rng, result.counters);
    ++result.counters.simulations;
    for (int p = 0; p < n; ++p) chain[static_cast<std::size_t>(p)] = player_seed(p);
    path.clear();
    std::vector<double> values;

    while (true) {
      const PlayerId current = model.get_current_player(state);
      if (current == kTerminalPlayer) {
        values = model.get_rewards(state);
        break;
      }
      auto legal = model.get_legal_actions(state);
      if (legal.empty()) throw ModelFault("non-terminal state without legal actions");
      if (current == kChancePlayer) {
        state = model.apply_action(state, legal[rng.uniform_index(legal.size())]);
        continue;
      }
      if (current < 0 || current >= n) {
        throw ModelFault("invalid current player " + std::to_string(current));
      }
      auto& own_chain = chain[static_cast<std::size_t>(current)];
      const std::uint64_t key = hash_combine(own_chain, fnv1a64(observe(state, current)));
      const bool at_root = path.empty();
      if (at_root && sim == 0) {
        result.root_key = key;
        result.root_actions = legal;
      }
      auto [it, inserted] = result.table.try_emplace(key);
      NodeStats& node = it->second;
      if (inserted) node.actor = current;
      if (inserted && !at_root) {
        values = leaf_value(model, state, config, value_fn, n, rng, result.counters);
        break;
      }
      std::size_t best = 0;
      double best_priority = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < legal.size(); ++i) {
        const EdgeStats* e = node.find(legal[i]);
        const double priority = e == nullptr
                                    ? kUnvisitedPriority
                                    : ucb_priority(e->mean(), e->visits, node.visits,
                                                   config.exploration_constant);
        if (priority > best_priority) {
          best_priority = priority;
          best = i;
        }
      }
      const Action& action = legal[best];
      node.edge(action);
      std::size_t edge_index = 0;
      while (node.actions[edge_index] != action) ++edge_index;
      path.emplace_back(&node, edge_index);
      own_chain = hash_combine(key, fnv1a64(action));
      state = model.apply_action(state, action);
    }

    if (static_cast<int>(values.size()) != n) {
      throw ModelFault("reward vector has " + std::to_string(values.size()) + " entries, expected " +
                       std::to_string(n));
    }
    for (auto& [node, idx] : path) {
      node->visits += 1;
      EdgeStats& e = node->edges[idx];
      e.visits += 1;
      e.total_value += values[static_cast<std::size_t>(node->actor)];
    }
  }

  const NodeStats& root = result.table.at(result.root_key);
  std::int64_t best_visits = -1;
  for (const auto& a : result.root_actions) {
    const EdgeStats* e = root.find(a);
    const std::int64_t v = e == nullptr ? 0 : e->visits;
    if (v > best_visits) {
      best_visits = v;
      result.action = a;
    }
  }
  return result;
}

void require_decision(const WorldModel& model, const GameState& state) {
  const PlayerId current = model.get_current_player(state);
  if (current == kTerminalPlayer) throw NoLegalActions("search requested at a terminal state");
  if (current < 0) throw NoLegalActions("search root must be a player decision, got " + player_name(current));
  if (model.get_legal_actions(state).empty()) throw NoLegalActions("no legal actions at the search root");
}

}  // namespace

double ucb_priority(double q_mean, std::int64_t n_action, std::int64_t n_parent, double c) {
  if (n_action == 0) return kUnvisitedPriority;
  if (c == 0.0) return q_mean;
  return q_mean + c * std::sqrt(std::log(static_cast<double>(n_parent)) / static_cast<double>(n_action));
}

std::vector<double> rollout_value(const WorldModel& model, const GameState& state, int num_rollouts,
                                  int max_depth, Rng& rng) {
  const auto n = static_cast<std::size_t>(model.num_players());
  std::vector<double> total(n, 0.0);
  if (model.is_terminal(state)) return model.get_rewards(state);
  for (int r = 0; r < num_rollouts; ++r) {
    GameState s = state;
    int depth = 0;
    while (!model.is_terminal(s) && depth < max_depth) {
      const auto legal = model.get_legal_actions(s);
      if (legal.empty()) throw ModelFault("non-terminal state without legal actions");
      s = model.apply_action(s, legal[rng.uniform_index(legal.size())]);
      ++depth;
    }
    if (!model.is_terminal(s)) continue;  // truncated playouts score zero
    const auto rewards = model.get_rewards(s);
    if (rewards.size() != n) throw ModelFault("reward vector length differs from the player count");
    for (std::size_t p = 0; p < n; ++p) total[p] += rewards[p];
  }
  for (auto& v : total) v /= static_cast<double>(num_rollouts);
  return total;
}

EdgeStats& NodeStats::edge(const Action& action) {
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i] == action) return edges[i];
  }
  actions.push_back(action);
  edges.emplace_back();
  return edges.back();
}

const EdgeStats* NodeStats::find(const Action& action) const {
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i] == action) return &edges[i];
  }
  return nullptr;
}

std::string SearchResult::diagnostic_table() const {
  std::ostringstream out;
  out << std::left << std::setw(24) << "action" << std::right << std::setw(10) << "visits" << std::setw(14)
      << "total" << std::setw(12) << "mean" << "\n";
  const NodeStats* node = nullptr;
  if (auto it = table.find(root_key); it != table.end()) node = &it->second;
  for (const auto& a : root_actions) {
    const EdgeStats* e = node == nullptr ? nullptr : node->find(a);
    const EdgeStats stats = e == nullptr ? EdgeStats{} : *e;
    out << std::left << std::setw(24) << a << std::right << std::setw(10) << stats.visits << std::setw(14)
        << std::fixed << std::setprecision(4) << stats.total_value << std::setw(12) << stats.mean()
        << (a == action ? "  *" : "") << "\n";
  }
  out << "simulations=" << counters.simulations << " rollouts=" << counters.rollouts
      << " value_calls=" << counters.value_calls << " resample_attempts=" << counters.resample_attempts
      << " resample_failures=" << counters.resample_failures << "\n";
  return out.str();
}

SearchResult mcts_search(const WorldModel& model, const GameState& state, const SearchConfig& config,
                         const ValueFunction* value_fn) {
  require_decision(model, state);
  return run_search(
      model, [&](Rng&, SearchCounters&) { return state; },
      [](const GameState& s, PlayerId) { return s.canonical(); }, config, value_fn);
}

Action mcts_select_action(const WorldModel& model, const GameState& state, const SearchConfig& config,
                          const ValueFunction* value_fn) {
  return mcts_search(model, state, config, value_fn).action;
}

GameState resample_with_retry(const HistorySampler& sampler, const WorldModel& model, const GameState& initial,
                              const ObsActionHistory& history, PlayerId player, Rng& rng, int max_retries,
                              SearchCounters* counters) {
  if (history.empty()) throw BeliefExhausted("cannot resample from an empty history");
  const Value& target = history.back().observation;
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    if (counters != nullptr) ++counters->resample_attempts;
    try {
      GameState state = initial;
      for (const auto& a : sampler.resample_history(history, player, false, rng)) {
        state = model.apply_action(state, a);
      }
      const auto obs = model.get_observations(state);
      if (static_cast<std::size_t>(player) < obs.size() &&
          structurally_equal(obs[static_cast<std::size_t>(player)], target)) {
        return state;
      }
    } catch (const std::exception&) {
      // Sampled histories may be arbitrary; any fault is a failed attempt.
    }
    if (counters != nullptr) ++counters->resample_failures;
  }
  throw BeliefExhausted("no consistent state after " + std::to_string(max_retries) + " attempts");
}

HistoryBelief::HistoryBelief(std::shared_ptr<const WorldModel> model, std::shared_ptr<const HistorySampler> sampler,
                             int max_retries, std::string source)
    : model_(std::move(model)),
      sampler_(std::move(sampler)),
      initial_(model_->initial_state()),
      max_retries_(max_retries),
      source_(std::move(source)) {}

GameState HistoryBelief::resample(const ObsActionHistory& history, PlayerId player, Rng& rng,
                                  SearchCounters* counters) const {
  return resample_with_retry(*sampler_, *model_, initial_, history, player, rng, max_retries_, counters);
}

StateBelief::StateBelief(std::shared_ptr<const WorldModel> model, std::shared_ptr<const StateSampler> sampler,
                         int max_retries)
    : model_(std::move(model)), sampler_(std::move(sampler)), max_retries_(max_retries) {}

GameState StateBelief::resample(const ObsActionHistory& history, PlayerId player, Rng& rng,
                                SearchCounters* counters) const {
  if (history.empty()) throw BeliefExhausted("cannot resample from an empty history");
  for (int attempt = 0; attempt < max_retries_; ++attempt) {
    if (counters != nullptr) ++counters->resample_attempts;
    try {
      GameState state = sampler_->resample_state(history, player, rng);
      const auto obs = model_->get_observations(state);
      if (static_cast<std::size_t>(player) < obs.size() &&
          structurally_equal(obs[static_cast<std::size_t>(player)], history.back().observation)) {
        return state;
      }
    } catch (const std::exception&) {
    }
    if (counters != nullptr) ++counters->resample_failures;
  }
  throw BeliefExhausted("no consistent state after " + std::to_string(max_retries_) + " attempts");
}

SearchResult ismcts_search(const WorldModel& model, const BeliefSampler& belief, const ObsActionHistory& history,
                           PlayerId player, const SearchConfig& config, const ValueFunction* value_fn) {
  bool checked = false;
  return run_search(
      model,
      [&](Rng& rng, SearchCounters& counters) {
        GameState root = belief.resample(history, player, rng, &counters);
        if (!checked) {
          if (model.get_current_player(root) != player) {
            throw NoLegalActions("player " + std::to_string(player) + " is not to act in the sampled state");
          }
          require_decision(model, root);
          checked = true;
        }
        return root;
      },
      [&](const GameState& s, PlayerId p) {
        const auto obs = model.get_observations(s);
        if (static_cast<std::size_t>(p) >= obs.size()) throw ModelFault("missing observation for player");
        return canonical_serialize(obs[static_cast<std::size_t>(p)]);
      },
      config, value_fn);
}

Action ismcts_select_action(const WorldModel& model, const BeliefSampler& belief, const ObsActionHistory& history,
                            PlayerId player, const SearchConfig& config, const ValueFunction* value_fn) {
  return ismcts_search(model, belief, history, player, config, value_fn).action;
}

}  // namespace cwm::planners
