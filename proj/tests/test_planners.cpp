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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <memory>

#include "cwm/core/errors.hpp"
#include "cwm/games/registry.hpp"
#include "cwm/planners/search.hpp"
#include "support/oracles.hpp"

namespace cwm::planners {
namespace {

GameState play(const WorldModel& m, GameState s, const std::vector<Action>& actions) {
  for (const auto& a : actions) s = m.apply_action(s, a);
  return s;
}

SearchConfig small_config(int sims, std::uint64_t seed = 1) {
  SearchConfig c;
  c.num_simulations = sims;
  c.seed = seed;
  return c;
}

TEST(Ucb, UnvisitedEdgesComeFirst) {
  EXPECT_EQ(ucb_priority(0.0, 0, 10, std::sqrt(2.0)), kUnvisitedPriority);
}

TEST(Ucb, MatchesTheFormula) {
  EXPECT_DOUBLE_EQ(ucb_priority(0.5, 4, 100, 2.0), 0.5 + 2.0 * std::sqrt(std::log(100.0) / 4.0));
  EXPECT_DOUBLE_EQ(ucb_priority(-0.25, 3, 9, 0.0), -0.25);
}

TEST(Rollout, TerminalStateReturnsRewards) {
  const auto bundle = games::make_game("tic_tac_toe");
  const WorldModel& m = *bundle.model.model;
  const GameState won = play(m, bundle.initial_state, {"x(0,0)", "o(1,0)", "x(0,1)", "o(1,1)", "x(0,2)"});
  Rng rng(1);
  EXPECT_EQ(rollout_value(m, won, 5, 1000, rng), (std::vector<double>{1.0, -1.0}));
}

TEST(Rollout, MeanOfManyPlayoutsApproachesExactRandomValue) {
  const auto bundle = games::make_game("tic_tac_toe");
  Rng rng(3);
  const auto v = rollout_value(*bundle.model.model, bundle.initial_state, 40000, 1000, rng);
  const auto exact = testing::ttt_random_play_distribution();
  EXPECT_NEAR(v[0], exact.first_wins - exact.second_wins, 0.015);
}

TEST(Rollout, DepthCutoffScoresZero) {
  const auto bundle = games::make_game("tic_tac_toe");
  Rng rng(3);
  EXPECT_EQ(rollout_value(*bundle.model.model, bundle.initial_state, 10, 2, rng), (std::vector<double>{0.0, 0.0}));
}

TEST(Mcts, RejectsTerminalAndChanceRoots) {
  const auto ttt = games::make_game("tic_tac_toe");
  const WorldModel& m = *ttt.model.model;
  const GameState won = play(m, ttt.initial_state, {"x(0,0)", "o(1,0)", "x(0,1)", "o(1,1)", "x(0,2)"});
  EXPECT_THROW(mcts_search(m, won, small_config(10)), NoLegalActions);
  const auto leduc = games::make_game("leduc_poker");
  EXPECT_THROW(mcts_search(*leduc.model.model, leduc.initial_state, small_config(10)), NoLegalActions);
}

TEST(Mcts, VisitsSumToSimulations) {
  const auto bundle = games::make_game("tic_tac_toe");
  const auto result = mcts_search(*bundle.model.model, bundle.initial_state, small_config(300));
  std::int64_t total = 0;
  for (const auto& e : result.root().edges) total += e.visits;
  EXPECT_EQ(total, 300);
  EXPECT_EQ(result.root().visits, 300);
  EXPECT_EQ(result.counters.simulations, 300);
  EXPECT_EQ(result.root_actions.size(), 9u);
}

TEST(Mcts, SameSeedSameSearch) {
  const auto bundle = games::make_game("connect_four");
  const auto a = mcts_search(*bundle.model.model, bundle.initial_state, small_config(200, 9));
  const auto b = mcts_search(*bundle.model.model, bundle.initial_state, small_config(200, 9));
  EXPECT_EQ(a.action, b.action);
  EXPECT_EQ(a.diagnostic_table(), b.diagnostic_table());
}

// Positions with a win in one (checked by the minimax oracle): the search must
// keep the game-theoretic value.
TEST(Mcts, PreservesMinimaxValueInTacticalPositions) {
  const auto bundle = games::make_game("tic_tac_toe");
  const WorldModel& m = *bundle.model.model;
  Rng rng(12);
  int positions = 0;
  while (positions < 25) {
    GameState s = bundle.initial_state;
    const int depth = 3 + static_cast<int>(rng.uniform_index(4));
    for (int i = 0; i < depth && !m.is_terminal(s); ++i) {
      const auto legal = m.get_legal_actions(s);
      s = m.apply_action(s, legal[rng.uniform_index(legal.size())]);
    }
    if (m.is_terminal(s)) continue;
    const int mover = m.get_current_player(s) == 0 ? 1 : 2;
    bool win_in_one = false;
    for (const auto& a : m.get_legal_actions(s)) {
      if (m.is_terminal(m.apply_action(s, a)) && m.get_rewards(m.apply_action(s, a))[mover - 1] > 0) win_in_one = true;
    }
    if (!win_in_one) continue;
    ++positions;
    const int value = testing::ttt_minimax(testing::ttt_board_from_value(s.to_value()), mover);
    const Action chosen = mcts_select_action(m, s, small_config(1000, static_cast<std::uint64_t>(positions)));
    const GameState next = m.apply_action(s, chosen);
    const int after = m.is_terminal(next) ? static_cast<int>(m.get_rewards(next)[0])
                                          : testing::ttt_minimax(testing::ttt_board_from_value(next.to_value()),
                                                                 3 - mover);
    EXPECT_EQ(after, value) << canonical_serialize(s.to_value()) << " chose " << chosen;
  }
}

TEST(Mcts, ConnectFourTakesImmediateWin) {
  const auto bundle = games::make_game("connect_four");
  const WorldModel& m = *bundle.model.model;
  const GameState s = play(m, bundle.initial_state, {"x0", "o6", "x1", "o6", "x2", "o5"});
  EXPECT_EQ(mcts_select_action(m, s, small_config(1000)), "x3");
}

TEST(Mcts, ConnectFourBlocksImmediateLoss) {
  const auto bundle = games::make_game("connect_four");
  const WorldModel& m = *bundle.model.model;
  const GameState s = play(m, bundle.initial_state, {"x0", "o6", "x1", "o6", "x2"});
  EXPECT_EQ(mcts_select_action(m, s, small_config(1000)), "o3");
}

class ZeroValue : public ValueFunction {
 public:
  double value(const GameState&, PlayerId) const override { return 0.0; }
};

TEST(Mcts, ValueFunctionReplacesRollouts) {
  const auto bundle = games::make_game("tic_tac_toe");
  ZeroValue zero;
  SearchConfig c = small_config(200);
  c.num_rollouts = 0;
  const auto result = mcts_search(*bundle.model.model, bundle.initial_state, c, &zero);
  EXPECT_EQ(result.counters.rollouts, 0);
  EXPECT_GT(result.counters.value_calls, 0);
  EXPECT_THROW(mcts_search(*bundle.model.model, bundle.initial_state, c), std::invalid_argument);
}

TEST(Ismcts, ExactStateBeliefReducesToMcts) {
  const auto bundle = games::make_game("tic_tac_toe");
  const WorldModel& m = *bundle.model.model;
  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    GameState s = bundle.initial_state;
    for (int i = 0; i < trial; ++i) {
      const auto legal = m.get_legal_actions(s);
      s = m.apply_action(s, legal[rng.uniform_index(legal.size())]);
    }
    const PlayerId p = m.get_current_player(s);
    const ObsActionHistory h{{m.get_observations(s)[p], std::nullopt}};
    const auto plain = mcts_search(m, s, small_config(500, 77));
    const auto info = ismcts_search(m, ExactStateBelief(s), h, p, small_config(500, 77));
    ASSERT_EQ(plain.table.size(), info.table.size());
    for (const auto& [key, node] : plain.table) {
      const auto it = info.table.find(key);
      ASSERT_NE(it, info.table.end());
      ASSERT_EQ(node.visits, it->second.visits);
      ASSERT_EQ(node.actions, it->second.actions);
      for (std::size_t i = 0; i < node.edges.size(); ++i) {
        ASSERT_EQ(node.edges[i].visits, it->second.edges[i].visits);
        ASSERT_EQ(node.edges[i].total_value, it->second.edges[i].total_value);
      }
    }
    EXPECT_EQ(plain.action, info.action);
  }
}

// Records the opponent card of every determinized root.
class CountingBelief : public BeliefSampler {
 public:
  explicit CountingBelief(const BeliefSampler& inner) : inner_(inner) {}
  GameState resample(const ObsActionHistory& h, PlayerId p, Rng& rng, SearchCounters* c) const override {
    GameState s = inner_.resample(h, p, rng, c);
    ++opponent_cards[s.to_value()["cards"][1 - p].get<std::string>()];
    return s;
  }
  std::string source() const override { return inner_.source(); }
  mutable std::map<std::string, int> opponent_cards;

 private:
  const BeliefSampler& inner_;
};

TEST(Ismcts, DeterminizationsCoverExactlyTheInformationSet) {
  auto model = std::make_shared<testing::ThreeCardPoker>();
  auto sampler = std::make_shared<testing::ThreeCardPokerSampler>();
  const HistoryBelief belief(model, sampler);
  const CountingBelief counting(belief);
  const GameState s = play(*model, model->initial_state(), {"deal:K", "deal:J"});
  const ObsActionHistory h{{model->get_observations(s)[0], std::nullopt}};
  const auto result = ismcts_search(*model, counting, h, 0, small_config(10000, 3));
  EXPECT_EQ(result.counters.simulations, 10000);
  ASSERT_EQ(counting.opponent_cards.size(), 2u);
  EXPECT_NEAR(counting.opponent_cards["Q"] / 10000.0, 0.5, 0.02);
  EXPECT_NEAR(counting.opponent_cards["J"] / 10000.0, 0.5, 0.02);
}

TEST(Ismcts, LeducSearchPicksLegalActions) {
  const auto bundle = games::make_game("leduc_poker");
  const WorldModel& m = *bundle.model.model;
  const HistoryBelief belief(bundle.model.model, bundle.model.history_sampler);
  const GameState s = play(m, bundle.initial_state, {"deal:Ks", "deal:Jh", "Call"});
  // Player 1's first decision: its evidence is the current observation only.
  const ObsActionHistory own{{m.get_observations(s)[1], std::nullopt}};
  const auto result = ismcts_search(m, belief, own, 1, small_config(500, 4));
  const auto legal = m.get_legal_actions(s);
  EXPECT_NE(std::find(legal.begin(), legal.end(), result.action), legal.end());
  EXPECT_EQ(result.counters.resample_failures, 0);
}

TEST(Ismcts, WrongPlayerAtRootIsRejected) {
  const auto bundle = games::make_game("tic_tac_toe");
  const WorldModel& m = *bundle.model.model;
  const ObsActionHistory h{{m.get_observations(bundle.initial_state)[1], std::nullopt}};
  EXPECT_THROW(ismcts_search(m, ExactStateBelief(bundle.initial_state), h, 1, small_config(10)), NoLegalActions);
}

// Returns a fixed history per call from a script.
class ScriptedSampler : public HistorySampler {
 public:
  explicit ScriptedSampler(std::vector<std::vector<Action>> script) : script_(std::move(script)) {}
  std::vector<Action> resample_history(const ObsActionHistory&, PlayerId, bool, Rng&) const override {
    return script_[std::min(calls_++, script_.size() - 1)];
  }
  mutable std::size_t calls_ = 0;

 private:
  std::vector<std::vector<Action>> script_;
};

TEST(ResampleWithRetry, RetriesUntilConsistent) {
  auto model = std::make_shared<testing::ThreeCardPoker>();
  const GameState s = play(*model, model->initial_state(), {"deal:K", "deal:J"});
  const ObsActionHistory h{{model->get_observations(s)[0], std::nullopt}};
  // Wrong own card, then an illegal history, then a consistent one.
  ScriptedSampler sampler({{"deal:Q", "deal:J"}, {"deal:K", "deal:K"}, {"deal:K", "deal:Q"}});
  Rng rng(1);
  SearchCounters counters;
  const GameState got = resample_with_retry(sampler, *model, model->initial_state(), h, 0, rng, 10, &counters);
  EXPECT_EQ(got.to_value()["cards"][1], "Q");
  EXPECT_EQ(counters.resample_attempts, 3);
  EXPECT_EQ(counters.resample_failures, 2);
}

TEST(ResampleWithRetry, GivesUpAfterMaxRetries) {
  auto model = std::make_shared<testing::ThreeCardPoker>();
  const GameState s = play(*model, model->initial_state(), {"deal:K", "deal:J"});
  const ObsActionHistory h{{model->get_observations(s)[0], std::nullopt}};
  ScriptedSampler sampler(std::vector<std::vector<Action>>{{"deal:Q", "deal:J"}});
  Rng rng(1);
  SearchCounters counters;
  EXPECT_THROW(resample_with_retry(sampler, *model, model->initial_state(), h, 0, rng, 10, &counters),
               BeliefExhausted);
  EXPECT_EQ(counters.resample_attempts, 10);
  EXPECT_EQ(sampler.calls_, 10u);
}

// With a sampler that is right half the time, ten attempts fail together with
// probability 2^-10.
class CoinSampler : public HistorySampler {
 public:
  std::vector<Action> resample_history(const ObsActionHistory&, PlayerId, bool, Rng& rng) const override {
    return rng.uniform_index(2) == 0 ? std::vector<Action>{"deal:K", "deal:Q"} : std::vector<Action>{"deal:J", "deal:Q"};
  }
};

TEST(ResampleWithRetry, GeometricAcceptance) {
  auto model = std::make_shared<testing::ThreeCardPoker>();
  const GameState s = play(*model, model->initial_state(), {"deal:K", "deal:J"});
  const ObsActionHistory h{{model->get_observations(s)[0], std::nullopt}};
  CoinSampler sampler;
  Rng rng(9);
  int exhausted = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    try {
      resample_with_retry(sampler, *model, model->initial_state(), h, 0, rng, 10);
    } catch (const BeliefExhausted&) {
      ++exhausted;
    }
  }
  EXPECT_LT(exhausted, 80);  // expected about 20
}

TEST(SearchConfig, DefaultsMatchThePlannerSetup) {
  const SearchConfig c;
  EXPECT_EQ(c.num_simulations, 1000);
  EXPECT_EQ(c.num_rollouts, 10);
  EXPECT_DOUBLE_EQ(c.exploration_constant, std::sqrt(2.0));
  EXPECT_EQ(c.max_retries, 10);
}

}  // namespace
}  // namespace cwm::planners
