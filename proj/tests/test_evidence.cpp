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

#include <filesystem>
#include <set>

#include "cwm/core/errors.hpp"
#include "cwm/evidence/trajectory.hpp"
#include "cwm/evidence/unit_tests.hpp"
#include "cwm/games/registry.hpp"
#include "cwm/synthesis/candidates.hpp"

namespace cwm::evidence {
namespace {

// Delegates to an engine but reports a wrong reward vector at terminal states.
class WrongRewards : public WorldModel {
 public:
  explicit WrongRewards(std::shared_ptr<const WorldModel> inner) : inner_(std::move(inner)) {}
  int num_players() const override { return inner_->num_players(); }
  GameState initial_state() const override { return inner_->initial_state(); }
  GameState state_from_value(const Value& v) const override { return inner_->state_from_value(v); }
  GameState apply_action(const GameState& s, const Action& a) const override {
    return inner_->apply_action(inner_->state_from_value(s.to_value()), a);
  }
  PlayerId get_current_player(const GameState& s) const override {
    return inner_->get_current_player(inner_->state_from_value(s.to_value()));
  }
  std::vector<double> get_rewards(const GameState& s) const override {
    auto r = inner_->get_rewards(inner_->state_from_value(s.to_value()));
    if (get_current_player(s) == kTerminalPlayer) r[0] += 1.0;
    return r;
  }
  std::vector<Action> get_legal_actions(const GameState& s) const override {
    return inner_->get_legal_actions(inner_->state_from_value(s.to_value()));
  }
  std::vector<Value> get_observations(const GameState& s) const override {
    return inner_->get_observations(inner_->state_from_value(s.to_value()));
  }

 private:
  std::shared_ptr<const WorldModel> inner_;
};

// State inference built from history inference by replaying the history.
class ReplayStateSampler : public StateSampler {
 public:
  explicit ReplayStateSampler(const games::GameBundle& bundle) : bundle_(bundle) {}
  GameState resample_state(const ObsActionHistory& h, PlayerId p, Rng& rng) const override {
    GameState s = bundle_.initial_state;
    for (const auto& a : bundle_.model.history_sampler->resample_history(h, p, false, rng)) {
      s = bundle_.model.model->apply_action(s, a);
    }
    return s;
  }

 private:
  const games::GameBundle& bundle_;
};

class EveryGame : public ::testing::TestWithParam<std::string> {};

TEST_P(EveryGame, GroundTruthPassesItsOwnTests) {
  const auto bundle = games::make_game(GetParam());
  std::vector<UnitTest> tests;
  for (const auto& traj : generate_trajectories(bundle, 5, 1)) {
    const auto t = derive_transition_tests(traj);
    tests.insert(tests.end(), t.begin(), t.end());
    if (!bundle.perfect_information()) {
      for (PlayerId p = 0; p < 2; ++p) {
        const auto inf = derive_inference_tests(traj, p, InferenceMode::kHistory);
        tests.insert(tests.end(), inf.begin(), inf.end());
      }
    }
  }
  const auto report = evaluate_accuracy(tests, bundle.model, 3);
  EXPECT_EQ(report.transition_accuracy, 1.0);
  EXPECT_EQ(report.inference_accuracy, 1.0);
  EXPECT_EQ(report.combined, 1.0);
  EXPECT_TRUE(report.failures.empty()) << report.failures.front().trace;
  EXPECT_GT(report.transition_total, 5);
  EXPECT_EQ(report.inference_total > 0, !bundle.perfect_information());
}

TEST_P(EveryGame, TrajectoriesRoundTripThroughText) {
  const auto bundle = games::make_game(GetParam());
  for (const auto& traj : generate_trajectories(bundle, 3, 2)) {
    const std::string text = serialize_trajectory(traj);
    const Trajectory back = parse_trajectory(text, *bundle.model.model);
    EXPECT_EQ(serialize_trajectory(back), text);
    ASSERT_EQ(back.records.size(), traj.records.size());
    EXPECT_TRUE(back.terminal_state == traj.terminal_state);
  }
}

TEST_P(EveryGame, RecordsFollowTheEngine) {
  const auto bundle = games::make_game(GetParam());
  const WorldModel& m = *bundle.model.model;
  const auto traj = generate_trajectories(bundle, 1, 4).front();
  GameState s = bundle.initial_state;
  for (const auto& r : traj.records) {
    ASSERT_TRUE(r.state == s);
    ASSERT_EQ(r.current_player, m.get_current_player(s));
    ASSERT_EQ(r.legal_actions, m.get_legal_actions(s));
    s = m.apply_action(s, r.action_taken);
  }
  EXPECT_TRUE(traj.terminal_state == s);
  EXPECT_TRUE(m.is_terminal(s));
  EXPECT_EQ(traj.terminal_rewards, m.get_rewards(s));
}

INSTANTIATE_TEST_SUITE_P(Registry, EveryGame, ::testing::ValuesIn(games::game_names()));

TEST(Trajectories, GenerationIsDeterministic) {
  const auto bundle = games::make_game("leduc_poker");
  const auto a = generate_trajectories(bundle, 4, 7);
  const auto b = generate_trajectories(bundle, 4, 7);
  const auto c = generate_trajectories(bundle, 4, 8);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(serialize_trajectory(a[i]), serialize_trajectory(b[i]));
  bool any_diff = false;
  for (std::size_t i = 0; i < a.size(); ++i) any_diff |= serialize_trajectory(a[i]) != serialize_trajectory(c[i]);
  EXPECT_TRUE(any_diff);
}

TEST(Trajectories, ClosedDeckProjectionHidesOpponentCards) {
  const auto bundle = games::make_game("leduc_poker");
  for (const auto& traj : generate_trajectories(bundle, 10, 3)) {
    for (PlayerId p = 0; p < 2; ++p) {
      const auto evidence = project_closed_deck(traj, p);
      const std::string opponent = traj.terminal_state.to_value()["private_cards"][1 - p].get<std::string>();
      // Folded hands never reveal the opponent's card.
      const bool showdown = traj.terminal_state.to_value()["folded"].is_null();
      const std::string text = serialize_closed_deck(evidence, traj.seed);
      if (!showdown) {
        EXPECT_EQ(text.find("\"" + opponent + "\""), std::string::npos) << text;
      }
      EXPECT_EQ(evidence.history.size(), decision_count(traj, p) + 1);
      EXPECT_TRUE(evidence.last_is_terminal);
      const auto back = parse_closed_deck(text);
      EXPECT_EQ(serialize_closed_deck(back, traj.seed), text);
    }
  }
}

TEST(Trajectories, EvidencePrefixEndsAtTheDecisionPoint) {
  const auto bundle = games::make_game("quadranto");
  const auto traj = generate_trajectories(bundle, 1, 6).front();
  const auto h = evidence_prefix(traj, 1, 2);
  ASSERT_EQ(h.size(), 3u);
  EXPECT_TRUE(h[0].action.has_value());
  EXPECT_TRUE(h[1].action.has_value());
  EXPECT_FALSE(h[2].action.has_value());
}

TEST(UnitTests, WrongRewardsFailTerminalTransitions) {
  const auto bundle = games::make_game("tic_tac_toe");
  WorldModelHandle broken{std::make_shared<WrongRewards>(bundle.model.model), nullptr, nullptr, nullptr};
  std::vector<UnitTest> tests;
  for (const auto& traj : generate_trajectories(bundle, 5, 1)) {
    const auto t = derive_transition_tests(traj);
    tests.insert(tests.end(), t.begin(), t.end());
  }
  const auto report = evaluate_accuracy(tests, broken);
  EXPECT_LT(report.transition_accuracy, 1.0);
  EXPECT_EQ(report.transition_total - report.transition_passed, 5);
  ASSERT_FALSE(report.failures.empty());
  EXPECT_NE(report.failures.front().trace.find("AssertionError"), std::string::npos);
  EXPECT_NE(report.failures.front().trace.find("(rewards)"), std::string::npos) << report.failures.front().trace;
}

TEST(UnitTests, SwappedPlayersFailWithListing) {
  const auto bundle = games::make_game("tic_tac_toe");
  const synthesis::BuiltinCandidateLoader loader;
  const auto swapped = loader.load(synthesis::builtin_source("tic_tac_toe", {"swap-players"}));
  const auto tests = derive_transition_tests(generate_trajectories(bundle, 1, 1).front());
  const auto report = evaluate_accuracy(tests, swapped);
  EXPECT_LT(report.transition_accuracy, 1.0);
  EXPECT_FALSE(report.failures.empty());
  for (const auto& f : report.failures) EXPECT_FALSE(f.test_id.empty());
}

TEST(UnitTests, MissingInferenceFailsWithNameError) {
  const auto bundle = games::make_game("leduc_poker");
  const auto traj = generate_trajectories(bundle, 1, 1).front();
  const auto tests = derive_inference_tests(traj, 0, InferenceMode::kHistory);
  ASSERT_FALSE(tests.empty());
  WorldModelHandle no_inference{bundle.model.model, nullptr, nullptr, nullptr};
  const auto outcome = run_test(tests.front(), no_inference);
  EXPECT_FALSE(outcome.passed);
  EXPECT_NE(outcome.trace.find("NameError: name 'resample_history' is not defined"), std::string::npos);
}

TEST(UnitTests, StateInferenceTestsPassWithAConsistentSampler) {
  const auto bundle = games::make_game("quadranto");
  WorldModelHandle handle = bundle.model;
  handle.state_sampler = std::make_shared<ReplayStateSampler>(bundle);
  const auto traj = generate_trajectories(bundle, 1, 2).front();
  const auto tests = derive_inference_tests(traj, 1, InferenceMode::kState);
  ASSERT_FALSE(tests.empty());
  for (const auto& t : tests) EXPECT_EQ(t.kind, TestKind::kInferenceState);
  EXPECT_EQ(evaluate_accuracy(tests, handle).inference_accuracy, 1.0);
}

TEST(UnitTests, InferenceThatIgnoresEvidenceFails) {
  // A sampler that always deals the same cards contradicts most evidence.
  class FixedDeal : public HistorySampler {
   public:
    std::vector<Action> resample_history(const ObsActionHistory&, PlayerId, bool, Rng&) const override {
      return {"deal:Js", "deal:Jh"};
    }
  };
  const auto bundle = games::make_game("leduc_poker");
  WorldModelHandle handle = bundle.model;
  handle.history_sampler = std::make_shared<FixedDeal>();
  std::vector<UnitTest> tests;
  for (const auto& traj : generate_trajectories(bundle, 5, 1)) {
    const auto t = derive_inference_tests(traj, 0, InferenceMode::kHistory);
    tests.insert(tests.end(), t.begin(), t.end());
  }
  const auto report = evaluate_accuracy(tests, handle);
  EXPECT_LT(report.inference_accuracy, 1.0);
  EXPECT_EQ(report.transition_total, 0);
}

TEST(UnitTests, RunsAreReproducibleForAGlobalSeed) {
  const auto bundle = games::make_game("hand_of_war");
  const auto traj = generate_trajectories(bundle, 1, 3).front();
  const auto tests = derive_inference_tests(traj, 0, InferenceMode::kHistory);
  const auto a = run_test(tests.back(), bundle.model, 5);
  const auto b = run_test(tests.back(), bundle.model, 5);
  EXPECT_EQ(a.output, b.output);
  EXPECT_TRUE(a.passed);
  EXPECT_LE(a.output.size(), kOutputTailLines);
}

TEST(UnitTests, RandomPlayDetectsNonTerminatingModels) {
  // Tic-tac-toe whose game never ends: every state is a decision with one action.
  class Endless : public WorldModel {
   public:
    int num_players() const override { return 2; }
    GameState initial_state() const override { return GameState::from_value(Value{{"t", 0}}); }
    GameState state_from_value(const Value& v) const override { return GameState::from_value(v); }
    GameState apply_action(const GameState& s, const Action&) const override {
      return GameState::from_value(Value{{"t", s.to_value()["t"].get<int>() + 1}});
    }
    PlayerId get_current_player(const GameState& s) const override { return s.to_value()["t"].get<int>() % 2; }
    std::vector<double> get_rewards(const GameState&) const override { return {0.0, 0.0}; }
    std::vector<Action> get_legal_actions(const GameState&) const override { return {"wait"}; }
    std::vector<Value> get_observations(const GameState& s) const override { return {s.to_value(), s.to_value()}; }
  };
  WorldModelHandle handle{std::make_shared<Endless>(), nullptr, nullptr, nullptr};
  const auto outcome = run_test(random_play_test("endless", Value{{"t", 0}}, 1), handle);
  EXPECT_FALSE(outcome.passed);
  EXPECT_NE(outcome.trace.find("Game did not end after 1000 steps."), std::string::npos);
}

TEST(UnitTests, EmptyTestSetIsFlagged) {
  const auto bundle = games::make_game("tic_tac_toe");
  const auto report = evaluate_accuracy({}, bundle.model);
  EXPECT_TRUE(report.empty_warning);
  EXPECT_EQ(report.combined, 1.0);
}

TEST(ClosedDeck, QuadrantoSuiteHasNoTransitionsAndGroundTruthPasses) {
  const auto bundle = games::make_game("quadranto");
  std::vector<UnitTest> tests;
  for (const auto& traj : generate_trajectories(bundle, 5, 11)) {
    for (PlayerId p = 0; p < 2; ++p) {
      const auto t = derive_closed_deck_tests(project_closed_deck(traj, p), bundle.initial_state.to_value(),
                                              {traj.seed, traj.seed + 1});
      tests.insert(tests.end(), t.begin(), t.end());
    }
  }
  std::set<TestKind> kinds;
  for (const auto& t : tests) kinds.insert(t.kind);
  EXPECT_EQ(kinds.count(TestKind::kTransition), 0u);
  EXPECT_EQ(kinds.count(TestKind::kInferenceHistory), 1u);
  EXPECT_EQ(kinds.count(TestKind::kRandomPlay), 1u);
  for (const auto& t : tests) EXPECT_FALSE(t.payload.contains("state")) << t.id;
  const auto report = evaluate_accuracy(tests, bundle.model, 1);
  EXPECT_EQ(report.combined, 1.0) << (report.failures.empty() ? "" : report.failures.front().trace);
}

TEST(TestSet, SamplesTheRequestedNumberOfTransitions) {
  const auto bundle = games::make_game("tic_tac_toe");
  TestSetConfig config;
  config.num_games = 10;
  config.num_transitions = 30;
  config.search.num_simulations = 50;
  config.seed = 4;
  const auto tests = build_test_set(bundle, config);
  EXPECT_EQ(tests.size(), 30u);
  std::set<std::string> ids;
  for (const auto& t : tests) ids.insert(t.id);
  EXPECT_EQ(ids.size(), 30u);  // enough distinct transitions: no replacement
  EXPECT_EQ(evaluate_accuracy(tests, bundle.model).combined, 1.0);
}

TEST(TestSet, ImperfectGamesAddInferenceTests) {
  const auto bundle = games::make_game("leduc_poker");
  TestSetConfig config;
  config.num_games = 5;
  config.num_transitions = 20;
  config.search.num_simulations = 30;
  const auto tests = build_test_set(bundle, config);
  int inference = 0;
  for (const auto& t : tests) inference += t.kind == TestKind::kInferenceHistory;
  EXPECT_EQ(inference, 20);
  EXPECT_EQ(evaluate_accuracy(tests, bundle.model).combined, 1.0);
}

TEST(Manifest, RoundTrips) {
  const auto bundle = games::make_game("leduc_poker");
  const auto traj = generate_trajectories(bundle, 1, 1).front();
  auto tests = derive_transition_tests(traj);
  const auto inf = derive_inference_tests(traj, 1, InferenceMode::kHistory);
  tests.insert(tests.end(), inf.begin(), inf.end());
  tests.push_back(random_play_test("leduc", bundle.initial_state.to_value(), 3));
  const std::string text = serialize_manifest(tests);
  const auto back = parse_manifest(text);
  ASSERT_EQ(back.size(), tests.size());
  EXPECT_EQ(serialize_manifest(back), text);
  EXPECT_THROW(parse_manifest("{\"id\": 1}\n"), ParseError);
}

TEST(RenderPython, TransitionTestShape) {
  const auto bundle = games::make_game("tic_tac_toe");
  const auto tests = derive_transition_tests(generate_trajectories(bundle, 1, 1).front());
  const std::string text = render_python(tests.front(), bundle.initial_state.to_value());
  EXPECT_NE(text.find("def test_"), std::string::npos);
  EXPECT_NE(text.find("self.assertEqual(0, get_current_player(state))"), std::string::npos);
  EXPECT_NE(text.find("self.assertSetEqual(set("), std::string::npos);
  EXPECT_NE(text.find("apply_action(state, 'x("), std::string::npos);
  EXPECT_NE(text.find("None"), std::string::npos);
}

TEST(RenderPython, InferenceAndRandomPlayShapes) {
  const auto bundle = games::make_game("leduc_poker");
  const auto traj = generate_trajectories(bundle, 1, 1).front();
  const auto inf = derive_inference_tests(traj, 0, InferenceMode::kHistory);
  const std::string h = render_python(inf.front(), bundle.initial_state.to_value());
  EXPECT_NE(h.find("for action in resample_history(obs_action_history, player_id):"), std::string::npos);
  EXPECT_NE(h.find("Failed to iterate through all observations."), std::string::npos);
  const std::string r = render_python(random_play_test("leduc", bundle.initial_state.to_value(), 7),
                                      bundle.initial_state.to_value());
  EXPECT_NE(r.find("np.random.RandomState(7)"), std::string::npos);
  EXPECT_NE(r.find("first 10 are"), std::string::npos);
}

TEST(TestKinds, RoundTripNames) {
  for (auto k : {TestKind::kTransition, TestKind::kInferenceHistory, TestKind::kInferenceState, TestKind::kRandomPlay}) {
    EXPECT_EQ(test_kind_from_string(to_string(k)), k);
  }
  EXPECT_THROW(test_kind_from_string("bogus"), ParseError);
}

}  // namespace
}  // namespace cwm::evidence
