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
#include <filesystem>
#include <set>

#include "cwm/core/errors.hpp"
#include "cwm/evidence/trajectory.hpp"
#include "cwm/evidence/unit_tests.hpp"
#include "cwm/games/registry.hpp"
#include "cwm/llm/client.hpp"
#include "cwm/synthesis/candidates.hpp"
#include "cwm/synthesis/prompts.hpp"
#include "cwm/synthesis/refinement.hpp"
#include "support/oracles.hpp"

namespace cwm::synthesis {
namespace {

namespace fs = std::filesystem;

std::string fenced(const std::string& code) { return "Here is the code.\n```python\n" + code + "```\n"; }

SynthesisTask transition_task(const std::string& game, int trajectories, std::uint64_t seed) {
  const auto bundle = games::make_game(game);
  SynthesisTask task;
  task.game_name = game;
  task.game_description = bundle.rules;
  task.initial_state = bundle.initial_state.to_value();
  for (const auto& traj : evidence::generate_trajectories(bundle, trajectories, seed)) {
    const auto t = evidence::derive_transition_tests(traj);
    task.tests.insert(task.tests.end(), t.begin(), t.end());
  }
  return task;
}

// Fingerprints of distinct non-terminal test states, in test order.
std::vector<std::string> defect_candidates(const SynthesisTask& task, std::size_t count) {
  const auto bundle = games::make_game(task.game_name);
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& t : task.tests) {
    const GameState s = bundle.model.model->state_from_value(t.payload.at("state"));
    const std::string fp = state_fingerprint(s);
    if (seen.insert(fp).second) out.push_back(fp);
    if (out.size() == count) break;
  }
  return out;
}

std::string defective_source(const std::string& game, const std::vector<std::string>& defects) {
  if (defects.empty()) return builtin_source(game);
  std::string list;
  for (const auto& d : defects) list += (list.empty() ? "" : ",") + d;
  return builtin_source(game, {"defect-states: " + list});
}

// ---- Prompts --------------------------------------------------------------------------

TEST(ExtractCandidates, ReadsEveryCompleteBlock) {
  const std::string response =
      "text\n```python\na = 1\n```\nmore\n```\nb = 2\n```\n```python\nunterminated\n";
  const auto blocks = extract_candidates(response, 3);
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0], "a = 1\n");
  EXPECT_EQ(blocks[1], "b = 2\n");
  EXPECT_THROW(extract_candidates("no code here", 1), NoCodeBlock);
  EXPECT_THROW(extract_candidates("```python\nnever closed\n", 1), NoCodeBlock);
}

TEST(Prompts, SignaturesNameTheApi) {
  const std::string cwm = function_signature(SynthesisTarget::kCwm);
  for (const char* fn : {"apply_action", "get_current_player", "get_player_name", "get_rewards", "get_legal_actions",
                         "get_observations"}) {
    EXPECT_NE(cwm.find(fn), std::string::npos) << fn;
  }
  EXPECT_NE(function_signature(SynthesisTarget::kCwmHistoryInference).find("resample_history"), std::string::npos);
  EXPECT_NE(function_signature(SynthesisTarget::kCwmStateInference).find("resample_state"), std::string::npos);
  EXPECT_NE(function_signature(SynthesisTarget::kClosedDeckAutoencoder).find("last_is_terminal"), std::string::npos);
  EXPECT_NE(function_signature(SynthesisTarget::kValueFunction).find("value_function"), std::string::npos);
}

TEST(Prompts, InitialPromptHasRulesSignatureAndTests) {
  const SynthesisTask task = transition_task("tic_tac_toe", 1, 1);
  const auto shown = select_prompt_tests(task.tests, nullptr, 5);
  EXPECT_EQ(shown.size(), 5u);
  const std::string prompt = assemble_prompt(task, std::nullopt, shown, 3);
  EXPECT_NE(prompt.find(task.game_description), std::string::npos);
  EXPECT_NE(prompt.find("def apply_action"), std::string::npos);
  EXPECT_NE(prompt.find("self.assertEqual"), std::string::npos);
  EXPECT_EQ(prompt.find("# TODO: this test fails"), std::string::npos);
}

TEST(Prompts, RefinementPromptShowsCodeAndFailures) {
  const SynthesisTask task = transition_task("tic_tac_toe", 1, 1);
  const auto defects = defect_candidates(task, 2);
  const BuiltinCandidateLoader loader;
  const std::string source = defective_source("tic_tac_toe", defects);
  const RefinementNode node = evaluate_candidate(task, loader, source);
  ASSERT_LT(node.h, 1.0);
  const auto shown = select_prompt_tests(task.tests, &node.report, 1);
  ASSERT_EQ(shown.size(), 1u);
  ASSERT_TRUE(shown[0].failure.has_value());
  const std::string prompt = assemble_prompt(task, source, shown, 1);
  EXPECT_NE(prompt.find(source), std::string::npos);
  EXPECT_NE(prompt.find("# TODO: this test fails"), std::string::npos);
  EXPECT_NE(prompt.find("KeyError"), std::string::npos);
}

TEST(Prompts, RotationCyclesThroughFailures) {
  const SynthesisTask task = transition_task("tic_tac_toe", 2, 1);
  const BuiltinCandidateLoader loader;
  const RefinementNode node = evaluate_candidate(task, loader, defective_source("tic_tac_toe", defect_candidates(task, 4)));
  const auto a = select_prompt_tests(task.tests, &node.report, 1, 0);
  const auto b = select_prompt_tests(task.tests, &node.report, 1, 1);
  ASSERT_EQ(a.size(), 1u);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_NE(a[0].test->id, b[0].test->id);
}

TEST(Prompts, ValuePromptListsTestStates) {
  SynthesisTask task = transition_task("tic_tac_toe", 1, 1);
  task.target = SynthesisTarget::kValueFunction;
  const std::string prompt =
      assemble_value_prompt(task, builtin_source("tic_tac_toe"), {task.initial_state}, {task.initial_state});
  EXPECT_NE(prompt.find("value_function"), std::string::npos);
  EXPECT_NE(prompt.find(builtin_source("tic_tac_toe")), std::string::npos);
}

// ---- Candidates ------------------------------------------------------------------------

TEST(BuiltinCandidates, SourceWithoutModelFailsToLoad) {
  const BuiltinCandidateLoader loader;
  EXPECT_THROW(loader.load("def apply_action(state, action):\n  return state\n"), ModelFault);
  EXPECT_THROW(loader.load(builtin_source("not_a_game")), ModelFault);
}

TEST(BuiltinCandidates, InferenceDirective) {
  const BuiltinCandidateLoader loader;
  EXPECT_TRUE(loader.load(builtin_source("leduc_poker")).has_history_sampler());
  EXPECT_FALSE(loader.load(builtin_source("leduc_poker", {"inference: none"})).has_history_sampler());
}

TEST(BuiltinCandidates, RenamedActionsAreNotLegalInTheEngine) {
  const BuiltinCandidateLoader loader;
  const auto handle = loader.load(builtin_source("tic_tac_toe", {"rename-actions"}));
  const auto legal = handle.model->get_legal_actions(handle.model->initial_state());
  EXPECT_EQ(legal.front().rfind("bad-", 0), 0u);
}

TEST(ExactValue, MatchesMinimaxOracle) {
  const auto bundle = games::make_game("tic_tac_toe");
  const WorldModel& m = *bundle.model.model;
  const ExactValueFunction exact(bundle.model.model);
  EXPECT_DOUBLE_EQ(exact.value(bundle.initial_state, 0), 0.0);
  Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    GameState s = bundle.initial_state;
    const int depth = static_cast<int>(rng.uniform_index(8));
    for (int k = 0; k < depth && !m.is_terminal(s); ++k) {
      const auto legal = m.get_legal_actions(s);
      s = m.apply_action(s, legal[rng.uniform_index(legal.size())]);
    }
    const auto board = testing::ttt_board_from_value(s.to_value());
    const int mover = m.is_terminal(s) ? 1 : (m.get_current_player(s) == 0 ? 1 : 2);
    const int oracle = testing::ttt_minimax(board, mover);
    EXPECT_DOUBLE_EQ(exact.value(s, 0), static_cast<double>(oracle));
    EXPECT_DOUBLE_EQ(exact.value(s, 1), -static_cast<double>(oracle));
  }
}

TEST(EvaluateCandidate, LoadFailureFailsEveryTest) {
  const SynthesisTask task = transition_task("tic_tac_toe", 1, 1);
  const BuiltinCandidateLoader loader;
  const RefinementNode node = evaluate_candidate(task, loader, "syntax error here");
  EXPECT_EQ(node.h, 0.0);
  EXPECT_FALSE(node.load_error.empty());
  EXPECT_EQ(node.failing_test_ids.size(), task.tests.size());
}

// ---- Thompson sampling -------------------------------------------------------------------

TEST(Thompson, ParametersFollowTheFormula) {
  auto [a, b] = thompson_parameters(0.9, 0, 5.0);
  EXPECT_DOUBLE_EQ(a, 5.5);
  EXPECT_DOUBLE_EQ(b, 0.01);  // 1 - 4 * 0.9 < 0 is clamped
  std::tie(a, b) = thompson_parameters(0.1, 2, 5.0);
  EXPECT_DOUBLE_EQ(a, 1.5);
  EXPECT_DOUBLE_EQ(b, 0.6 + 2.0);
}

TEST(Thompson, PrefersTheHigherHeuristic) {
  RefinementNode high, low;
  high.h = 0.9;
  low.h = 0.1;
  const std::vector<const RefinementNode*> nodes{&low, &high};
  Rng rng(1);
  int picks = 0;
  for (int i = 0; i < 10000; ++i) picks += thompson_select(nodes, 5.0, rng) == 1;
  EXPECT_GT(picks, 9500);
}

TEST(Thompson, ExpansionsLowerTheChanceOfReselection) {
  RefinementNode fresh, tired;
  fresh.h = 0.5;
  tired.h = 0.5;
  tired.expansion_count = 20;
  const std::vector<const RefinementNode*> nodes{&fresh, &tired};
  Rng rng(2);
  int picks = 0;
  for (int i = 0; i < 2000; ++i) picks += thompson_select(nodes, 5.0, rng) == 0;
  EXPECT_GT(picks, 1800);
  EXPECT_THROW(thompson_select({}, 5.0, rng), NoEligibleNode);
}

// ---- Tree-search refinement ---------------------------------------------------------------

TEST(TreeSearch, ConvergesWhenEachResponseFixesOneMoreTest) {
  const SynthesisTask task = transition_task("tic_tac_toe", 3, 2);
  const auto defects = defect_candidates(task, 6);
  ASSERT_EQ(defects.size(), 6u);
  const BuiltinCandidateLoader loader;
  const int initial_failures =
      static_cast<int>(evaluate_candidate(task, loader, defective_source("tic_tac_toe", defects)).failing_test_ids.size());
  llm::FunctionMock mock([&](int k, const llm::CompletionRequest&) {
    const std::size_t fixed = std::min<std::size_t>(static_cast<std::size_t>(k), defects.size());
    return fenced(defective_source("tic_tac_toe", std::vector<std::string>(defects.begin() + fixed, defects.end())));
  });
  SearchBudget budget;
  const RefinementResult result = refine_tree_search(task, mock, loader, budget, 3);
  EXPECT_TRUE(result.solved());
  EXPECT_EQ(result.best.h, 1.0);
  EXPECT_LE(result.llm_calls, initial_failures + 2);
  EXPECT_EQ(result.llm_calls, 7);  // one per defect plus the initial generation
  EXPECT_FALSE(result.budget_exhausted);
  ASSERT_EQ(result.accuracy_trace.size(), static_cast<std::size_t>(result.llm_calls));
  for (std::size_t i = 1; i < result.accuracy_trace.size(); ++i) {
    EXPECT_GE(result.accuracy_trace[i], result.accuracy_trace[i - 1]);
  }
}

TEST(TreeSearch, NeverImprovingMockUsesTheWholeBudget) {
  const SynthesisTask task = transition_task("tic_tac_toe", 1, 2);
  const auto defects = defect_candidates(task, 2);
  const std::string stuck = fenced(defective_source("tic_tac_toe", defects));
  llm::FunctionMock mock([&](int, const llm::CompletionRequest&) { return stuck; });
  const BuiltinCandidateLoader loader;
  SearchBudget budget;
  const RefinementResult result = refine_tree_search(task, mock, loader, budget, 4);
  EXPECT_EQ(result.llm_calls, 500);
  EXPECT_EQ(mock.calls(), 500);
  EXPECT_TRUE(result.budget_exhausted);
  EXPECT_FALSE(result.solved());
  EXPECT_GT(result.best.h, 0.0);
  EXPECT_EQ(result.best.id, 0);  // ties go to the earliest node
}

TEST(TreeSearch, ZeroBudgetMakesOnlyTheInitialCall) {
  const SynthesisTask task = transition_task("tic_tac_toe", 1, 2);
  llm::ScriptedMock mock({fenced(defective_source("tic_tac_toe", defect_candidates(task, 1)))});
  const BuiltinCandidateLoader loader;
  SearchBudget budget;
  budget.num_retries = 0;
  const RefinementResult result = refine_tree_search(task, mock, loader, budget, 1);
  EXPECT_EQ(result.llm_calls, 1);
  EXPECT_TRUE(result.budget_exhausted);
}

TEST(TreeSearch, ResponsesWithoutCodeAreWasted) {
  const SynthesisTask task = transition_task("tic_tac_toe", 1, 2);
  llm::ScriptedMock mock({"I cannot help.", fenced(builtin_source("tic_tac_toe"))});
  const BuiltinCandidateLoader loader;
  const RefinementResult result = refine_tree_search(task, mock, loader, SearchBudget{}, 1);
  EXPECT_EQ(result.wasted_calls, 1);
  EXPECT_TRUE(result.solved());
  EXPECT_EQ(result.llm_calls, 2);
}

TEST(TreeSearch, LlmFailureStopsWithBestSoFar) {
  const SynthesisTask task = transition_task("tic_tac_toe", 1, 2);
  llm::ScriptedMock mock({fenced(defective_source("tic_tac_toe", defect_candidates(task, 1)))});
  const BuiltinCandidateLoader loader;
  const RefinementResult result = refine_tree_search(task, mock, loader, SearchBudget{}, 1);
  ASSERT_TRUE(result.stopped_by_error.has_value());
  EXPECT_EQ(result.llm_calls, 1);
  EXPECT_GT(result.best.h, 0.0);
}

TEST(TreeSearch, LowScoringRootsAreNotRefined) {
  const SynthesisTask task = transition_task("tic_tac_toe", 1, 2);
  // Every response fails to load (h = 0), so each call must start afresh.
  std::vector<std::string> prompts;
  llm::FunctionMock mock([&](int, const llm::CompletionRequest& r) {
    prompts.push_back(r.prompt);
    return fenced("not a model\n");
  });
  const BuiltinCandidateLoader loader;
  SearchBudget budget;
  budget.num_retries = 4;
  const RefinementResult result = refine_tree_search(task, mock, loader, budget, 1);
  for (const auto& node : result.tree) EXPECT_EQ(node.parent_id, -1);
  for (const auto& p : prompts) EXPECT_EQ(p.find("not a model"), std::string::npos);
}

TEST(TreeSearch, RecorderWritesTheRun) {
  const fs::path dir = fs::temp_directory_path() / ("cwm_test_recorder_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  RunRecorder recorder(dir);
  const SynthesisTask task = transition_task("tic_tac_toe", 1, 2);
  llm::ScriptedMock mock({fenced(builtin_source("tic_tac_toe"))});
  const BuiltinCandidateLoader loader;
  const RefinementResult result = refine_tree_search(task, mock, loader, SearchBudget{}, 1, &recorder);
  EXPECT_TRUE(result.solved());
  for (const char* sub : {"prompts", "candidates", "reports"}) EXPECT_TRUE(fs::is_directory(dir / sub)) << sub;
  EXPECT_FALSE(fs::is_empty(dir / "prompts"));
  EXPECT_FALSE(fs::is_empty(dir / "candidates"));
  EXPECT_EQ(result.tree_manifest()["nodes"].size(), result.tree.size());
  EXPECT_NE(result.render_trace().find("1\t1"), std::string::npos);
  fs::remove_all(dir);
}

// ---- Conversation refinement ---------------------------------------------------------------

TEST(Conversation, ConvergesAndKeepsTheChat) {
  const SynthesisTask task = transition_task("tic_tac_toe", 2, 2);
  const auto defects = defect_candidates(task, 3);
  std::vector<std::string> prompts;
  llm::FunctionMock mock([&](int k, const llm::CompletionRequest& r) {
    prompts.push_back(r.prompt);
    const std::size_t fixed = std::min<std::size_t>(static_cast<std::size_t>(k), defects.size());
    return fenced(defective_source("tic_tac_toe", std::vector<std::string>(defects.begin() + fixed, defects.end())));
  });
  const BuiltinCandidateLoader loader;
  const RefinementResult result = refine_conversation(task, mock, loader, SearchBudget{});
  EXPECT_TRUE(result.solved());
  EXPECT_EQ(result.llm_calls, 4);
  ASSERT_GE(prompts.size(), 2u);
  // Later turns carry the earlier exchange.
  EXPECT_NE(prompts[1].find(prompts[0].substr(0, 200)), std::string::npos);
}

// ---- Likelihood bound ------------------------------------------------------------------

TEST(Likelihood, MatchesIndependentLogSum) {
  const auto bundle = games::make_game("leduc_poker");
  const WorldModel& m = *bundle.model.model;
  const std::vector<Action> deal{"deal:Ks", "deal:Qh"};
  // Two chance draws from 6 then 5 cards.
  EXPECT_NEAR(likelihood_lower_bound(m, bundle.initial_state, deal, 0), std::log(1.0 / 6) + std::log(1.0 / 5), 1e-12);
  // Player 1's decision adds log(1 / its legal action count); player 0's own actions add nothing.
  std::vector<Action> longer = deal;
  longer.push_back("Call");   // player 0: own action, contributes 0
  longer.push_back("Call");   // player 1: opponent decision
  longer.push_back("deal:Js");  // public card from 4
  GameState s = m.apply_action(m.apply_action(bundle.initial_state, "deal:Ks"), "deal:Qh");
  s = m.apply_action(s, "Call");
  const double opponent = std::log(1.0 / static_cast<double>(m.get_legal_actions(s).size()));
  EXPECT_NEAR(likelihood_lower_bound(m, bundle.initial_state, longer, 0),
              std::log(1.0 / 6) + std::log(1.0 / 5) + opponent + std::log(1.0 / 4), 1e-12);
}

TEST(Likelihood, NonPositiveAndDecreasingWithChance) {
  const auto bundle = games::make_game("quadranto");
  const WorldModel& m = *bundle.model.model;
  const auto traj = evidence::generate_trajectories(bundle, 5, 3);
  Rng rng(1);
  for (const auto& t : traj) {
    for (PlayerId p = 0; p < 2; ++p) {
      const auto evidence = evidence::project_closed_deck(t, p);
      const auto history = bundle.model.history_sampler->resample_history(evidence.history, p, true, rng);
      double previous = 0.0;
      for (std::size_t k = 1; k <= history.size(); ++k) {
        const std::vector<Action> prefix(history.begin(), history.begin() + static_cast<std::ptrdiff_t>(k));
        const double bound = likelihood_lower_bound(m, bundle.initial_state, prefix, p);
        EXPECT_LE(bound, 0.0);
        EXPECT_LE(bound, previous + 1e-12);
        if (k <= 2) {
          EXPECT_LT(bound, previous);  // the two placements are chance nodes
        }
        previous = bound;
      }
    }
  }
  EXPECT_THROW(likelihood_lower_bound(m, bundle.initial_state, {"place(3,3)"}, 0), IllegalHistory);
}

// ---- Value functions ------------------------------------------------------------------------

TEST(ValueSynthesis, RejectsInvalidCandidatesAndRanksTheRest) {
  const auto bundle = games::make_game("tic_tac_toe");
  SynthesisTask task = transition_task("tic_tac_toe", 1, 1);
  task.target = SynthesisTarget::kValueFunction;
  llm::ScriptedMock mock({fenced("# builtin-value: not-float\n"), fenced("# builtin-value: wrong-terminal\n"),
                          fenced("# builtin-value: exact\n")});
  const BuiltinCandidateLoader loader;
  ValueSynthesisConfig config;
  config.matches_per_pair = 4;
  config.search.num_simulations = 30;
  config.search.num_rollouts = 2;
  const auto result = synthesize_value_function(task, mock, loader, builtin_source("tic_tac_toe"), bundle, config, 5);
  EXPECT_EQ(result.llm_calls, 3);
  ASSERT_EQ(result.candidates.size(), 3u);
  ASSERT_EQ(result.rejected_reasons.size(), 3u);
  EXPECT_FALSE(result.rejected_reasons[0].empty());
  EXPECT_FALSE(result.rejected_reasons[1].empty());
  EXPECT_TRUE(result.rejected_reasons[2].empty());
  // The baseline and the exact candidate played.
  EXPECT_EQ(result.tournament.ranking.size(), 2u);
  if (result.best_source) {
    EXPECT_NE(result.best_source->find("exact"), std::string::npos);
  }
}

TEST(ValueSynthesis, NothingValidMeansRollouts) {
  const auto bundle = games::make_game("tic_tac_toe");
  SynthesisTask task = transition_task("tic_tac_toe", 1, 1);
  task.target = SynthesisTarget::kValueFunction;
  llm::ScriptedMock mock({fenced("# builtin-value: not-float\n"), "no code", fenced("garbage\n")});
  const BuiltinCandidateLoader loader;
  ValueSynthesisConfig config;
  config.matches_per_pair = 2;
  config.search.num_simulations = 20;
  const auto result = synthesize_value_function(task, mock, loader, builtin_source("tic_tac_toe"), bundle, config, 5);
  EXPECT_FALSE(result.best_source.has_value());
}

}  // namespace
}  // namespace cwm::synthesis
