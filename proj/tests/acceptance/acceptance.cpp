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

// Acceptance run: one PASS/FAIL line per criterion, with measured values and
// wall time. Exits non-zero when any criterion fails. An optional argument
// restricts the run to criteria whose name contains it.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cwm/arena/agents.hpp"
#include "cwm/arena/arena.hpp"
#include "cwm/evidence/trajectory.hpp"
#include "cwm/evidence/unit_tests.hpp"
#include "cwm/games/registry.hpp"
#include "cwm/llm/client.hpp"
#include "cwm/planners/search.hpp"
#include "cwm/synthesis/candidates.hpp"
#include "cwm/synthesis/refinement.hpp"
#include "support/oracles.hpp"

namespace cwm {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
  // Records a sub-check; the criterion passes only if every check does.
  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

planners::SearchConfig search(int sims, int rollouts) {
  planners::SearchConfig c;
  c.num_simulations = sims;
  c.num_rollouts = rollouts;
  return c;
}

// ---- criteria -------------------------------------------------------------------------

Outcome ground_truth_self_consistency() {
  Outcome o;
  const auto start = Clock::now();
  for (const auto& name : games::game_names()) {
    const auto bundle = games::make_game(name);
    std::vector<evidence::UnitTest> tests;
    for (const auto& traj : evidence::generate_trajectories(bundle, 5, 1)) {
      const auto t = evidence::derive_transition_tests(traj);
      tests.insert(tests.end(), t.begin(), t.end());
      if (!bundle.perfect_information()) {
        for (PlayerId p = 0; p < bundle.metadata.num_players; ++p) {
          const auto inf = evidence::derive_inference_tests(traj, p, evidence::InferenceMode::kHistory);
          tests.insert(tests.end(), inf.begin(), inf.end());
        }
      }
    }
    const auto report = evidence::evaluate_accuracy(tests, bundle.model, 3);
    const bool inference_ok = bundle.perfect_information() ? report.inference_total == 0
                                                           : report.inference_accuracy == 1.0 && report.inference_total > 0;
    o.check(report.transition_accuracy == 1.0 && inference_ok,
            name + " transition=" + fmt(report.transition_accuracy) + " inference=" +
                (bundle.perfect_information() ? std::string("n/a") : fmt(report.inference_accuracy)));
  }
  const double elapsed = seconds_since(start);
  o.check(elapsed < 60.0, "runtime " + fmt(elapsed, 1) + "s < 60s");
  return o;
}

Outcome tic_tac_toe_planner_strength() {
  Outcome o;
  const auto start = Clock::now();
  const auto bundle = games::make_game("tic_tac_toe");
  const auto setup = arena::MatchSetup::from_bundle(bundle);
  const auto mcts = arena::make_search_agent("gt-mcts", bundle.model, true, search(1000, 10));
  arena::RandomAgent random;
  const auto as_p0 = arena::run_series(setup, *mcts, random, 100, 101);
  const auto as_p1 = arena::run_series(setup, random, *mcts, 100, 102);
  const auto self = arena::run_series(setup, *mcts, *mcts, 100, 103);
  const auto& s0 = as_p0.seats[0];
  const auto& s1 = as_p1.seats[1];
  o.check(s0.win_rate() >= 0.90 && s0.losses == 0,
          "P0 W/L/D " + fmt(s0.win_rate(), 2) + "/" + fmt(s0.loss_rate(), 2) + "/" + fmt(s0.draw_rate(), 2));
  o.check(s1.losses == 0,
          "P1 W/L/D " + fmt(s1.win_rate(), 2) + "/" + fmt(s1.loss_rate(), 2) + "/" + fmt(s1.draw_rate(), 2));
  o.check(self.seats[0].draws == 100 && self.matches == 100, "self-play draws " + fmt(self.seats[0].draw_rate(), 2));
  const double elapsed = seconds_since(start);
  o.check(elapsed < 600.0, "runtime " + fmt(elapsed, 1) + "s < 600s");
  return o;
}

Outcome connect_four_first_mover() {
  Outcome o;
  const auto start = Clock::now();
  const auto bundle = games::make_game("connect_four");
  const auto setup = arena::MatchSetup::from_bundle(bundle);
  const auto mcts = arena::make_search_agent("gt-mcts", bundle.model, true, search(1000, 10));
  arena::RandomAgent random;
  const auto report = arena::run_series(setup, *mcts, random, 100, 201);
  o.check(report.seats[0].win_rate() >= 0.95, "P0 win rate " + fmt(report.seats[0].win_rate(), 2));
  const double elapsed = seconds_since(start);
  o.check(elapsed < 900.0, "runtime " + fmt(elapsed, 1) + "s < 900s");
  return o;
}

Outcome ismcts_positive_exploitation() {
  Outcome o;
  const auto bundle = games::make_game("leduc_poker");
  const auto setup = arena::MatchSetup::from_bundle(bundle);
  const auto ismcts = arena::make_search_agent("gt-ismcts", bundle.model, false, search(1000, 10));
  arena::RandomAgent random;
  const auto as_p0 = arena::run_series(setup, *ismcts, random, 500, 301);
  const auto as_p1 = arena::run_series(setup, random, *ismcts, 500, 302);
  int violations = 0;
  for (const auto* r : {&as_p0, &as_p1}) {
    for (const auto& m : r->results) violations += m.payoffs[0] + m.payoffs[1] != 0.0;
  }
  o.check(as_p0.seats[0].mean_payoff >= 0.3, "P0 mean payoff " + fmt(as_p0.seats[0].mean_payoff, 3));
  o.check(as_p1.seats[1].mean_payoff >= 0.3, "P1 mean payoff " + fmt(as_p1.seats[1].mean_payoff, 3));
  o.check(violations == 0 && as_p0.matches == 500 && as_p1.matches == 500,
          "zero-sum violations " + std::to_string(violations));
  return o;
}

Outcome ismcts_reduces_to_mcts() {
  Outcome o;
  const auto bundle = games::make_game("tic_tac_toe");
  const WorldModel& m = *bundle.model.model;
  Rng rng(5);
  int positions = 0;
  int mismatches = 0;
  for (int trial = 0; trial < 8; ++trial) {
    GameState s = bundle.initial_state;
    for (int i = 0; i < trial && m.get_current_player(s) >= 0; ++i) {
      const auto legal = m.get_legal_actions(s);
      s = m.apply_action(s, legal[rng.uniform_index(legal.size())]);
    }
    if (m.get_current_player(s) < 0) continue;
    const PlayerId p = m.get_current_player(s);
    const ObsActionHistory h{{m.get_observations(s)[p], std::nullopt}};
    planners::SearchConfig config = search(1000, 10);
    config.seed = 77 + trial;
    const auto plain = planners::mcts_search(m, s, config);
    const auto info = planners::ismcts_search(m, planners::ExactStateBelief(s), h, p, config);
    bool same = plain.table.size() == info.table.size() && plain.action == info.action;
    for (const auto& [key, node] : plain.table) {
      const auto it = info.table.find(key);
      if (it == info.table.end() || node.visits != it->second.visits || node.actions != it->second.actions) {
        same = false;
        continue;
      }
      for (std::size_t i = 0; i < node.edges.size(); ++i) {
        same = same && node.edges[i].visits == it->second.edges[i].visits &&
               node.edges[i].total_value == it->second.edges[i].total_value;
      }
    }
    ++positions;
    mismatches += !same;
  }
  o.check(mismatches == 0, std::to_string(positions) + " positions, " + std::to_string(mismatches) + " differing tables");
  return o;
}

// Records the opponent card of every determinized root.
class CountingBelief : public planners::BeliefSampler {
 public:
  explicit CountingBelief(const planners::BeliefSampler& inner) : inner_(inner) {}
  GameState resample(const ObsActionHistory& h, PlayerId p, Rng& rng, planners::SearchCounters* c) const override {
    GameState s = inner_.resample(h, p, rng, c);
    ++opponent_cards[s.to_value()["cards"][1 - p].get<std::string>()];
    return s;
  }
  std::string source() const override { return inner_.source(); }
  mutable std::map<std::string, int> opponent_cards;

 private:
  const planners::BeliefSampler& inner_;
};

Outcome determinization_support() {
  Outcome o;
  auto model = std::make_shared<testing::ThreeCardPoker>();
  auto sampler = std::make_shared<testing::ThreeCardPokerSampler>();
  const planners::HistoryBelief belief(model, sampler);
  const CountingBelief counting(belief);
  GameState s = model->initial_state();
  s = model->apply_action(s, "deal:K");
  s = model->apply_action(s, "deal:J");
  const ObsActionHistory h{{model->get_observations(s)[0], std::nullopt}};
  planners::SearchConfig config = search(10000, 1);
  config.seed = 3;
  const auto result = planners::ismcts_search(*model, counting, h, 0, config);
  const double q = counting.opponent_cards["Q"] / 10000.0;
  const double j = counting.opponent_cards["J"] / 10000.0;
  o.check(result.counters.simulations == 10000, "draws " + std::to_string(result.counters.simulations));
  o.check(counting.opponent_cards.size() == 2, "support size " + std::to_string(counting.opponent_cards.size()));
  o.check(std::abs(q - 0.5) <= 0.02 && std::abs(j - 0.5) <= 0.02, "Q=" + fmt(q) + " J=" + fmt(j));
  return o;
}

std::string fenced(const std::string& code) { return "```python\n" + code + "```\n"; }

synthesis::SynthesisTask transition_task(const std::string& game, int trajectories, std::uint64_t seed) {
  const auto bundle = games::make_game(game);
  synthesis::SynthesisTask task;
  task.game_name = game;
  task.game_description = bundle.rules;
  task.initial_state = bundle.initial_state.to_value();
  for (const auto& traj : evidence::generate_trajectories(bundle, trajectories, seed)) {
    const auto t = evidence::derive_transition_tests(traj);
    task.tests.insert(task.tests.end(), t.begin(), t.end());
  }
  return task;
}

std::vector<std::string> defect_states(const synthesis::SynthesisTask& task, std::size_t count) {
  const auto bundle = games::make_game(task.game_name);
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& t : task.tests) {
    const std::string fp = synthesis::state_fingerprint(bundle.model.model->state_from_value(t.payload.at("state")));
    if (seen.insert(fp).second) out.push_back(fp);
    if (out.size() == count) break;
  }
  return out;
}

std::string defective_source(const std::string& game, const std::vector<std::string>& defects) {
  if (defects.empty()) return synthesis::builtin_source(game);
  std::string list;
  for (const auto& d : defects) list += (list.empty() ? "" : ",") + d;
  return synthesis::builtin_source(game, {"defect-states: " + list});
}

Outcome refinement_convergence() {
  Outcome o;
  const synthesis::BuiltinCandidateLoader loader;
  {
    const auto task = transition_task("tic_tac_toe", 3, 2);
    const auto defects = defect_states(task, 6);
    const int initial_failures = static_cast<int>(
        synthesis::evaluate_candidate(task, loader, defective_source("tic_tac_toe", defects)).failing_test_ids.size());
    llm::FunctionMock mock([&](int k, const llm::CompletionRequest&) {
      const std::size_t fixed = std::min<std::size_t>(static_cast<std::size_t>(k), defects.size());
      return fenced(defective_source("tic_tac_toe", std::vector<std::string>(defects.begin() + fixed, defects.end())));
    });
    const auto result = synthesis::refine_tree_search(task, mock, loader, synthesis::SearchBudget{}, 3);
    o.check(result.solved() && result.llm_calls <= initial_failures + 2 && mock.calls() == result.llm_calls,
            "converged in " + std::to_string(result.llm_calls) + " calls (initial failures " +
                std::to_string(initial_failures) + ")");
  }
  {
    const auto task = transition_task("tic_tac_toe", 1, 2);
    const std::string stuck = fenced(defective_source("tic_tac_toe", defect_states(task, 2)));
    llm::FunctionMock mock([&](int, const llm::CompletionRequest&) { return stuck; });
    const auto result = synthesis::refine_tree_search(task, mock, loader, synthesis::SearchBudget{}, 4);
    o.check(result.llm_calls == 500 && mock.calls() == 500 && result.budget_exhausted && result.best.h > 0.0,
            "never-improving mock: " + std::to_string(mock.calls()) + " calls, best h=" + fmt(result.best.h));
  }
  {
    synthesis::RefinementNode high, low;
    high.h = 0.9;
    low.h = 0.1;
    const std::vector<const synthesis::RefinementNode*> nodes{&low, &high};
    Rng rng(1);
    int picks = 0;
    for (int i = 0; i < 10000; ++i) picks += synthesis::thompson_select(nodes, 5.0, rng) == 1;
    o.check(picks > 9500, "Thompson picks higher-h " + std::to_string(picks) + "/10000");
  }
  return o;
}

Outcome closed_deck_suite() {
  Outcome o;
  const auto bundle = games::make_game("quadranto");
  std::vector<evidence::UnitTest> tests;
  const auto trajectories = evidence::generate_trajectories(bundle, 5, 11);
  for (const auto& traj : trajectories) {
    for (PlayerId p = 0; p < 2; ++p) {
      const auto t = evidence::derive_closed_deck_tests(evidence::project_closed_deck(traj, p),
                                                        bundle.initial_state.to_value(), {traj.seed, traj.seed + 1});
      tests.insert(tests.end(), t.begin(), t.end());
    }
  }
  int transitions = 0;
  for (const auto& t : tests) transitions += t.kind == evidence::TestKind::kTransition;
  o.check(transitions == 0, std::to_string(tests.size()) + " tests, " + std::to_string(transitions) + " transition");
  const auto report = evidence::evaluate_accuracy(tests, bundle.model, 1);
  o.check(report.combined == 1.0, "ground truth pass rate " + fmt(report.combined));

  const WorldModel& m = *bundle.model.model;
  Rng rng(1);
  int histories = 0;
  int positive = 0;
  int increasing = 0;
  int flat_chance = 0;
  for (const auto& traj : trajectories) {
    for (PlayerId p = 0; p < 2; ++p) {
      const auto evidence = evidence::project_closed_deck(traj, p);
      const auto history = bundle.model.history_sampler->resample_history(evidence.history, p, true, rng);
      ++histories;
      double previous = 0.0;
      GameState s = bundle.initial_state;
      for (std::size_t k = 1; k <= history.size(); ++k) {
        const bool chance = m.get_current_player(s) == kChancePlayer;
        s = m.apply_action(s, history[k - 1]);
        const std::vector<Action> prefix(history.begin(), history.begin() + static_cast<std::ptrdiff_t>(k));
        const double bound = synthesis::likelihood_lower_bound(m, bundle.initial_state, prefix, p);
        positive += bound > 0.0;
        increasing += bound > previous + 1e-12;
        flat_chance += chance && !(bound < previous);
        previous = bound;
      }
    }
  }
  o.check(positive == 0 && increasing == 0 && flat_chance == 0,
          std::to_string(histories) + " sampled histories: bound>0 " + std::to_string(positive) + ", increases " +
              std::to_string(increasing) + ", chance steps not decreasing " + std::to_string(flat_chance));
  return o;
}

Outcome seed_rejection() {
  Outcome o;
  const auto start = Clock::now();
  const auto bundle = games::make_game("tic_tac_toe");
  const synthesis::BuiltinCandidateLoader loader;
  const auto config = search(50, 2);
  std::vector<arena::RejectionCandidate> candidates;
  for (int i = 0; i < 4; ++i) {
    const std::string name = "good" + std::to_string(i);
    const auto handle = loader.load(synthesis::builtin_source("tic_tac_toe"));
    candidates.push_back({name, handle.model, arena::make_search_agent(name, handle, true, config)});
  }
  const auto bad = loader.load(synthesis::builtin_source("tic_tac_toe", {"rename-actions"}));
  candidates.push_back({"forfeiter", bad.model, arena::make_search_agent("forfeiter", bad, true, config)});
  arena::RejectionConfig rc;  // 2 hosts, 50 repeats
  const auto report = arena::seed_rejection(candidates, bundle, rc, 11);
  std::size_t best = 0;
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    if (report.entries[i].mean_payoff > report.entries[best].mean_payoff) best = i;
  }
  o.check(report.matches == 2 * 5 * 5 * 50, "matches " + std::to_string(report.matches));
  o.check(!report.entries[4].accepted && report.entries[4].forfeits > 0,
          "forfeiter rejected (mean " + fmt(report.entries[4].mean_payoff, 3) + ", forfeits " +
              std::to_string(report.entries[4].forfeits) + ")");
  o.check(report.entries[best].accepted, "best " + report.entries[best].name + " retained");
  const double elapsed = seconds_since(start);
  o.check(elapsed < 1200.0, "runtime " + fmt(elapsed, 1) + "s < 1200s");
  return o;
}

Outcome random_vs_random_calibration() {
  Outcome o;
  const auto bundle = games::make_game("tic_tac_toe");
  const auto setup = arena::MatchSetup::from_bundle(bundle);
  arena::RandomAgent a, b;
  const auto report = arena::run_series(setup, a, b, 1000, 401);
  const double exact = testing::ttt_random_play_distribution().first_wins;
  const double win0 = report.seats[0].win_rate();
  o.check(win0 >= 0.52 && win0 <= 0.65, "P0 win rate " + fmt(win0) + " (exact " + fmt(exact) + ")");
  return o;
}

struct Criterion {
  std::string name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace cwm

int main(int argc, char** argv) {
  using namespace cwm;
  const std::vector<Criterion> criteria{
      {"ground-truth self-consistency", ground_truth_self_consistency},
      {"tic-tac-toe planner strength", tic_tac_toe_planner_strength},
      {"connect-four first mover", connect_four_first_mover},
      {"ISMCTS positive exploitation", ismcts_positive_exploitation},
      {"ISMCTS = MCTS reduction", ismcts_reduces_to_mcts},
      {"determinization support", determinization_support},
      {"refinement convergence", refinement_convergence},
      {"closed-deck suite", closed_deck_suite},
      {"seed rejection", seed_rejection},
      {"random-vs-random calibration", random_vs_random_calibration},
  };
  const std::string only = argc > 1 ? argv[1] : "";
  int failures = 0;
  const auto total_start = Clock::now();
  for (const auto& c : criteria) {
    if (!only.empty() && c.name.find(only) == std::string::npos) continue;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    failures += !o.pass;
    std::printf("%s  %-32s %7.1fs  %s\n", o.pass ? "PASS" : "FAIL", c.name.c_str(), seconds_since(start),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d failed, total %.1fs\n", failures, seconds_since(total_start));
  return failures == 0 ? 0 : 1;
}
