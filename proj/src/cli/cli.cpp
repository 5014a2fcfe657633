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

#include "cwm/cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cwm/arena/arena.hpp"
#include "cwm/evidence/unit_tests.hpp"
#include "cwm/llm/client.hpp"
#include "cwm/synthesis/refinement.hpp"

namespace cwm::cli {
namespace {

namespace fs = std::filesystem;

struct CommonLlm {
  std::string cache_dir;
  std::string replay_dir;
  std::string script_dir;
  std::string model;
  double temperature = 1.0;
};

struct SearchFlags {
  int sims = 1000;
  int rollouts = 10;
  double c = std::sqrt(2.0);
};

planners::SearchConfig search_config(const SearchFlags& f) {
  planners::SearchConfig c;
  c.num_simulations = f.sims;
  c.num_rollouts = f.rollouts;
  c.exploration_constant = f.c;
  return c;
}

std::vector<std::string> split_command(const std::string& cmd) {
  std::istringstream in(cmd);
  std::vector<std::string> out;
  std::string word;
  while (in >> word) out.push_back(word);
  return out;
}

// Builds the completion client for the chosen cache mode.
std::shared_ptr<llm::LlmClient> make_llm_client(const CommonLlm& flags, const fs::path& default_cache) {
  std::shared_ptr<llm::LlmClient> inner;
  if (!flags.script_dir.empty()) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(flags.script_dir)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<std::string> script;
    for (const auto& f : files) script.push_back(evidence::read_text_file(f));
    inner = std::make_shared<llm::ScriptedMock>(std::move(script));
  }
  if (!flags.replay_dir.empty()) {
    return std::make_shared<llm::CachingClient>(nullptr, std::make_shared<llm::ReplayCache>(flags.replay_dir),
                                                llm::CacheMode::kReplay);
  }
  if (!inner) {
    auto config = llm::HttpClientConfig::from_env();
    if (!flags.model.empty()) config.model = flags.model;
    inner = std::make_shared<llm::HttpCompletionClient>(config);
  }
  const fs::path cache_dir = flags.cache_dir.empty() ? default_cache : fs::path(flags.cache_dir);
  const auto mode = flags.cache_dir.empty() ? llm::CacheMode::kLive : llm::CacheMode::kCached;
  return std::make_shared<llm::CachingClient>(inner, std::make_shared<llm::ReplayCache>(cache_dir), mode);
}

std::unique_ptr<synthesis::CandidateLoader> make_loader(const std::string& host_cmd, const games::GameBundle& bundle) {
  if (host_cmd.empty()) return std::make_unique<synthesis::BuiltinCandidateLoader>();
  host::HostConfig config;
  config.argv = split_command(host_cmd);
  return std::make_unique<synthesis::HostCandidateLoader>(config, bundle.metadata.num_players,
                                                          bundle.initial_state.to_value());
}

std::vector<evidence::Trajectory> load_or_generate(const games::GameBundle& bundle, const std::string& data_dir,
                                                   int n, std::uint64_t seed) {
  if (data_dir.empty()) return evidence::generate_trajectories(bundle, n, seed);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(data_dir)) {
    if (e.path().extension() == ".jsonl" && e.path().filename().string().rfind("trajectory_", 0) == 0) {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<evidence::Trajectory> out;
  for (const auto& f : files) out.push_back(evidence::parse_trajectory(evidence::read_text_file(f), *bundle.model.model));
  if (out.empty()) throw Error("no trajectory_*.jsonl files in " + data_dir);
  return out;
}

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

std::string render_report(const evidence::AccuracyReport& r, std::size_t max_failures) {
  std::string out;
  out += "transition accuracy:  " + fixed(r.transition_accuracy) + "  (" + std::to_string(r.transition_passed) + "/" +
         std::to_string(r.transition_total) + ")\n";
  out += "inference accuracy:   " + fixed(r.inference_accuracy) + "  (" + std::to_string(r.inference_passed) + "/" +
         std::to_string(r.inference_total) + ")\n";
  out += "random-play accuracy: " + fixed(r.random_play_accuracy) + "  (" + std::to_string(r.random_play_passed) +
         "/" + std::to_string(r.random_play_total) + ")\n";
  out += "combined:             " + fixed(r.combined) + "\n";
  if (r.empty_warning) out += "warning: the test set is empty\n";
  for (std::size_t i = 0; i < r.failures.size() && i < max_failures; ++i) {
    const auto& f = r.failures[i];
    out += "FAILED " + f.test_id + " [" + evidence::to_string(f.kind) + "]: " +
           f.trace.substr(0, std::min<std::size_t>(f.trace.size(), 300)) + "\n";
  }
  if (r.failures.size() > max_failures) {
    out += "... " + std::to_string(r.failures.size() - max_failures) + " more failures\n";
  }
  return out;
}

Value report_value(const evidence::AccuracyReport& r) {
  Value failures = Value::array();
  for (const auto& f : r.failures) {
    failures.push_back(Value{{"id", f.test_id}, {"kind", evidence::to_string(f.kind)}, {"trace", f.trace}});
  }
  return Value{{"transition_accuracy", r.transition_accuracy},
               {"inference_accuracy", r.inference_accuracy},
               {"random_play_accuracy", r.random_play_accuracy},
               {"combined", r.combined},
               {"total", r.total()},
               {"passed", r.passed()},
               {"empty_warning", r.empty_warning},
               {"failures", failures}};
}

// ---- gen-data ---------------------------------------------------------------

struct GenDataFlags {
  std::string game;
  int n = 5;
  std::uint64_t seed = 0;
  std::string out = "trajectories";
  std::string deck = "open";
};

int cmd_gen_data(const GenDataFlags& f, std::ostream& out) {
  const auto bundle = games::make_game(f.game);
  const auto trajectories = evidence::generate_trajectories(bundle, f.n, f.seed);
  fs::create_directories(f.out);
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "trajectory_%03zu.jsonl", i);
    evidence::write_text_file(fs::path(f.out) / name, evidence::serialize_trajectory(trajectories[i]));
    if (f.deck == "closed") {
      for (int p = 0; p < bundle.metadata.num_players; ++p) {
        std::snprintf(name, sizeof name, "closed_%03zu_p%d.jsonl", i, p);
        evidence::write_text_file(fs::path(f.out) / name,
                                  evidence::serialize_closed_deck(evidence::project_closed_deck(trajectories[i], p),
                                                                  trajectories[i].seed));
      }
    }
  }
  out << "wrote " << trajectories.size() << " trajectories of " << f.game << " to " << f.out << "\n";
  return kExitOk;
}

// ---- synthesize -------------------------------------------------------------

struct SynthesizeFlags {
  std::string game;
  std::string mode = "tree";
  std::string inference = "history";
  std::string deck = "open";
  std::string data_dir;
  int trajectories = 5;
  std::uint64_t seed = 0;
  int budget = 500;
  int num_targets = 3;
  std::string out = "run";
  std::string host_cmd;
  int random_play_tests = 2;
  CommonLlm llm;
};

int cmd_synthesize(const SynthesizeFlags& f, std::ostream& out, std::ostream& err) {
  const auto bundle = games::make_game(f.game);
  if (f.deck == "closed" && bundle.perfect_information()) {
    err << "error: closed-deck learning applies to imperfect-information games only\n";
    return kExitError;
  }
  synthesis::RunRecorder recorder(f.out);
  const auto trajectories = load_or_generate(bundle, f.data_dir, f.trajectories, f.seed);
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    recorder.write_text("trajectories/trajectory_" + std::to_string(i) + ".jsonl",
                        evidence::serialize_trajectory(trajectories[i]));
  }

  synthesis::SynthesisTask task;
  task.game_name = bundle.name;
  task.game_description = bundle.rules;
  task.num_players = bundle.metadata.num_players;
  task.initial_state = bundle.initial_state.to_value();
  if (f.deck == "closed") {
    task.target = synthesis::SynthesisTarget::kClosedDeckAutoencoder;
    for (const auto& traj : trajectories) {
      for (int p = 0; p < bundle.metadata.num_players; ++p) {
        std::vector<std::uint64_t> seeds;
        if (p == 0) {
          for (int k = 0; k < f.random_play_tests; ++k) seeds.push_back(derive_seed(traj.seed, static_cast<std::uint64_t>(k)));
        }
        auto tests = evidence::derive_closed_deck_tests(evidence::project_closed_deck(traj, p), task.initial_state, seeds);
        task.tests.insert(task.tests.end(), tests.begin(), tests.end());
      }
    }
  } else {
    const bool state_mode = f.inference == "state";
    task.target = bundle.perfect_information() ? synthesis::SynthesisTarget::kCwm
                  : state_mode                 ? synthesis::SynthesisTarget::kCwmStateInference
                                               : synthesis::SynthesisTarget::kCwmHistoryInference;
    for (const auto& traj : trajectories) {
      auto tests = evidence::derive_transition_tests(traj);
      task.tests.insert(task.tests.end(), tests.begin(), tests.end());
      if (!bundle.perfect_information()) {
        for (int p = 0; p < bundle.metadata.num_players; ++p) {
          auto inf = evidence::derive_inference_tests(
              traj, p, state_mode ? evidence::InferenceMode::kState : evidence::InferenceMode::kHistory);
          task.tests.insert(task.tests.end(), inf.begin(), inf.end());
        }
      }
    }
  }
  recorder.write_text("reports/train_tests.jsonl", evidence::serialize_manifest(task.tests));

  auto client = make_llm_client(f.llm, fs::path(f.out) / "cache");
  auto loader = make_loader(f.host_cmd, bundle);
  synthesis::SearchBudget budget;
  budget.num_retries = f.budget;
  budget.num_targets_per_call = f.num_targets;
  budget.model_name = f.llm.model;
  budget.temperature = f.llm.temperature;
  const auto result = f.mode == "conversation"
                          ? synthesis::refine_conversation(task, *client, *loader, budget, &recorder)
                          : synthesis::refine_tree_search(task, *client, *loader, budget, f.seed, &recorder);

  recorder.write_text("reports/tree.json", canonical_serialize(result.tree_manifest()) + "\n");
  recorder.write_text("reports/accuracy_trace.tsv", result.render_trace());
  if (!result.tree.empty()) {
    recorder.write_text("candidates/best.py", result.best.source_text);
    recorder.write_text("reports/best_report.json", canonical_serialize(report_value(result.best.report)) + "\n");
  }
  out << "game: " << f.game << "  target: " << synthesis::to_string(task.target) << "  tests: " << task.tests.size()
      << "  mode: " << f.mode << "\n";
  out << "llm calls: " << result.llm_calls << "  wasted: " << result.wasted_calls
      << "  candidates: " << result.tree.size() << "\n";
  if (!result.tree.empty()) out << render_report(result.best.report, 5);
  out << "run directory: " << f.out << "\n";
  if (result.stopped_by_error) {
    err << "warning: LLM failure ended the run early: " << *result.stopped_by_error << "\n";
  }
  if (result.tree.empty()) {
    err << "error: no candidate was produced\n";
    return kExitError;
  }
  if (result.budget_exhausted) err << "warning: budget exhausted before all tests passed\n";
  return result.solved() && !result.stopped_by_error ? kExitOk : kExitDegraded;
}

// ---- eval -------------------------------------------------------------------

struct EvalFlags {
  std::string game;
  std::string candidate;
  bool ground_truth = false;
  std::string host_cmd;
  std::string tests_manifest;
  int games = 100;
  int transitions = 10000;
  double search_probability = 0.5;
  std::uint64_t seed = 1;
  SearchFlags search{100, 10, std::sqrt(2.0)};
  std::string out;
};

int cmd_eval(const EvalFlags& f, std::ostream& out, std::ostream& err) {
  const auto bundle = games::make_game(f.game);
  WorldModelHandle target;
  if (f.ground_truth) {
    target = bundle.model;
  } else {
    if (f.candidate.empty() || !fs::exists(f.candidate)) {
      err << "error: candidate file not found: " << (f.candidate.empty() ? "<none>" : f.candidate) << "\n";
      return kExitError;
    }
    target = make_loader(f.host_cmd, bundle)->load(evidence::read_text_file(f.candidate));
  }
  std::vector<evidence::UnitTest> tests;
  if (!f.tests_manifest.empty()) {
    tests = evidence::parse_manifest(evidence::read_text_file(f.tests_manifest));
  } else {
    evidence::TestSetConfig config;
    config.num_games = f.games;
    config.num_transitions = f.transitions;
    config.search_probability = f.search_probability;
    config.search = search_config(f.search);
    config.seed = f.seed;
    tests = evidence::build_test_set(bundle, config);
  }
  const auto report = evidence::evaluate_accuracy(tests, target, f.seed);
  out << "game: " << f.game << "  tests: " << tests.size() << "\n" << render_report(report, 10);
  if (!f.out.empty()) evidence::write_text_file(f.out, canonical_serialize(report_value(report)) + "\n");
  return report.combined >= 1.0 && !report.empty_warning ? kExitOk : kExitDegraded;
}

// ---- arena ------------------------------------------------------------------

struct ArenaFlags {
  std::string game;
  std::string p0 = "gt-mcts";
  std::string p1 = "random";
  int n = 100;
  std::uint64_t seed = 0;
  SearchFlags search;
  std::string run_dir;    // synthesized model for cwm-* agents
  std::string candidate;  // alternatively, a candidate file
  std::string host_cmd;
  bool cwm_referee = false;
  double move_seconds = 30.0;
  int workers = 1;
  std::string out;
  CommonLlm llm;
};

WorldModelHandle load_cwm(const ArenaFlags& f, const games::GameBundle& bundle) {
  std::string path = f.candidate;
  if (path.empty() && !f.run_dir.empty()) path = (fs::path(f.run_dir) / "candidates" / "best.py").string();
  if (path.empty()) throw Error("cwm agents need --host <run-dir> or --candidate <file>");
  return make_loader(f.host_cmd, bundle)->load(evidence::read_text_file(path));
}

std::shared_ptr<arena::Agent> make_agent(const std::string& spec, const ArenaFlags& f, const games::GameBundle& bundle,
                                         const std::string& seat) {
  const auto config = search_config(f.search);
  if (spec == "random") return std::make_shared<arena::RandomAgent>("random");
  if (spec == "invalid") return std::make_shared<arena::InvalidAgent>("invalid");
  if (spec == "gt-mcts" || spec == "gt-ismcts" || spec == "gt") {
    return arena::make_search_agent(spec, bundle.model, bundle.perfect_information(), config);
  }
  if (spec == "cwm-mcts" || spec == "cwm-ismcts" || spec == "cwm") {
    return arena::make_search_agent(spec, load_cwm(f, bundle), bundle.perfect_information(), config);
  }
  if (spec == "llm") {
    auto client = make_llm_client(f.llm, fs::path(f.out.empty() ? "." : fs::path(f.out).parent_path()) / "llm_cache");
    return std::make_shared<arena::LlmPolicyAgent>("llm-" + seat, client, bundle.name, bundle.rules, f.llm.model);
  }
  throw Error("unknown agent '" + spec + "' (random, gt-mcts, gt-ismcts, cwm-mcts, cwm-ismcts, llm, invalid)");
}

int cmd_arena(const ArenaFlags& f, std::ostream& out) {
  const auto bundle = games::make_game(f.game);
  auto a0 = make_agent(f.p0, f, bundle, "p0");
  auto a1 = make_agent(f.p1, f, bundle, "p1");
  const arena::MatchSetup setup = f.cwm_referee ? arena::MatchSetup::hosted_by(bundle, load_cwm(f, bundle).model)
                                                : arena::MatchSetup::from_bundle(bundle);
  arena::MatchOptions options;
  options.move_time_budget = std::chrono::milliseconds(static_cast<long long>(f.move_seconds * 1000));
  const auto report = arena::run_series(setup, *a0, *a1, f.n, f.seed, options, f.workers);
  out << report.render_table();
  if (!f.out.empty()) {
    std::string text = canonical_serialize(report.to_value()) + "\n";
    for (const auto& r : report.results) text += canonical_serialize(r.to_value()) + "\n";
    evidence::write_text_file(f.out, text);
  }
  return report.voided == 0 ? kExitOk : kExitDegraded;
}

// ---- play -------------------------------------------------------------------

class HumanAgent : public arena::Agent {
 public:
  HumanAgent(std::istream& in, std::ostream& out) : in_(in), out_(out) {}
  std::string name() const override { return "human"; }
  bool thread_safe() const override { return false; }
  Action act(const arena::AgentView& view, Rng&) override {
    const auto& legal = *view.legal_actions;
    if (view.full_state) {
      out_ << "state: " << canonical_serialize(*view.full_state) << "\n";
    } else {
      out_ << "observation: " << canonical_serialize(view.history->back().observation) << "\n";
    }
    std::string legal_list;
    for (const auto& a : legal) legal_list += (legal_list.empty() ? "" : " ") + a;
    out_ << "legal actions: " << legal_list << "\n";
    while (true) {
      out_ << "your move> " << std::flush;
      std::string line;
      if (!std::getline(in_, line)) throw Error("input closed");
      const auto b = line.find_first_not_of(" \t\r");
      const auto e = line.find_last_not_of(" \t\r");
      const std::string token = b == std::string::npos ? std::string() : line.substr(b, e - b + 1);
      if (std::find(legal.begin(), legal.end(), token) != legal.end()) return token;
      out_ << "illegal action '" << token << "'; legal actions: " << legal_list << "\n";
    }
  }

 private:
  std::istream& in_;
  std::ostream& out_;
};

// Narrates opponent moves for the human.
class AnnouncingAgent : public arena::Agent {
 public:
  AnnouncingAgent(std::shared_ptr<arena::Agent> inner, std::ostream& out) : inner_(std::move(inner)), out_(out) {}
  std::string name() const override { return inner_->name(); }
  bool thread_safe() const override { return false; }
  Action act(const arena::AgentView& view, Rng& rng) override {
    Action a = inner_->act(view, rng);
    out_ << inner_->name() << " plays " << a << "\n";
    return a;
  }

 private:
  std::shared_ptr<arena::Agent> inner_;
  std::ostream& out_;
};

struct PlayFlags {
  std::string game = "tic_tac_toe";
  int human_seat = 0;
  std::uint64_t seed = 0;
  SearchFlags search;
};

int cmd_play(const PlayFlags& f, std::istream& in, std::ostream& out) {
  const auto bundle = games::make_game(f.game);
  auto human = std::make_shared<HumanAgent>(in, out);
  auto engine = std::make_shared<AnnouncingAgent>(
      arena::make_search_agent("mcts", bundle.model, bundle.perfect_information(), search_config(f.search)), out);
  arena::MatchOptions options;
  options.move_time_budget = std::chrono::hours(24);
  options.record_log = true;
  arena::Agent& a0 = f.human_seat == 0 ? static_cast<arena::Agent&>(*human) : *engine;
  arena::Agent& a1 = f.human_seat == 0 ? static_cast<arena::Agent&>(*engine) : *human;
  const auto result = arena::run_match(arena::MatchSetup::from_bundle(bundle), a0, a1, f.seed, options);
  if (result.forfeit) {
    out << "player " << result.forfeit->player << " forfeits: " << result.forfeit->detail << "\n";
    return result.forfeit->player == f.human_seat ? kExitError : kExitOk;
  }
  std::string payoffs;
  for (double p : result.payoffs) payoffs += (payoffs.empty() ? "" : ", ") + fixed(p);
  out << "game over: " << arena::to_string(result.outcome) << "  payoffs: [" << payoffs << "]\n";
  return kExitOk;
}

void add_llm_flags(CLI::App* cmd, CommonLlm& llm) {
  cmd->add_option("--cache", llm.cache_dir, "Replay cache directory (serve hits, call the service on misses)");
  cmd->add_option("--replay", llm.replay_dir, "Serve completions only from this replay cache");
  cmd->add_option("--script-dir", llm.script_dir, "Answer LLM calls with the files of this directory, in name order");
  cmd->add_option("--llm-model", llm.model, "Model name sent to the completion service");
  cmd->add_option("--temperature", llm.temperature, "Sampling temperature");
}

void add_search_flags(CLI::App* cmd, SearchFlags& s) {
  cmd->add_option("--sims", s.sims, "Simulations per move");
  cmd->add_option("--rollouts", s.rollouts, "Rollouts per leaf evaluation");
  cmd->add_option("--exploration", s.c, "UCB exploration constant");
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Code world model toolkit: data generation, synthesis, evaluation and play", "cwm"};
  app.require_subcommand(1);

  GenDataFlags gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate trajectory files with random play");
  gen_cmd->add_option("--game", gen.game, "Game name")->required();
  gen_cmd->add_option("--n", gen.n, "Number of trajectories");
  gen_cmd->add_option("--seed", gen.seed, "Seed");
  gen_cmd->add_option("--out", gen.out, "Output directory");
  gen_cmd->add_option("--deck", gen.deck, "open or closed (closed also writes per-player evidence)")
      ->check(CLI::IsMember({"open", "closed"}));

  SynthesizeFlags syn;
  auto* syn_cmd = app.add_subcommand("synthesize", "Synthesize a world model from trajectories");
  syn_cmd->add_option("--game", syn.game, "Game name")->required();
  syn_cmd->add_option("--mode", syn.mode, "tree or conversation")->check(CLI::IsMember({"tree", "conversation"}));
  syn_cmd->add_option("--inference", syn.inference, "history or state")->check(CLI::IsMember({"history", "state"}));
  syn_cmd->add_option("--deck", syn.deck, "open or closed")->check(CLI::IsMember({"open", "closed"}));
  syn_cmd->add_option("--data", syn.data_dir, "Directory of trajectory files (default: generate)");
  syn_cmd->add_option("--trajectories", syn.trajectories, "Trajectories to generate when --data is absent");
  syn_cmd->add_option("--seed", syn.seed, "Seed");
  syn_cmd->add_option("--budget", syn.budget, "LLM call budget");
  syn_cmd->add_option("--targets", syn.num_targets, "Candidates requested per call");
  syn_cmd->add_option("--out", syn.out, "Run directory");
  syn_cmd->add_option("--host-cmd", syn.host_cmd, "Command that starts a candidate host (default: built-in loader)");
  add_llm_flags(syn_cmd, syn.llm);

  EvalFlags ev;
  auto* eval_cmd = app.add_subcommand("eval", "Measure a candidate's accuracy on a held-out test set");
  eval_cmd->add_option("--game", ev.game, "Game name")->required();
  eval_cmd->add_option("--candidate", ev.candidate, "Candidate source file");
  eval_cmd->add_flag("--ground-truth", ev.ground_truth, "Evaluate the ground-truth engine");
  eval_cmd->add_option("--host-cmd", ev.host_cmd, "Command that starts a candidate host");
  eval_cmd->add_option("--tests", ev.tests_manifest, "Test manifest (default: build a test set)");
  eval_cmd->add_option("--games", ev.games, "Games used to build the test set");
  eval_cmd->add_option("--transitions", ev.transitions, "Transitions sampled into the test set");
  eval_cmd->add_option("--search-probability", ev.search_probability, "Probability a seat plays search");
  eval_cmd->add_option("--seed", ev.seed, "Seed");
  eval_cmd->add_option("--out", ev.out, "Write the report here");
  add_search_flags(eval_cmd, ev.search);

  ArenaFlags ar;
  auto* arena_cmd = app.add_subcommand("arena", "Play a series of matches");
  arena_cmd->add_option("--game", ar.game, "Game name")->required();
  arena_cmd->add_option("--p0", ar.p0, "Agent in seat 0");
  arena_cmd->add_option("--p1", ar.p1, "Agent in seat 1");
  arena_cmd->add_option("--n", ar.n, "Matches");
  arena_cmd->add_option("--seed", ar.seed, "Seed");
  arena_cmd->add_option("--host", ar.run_dir, "Synthesis run directory providing the cwm-* model");
  arena_cmd->add_option("--candidate", ar.candidate, "Candidate file providing the cwm-* model");
  arena_cmd->add_option("--host-cmd", ar.host_cmd, "Command that starts a candidate host");
  arena_cmd->add_flag("--cwm-referee", ar.cwm_referee, "Referee on the synthesized model instead of the engine");
  arena_cmd->add_option("--move-seconds", ar.move_seconds, "Per-move time budget");
  arena_cmd->add_option("--workers", ar.workers, "Concurrent matches");
  arena_cmd->add_option("--out", ar.out, "Write the report here");
  add_search_flags(arena_cmd, ar.search);
  add_llm_flags(arena_cmd, ar.llm);

  PlayFlags pl;
  auto* play_cmd = app.add_subcommand("play", "Play against MCTS in the terminal");
  play_cmd->add_option("--game", pl.game, "Game name");
  play_cmd->add_option("--seat", pl.human_seat, "Your seat (0 or 1)")->check(CLI::Range(0, 1));
  play_cmd->add_option("--seed", pl.seed, "Seed");
  add_search_flags(play_cmd, pl.search);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  try {
    if (*gen_cmd) return cmd_gen_data(gen, out);
    if (*syn_cmd) return cmd_synthesize(syn, out, err);
    if (*eval_cmd) return cmd_eval(ev, out, err);
    if (*arena_cmd) return cmd_arena(ar, out);
    if (*play_cmd) return cmd_play(pl, in, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace cwm::cli
