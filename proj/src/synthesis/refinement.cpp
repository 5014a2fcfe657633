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

#include "cwm/synthesis/refinement.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace cwm::synthesis {
namespace {

constexpr double kBetaFloor = 0.01;

std::string numbered(const std::string& stem, int index, const std::string& suffix) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d", index);
  return stem + buf + suffix;
}

llm::CompletionRequest make_request(const SearchBudget& budget, std::string prompt, int index) {
  llm::CompletionRequest r;
  r.prompt = std::move(prompt);
  r.temperature = budget.temperature;
  r.model_name = budget.model_name;
  r.request_id = "call-" + std::to_string(index);
  return r;
}

evidence::AccuracyReport all_failed(const std::vector<evidence::UnitTest>& tests, const std::string& trace) {
  evidence::AccuracyReport r;
  for (const auto& t : tests) {
    switch (t.kind) {
      case evidence::TestKind::kTransition: ++r.transition_total; break;
      case evidence::TestKind::kRandomPlay: ++r.random_play_total; break;
      default: ++r.inference_total; break;
    }
    r.failures.push_back({t.id, t.kind, trace, {}});
  }
  r.transition_accuracy = r.transition_total == 0 ? 1.0 : 0.0;
  r.inference_accuracy = r.inference_total == 0 ? 1.0 : 0.0;
  r.random_play_accuracy = r.random_play_total == 0 ? 1.0 : 0.0;
  r.combined = tests.empty() ? 1.0 : 0.0;
  r.empty_warning = tests.empty();
  return r;
}

}  // namespace

std::pair<double, double> thompson_parameters(double h, int expansion_count, double C) {
  const double alpha = std::max(1.0 + C * h, kBetaFloor);
  const double beta = std::max(1.0 + (1.0 - C) * h, kBetaFloor) + static_cast<double>(std::max(expansion_count, 0));
  return {alpha, beta};
}

std::size_t thompson_select(const std::vector<const RefinementNode*>& eligible, double C, Rng& rng) {
  if (eligible.empty()) throw NoEligibleNode("no refinement node is eligible for expansion");
  std::size_t best = 0;
  double best_draw = -1.0;
  for (std::size_t i = 0; i < eligible.size(); ++i) {
    const auto [a, b] = thompson_parameters(eligible[i]->h, eligible[i]->expansion_count, C);
    const double draw = rng.beta(a, b);
    if (draw > best_draw) {
      best_draw = draw;
      best = i;
    }
  }
  return best;
}

RunRecorder::RunRecorder(std::filesystem::path dir) : dir_(std::move(dir)) {
  for (const char* sub : {"prompts", "candidates", "reports", "trajectories"}) {
    std::filesystem::create_directories(dir_ / sub);
  }
}

void RunRecorder::write_text(const std::string& relative, const std::string& text) {
  const auto path = dir_ / relative;
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

void RunRecorder::record_call(int index, const std::string& prompt, const std::string& response) {
  write_text("prompts/" + numbered("call_", index, "_prompt.txt"), prompt);
  write_text("prompts/" + numbered("call_", index, "_response.txt"), response);
}

void RunRecorder::record_candidate(const RefinementNode& node) {
  write_text("candidates/" + numbered("node_", node.id, ".py"), node.source_text);
}

RefinementNode evaluate_candidate(const SynthesisTask& task, const CandidateLoader& loader, std::string source,
                                  std::uint64_t test_seed) {
  RefinementNode node;
  node.source_text = std::move(source);
  try {
    const WorldModelHandle handle = loader.load(node.source_text);
    node.report = evidence::evaluate_accuracy(task.tests, handle, test_seed);
  } catch (const std::exception& e) {
    node.load_error = e.what();
    std::string trace = e.what();
    if (const auto* f = dynamic_cast<const ModelFault*>(&e); f != nullptr && !f->trace().empty()) trace = f->trace();
    node.report = all_failed(task.tests, trace);
  }
  node.h = node.report.combined;
  for (const auto& f : node.report.failures) node.failing_test_ids.push_back(f.test_id);
  return node;
}

std::string RefinementResult::render_trace() const {
  std::string out = "call\tbest_h\n";
  for (std::size_t i = 0; i < accuracy_trace.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", accuracy_trace[i]);
    out += std::to_string(i + 1) + "\t" + buf + "\n";
  }
  return out;
}

Value RefinementResult::tree_manifest() const {
  Value nodes = Value::array();
  for (const auto& n : tree) {
    nodes.push_back(Value{{"id", n.id},
                          {"parent_id", n.parent_id < 0 ? Value() : Value(n.parent_id)},
                          {"h", n.h},
                          {"expansion_count", n.expansion_count},
                          {"failing_tests", static_cast<int>(n.failing_test_ids.size())},
                          {"load_error", n.load_error.empty() ? Value() : Value(n.load_error)}});
  }
  return Value{{"best_id", best.id},
               {"best_h", best.h},
               {"llm_calls", llm_calls},
               {"wasted_calls", wasted_calls},
               {"budget_exhausted", budget_exhausted},
               {"stopped_by_error", stopped_by_error ? Value(*stopped_by_error) : Value()},
               {"nodes", nodes}};
}

RefinementResult refine_tree_search(const SynthesisTask& task, llm::LlmClient& client, const CandidateLoader& loader,
                                    const SearchBudget& budget, std::uint64_t seed, RunRecorder* recorder) {
  RefinementResult result;
  Rng rng(derive_seed(seed, "thompson"));
  const int max_calls = std::max(budget.num_retries, 1);
  std::size_t best_index = 0;

  auto add_candidates = [&](const std::vector<std::string>& sources, int parent) {
    for (const auto& src : sources) {
      RefinementNode node = evaluate_candidate(task, loader, src, seed);
      node.id = static_cast<int>(result.tree.size());
      node.parent_id = parent;
      if (recorder) recorder->record_candidate(node);
      result.tree.push_back(std::move(node));
      if (result.tree.back().h > result.tree[best_index].h) best_index = result.tree.size() - 1;
    }
  };
  auto ask = [&](const std::string& prompt) -> std::vector<std::string> {
    const int index = result.llm_calls + 1;
    const std::string response = client.complete(make_request(budget, prompt, index));
    ++result.llm_calls;
    if (recorder) recorder->record_call(index, prompt, response);
    try {
      return extract_candidates(response, budget.num_targets_per_call);
    } catch (const NoCodeBlock&) {
      ++result.wasted_calls;
      return {};
    }
  };
  auto eligible_nodes = [&] {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < result.tree.size(); ++i) {
      const auto& n = result.tree[i];
      if (n.h >= 1.0) continue;
      const bool ok = n.parent_id < 0
                          ? n.h >= budget.min_heuristic_value_on_init
                          : n.h >= result.tree[static_cast<std::size_t>(n.parent_id)].h + budget.min_heuristic_value_gain;
      if (ok) out.push_back(i);
    }
    return out;
  };
  const std::string fresh_prompt =
      assemble_prompt(task, std::nullopt, select_prompt_tests(task.tests, nullptr, budget.num_tests_on_init),
                      budget.num_targets_per_call);

  try {
    while (result.llm_calls < max_calls) {
      const auto eligible = eligible_nodes();
      if (result.llm_calls == 0 || eligible.empty()) {
        add_candidates(ask(fresh_prompt), -1);
      } else {
        std::vector<const RefinementNode*> view;
        for (auto i : eligible) view.push_back(&result.tree[i]);
        const std::size_t chosen = eligible[thompson_select(view, budget.heuristic_weight, rng)];
        RefinementNode& node = result.tree[chosen];
        const auto tests = select_prompt_tests(task.tests, &node.report, budget.num_tests_on_error,
                                               static_cast<std::size_t>(node.expansion_count));
        ++node.expansion_count;
        const std::string prompt = assemble_prompt(task, node.source_text, tests, budget.num_targets_per_call);
        const int parent = node.id;
        add_candidates(ask(prompt), parent);
      }
      result.accuracy_trace.push_back(result.tree.empty() ? 0.0 : result.tree[best_index].h);
      if (!result.tree.empty() && result.tree[best_index].h >= 1.0) break;
    }
  } catch (const llm::LlmError& e) {
    result.stopped_by_error = e.what();
  }
  if (!result.tree.empty()) result.best = result.tree[best_index];
  result.budget_exhausted = !result.solved() && result.llm_calls >= max_calls;
  return result;
}

RefinementResult refine_conversation(const SynthesisTask& task, llm::LlmClient& client,
                                     const CandidateLoader& loader, const SearchBudget& budget,
                                     RunRecorder* recorder) {
  RefinementResult result;
  const int max_calls = std::max(budget.num_retries, 1);
  const std::string opening =
      assemble_prompt(task, std::nullopt, select_prompt_tests(task.tests, nullptr, budget.num_tests_on_init), 1);
  struct Exchange {
    std::string response;
    std::string feedback;
    std::string test_id;
  };
  std::vector<Exchange> exchanges;
  std::optional<std::size_t> current;  // newest candidate's tree index
  std::optional<std::size_t> best;

  auto conversation_prompt = [&] {
    std::string p = opening;
    const std::size_t window = static_cast<std::size_t>(std::max(budget.conversation_window, 1));
    std::size_t start = exchanges.size() > window ? exchanges.size() - window : 0;
    if (start > 0) {
      p += "\n(Earlier exchanges omitted. They addressed these failing tests:";
      for (std::size_t i = 0; i < start; ++i) {
        p += " " + (exchanges[i].test_id.empty() ? std::string("<no code>") : exchanges[i].test_id);
      }
      p += ")\n";
    }
    for (std::size_t i = start; i < exchanges.size(); ++i) {
      p += "\n### Assistant\n" + exchanges[i].response + "\n\n### User\n" + exchanges[i].feedback;
    }
    return p;
  };

  try {
    while (result.llm_calls < max_calls) {
      const std::string prompt = conversation_prompt();
      const int index = result.llm_calls + 1;
      const std::string response = client.complete(make_request(budget, prompt, index));
      ++result.llm_calls;
      if (recorder) recorder->record_call(index, prompt, response);
      Exchange ex{response, {}, {}};
      std::vector<std::string> sources;
      try {
        sources = extract_candidates(response, 1);
      } catch (const NoCodeBlock&) {
        ++result.wasted_calls;
      }
      for (const auto& src : sources) {
        RefinementNode node = evaluate_candidate(task, loader, src);
        node.id = static_cast<int>(result.tree.size());
        node.parent_id = current ? static_cast<int>(*current) : -1;
        if (recorder) recorder->record_candidate(node);
        result.tree.push_back(std::move(node));
        const std::size_t idx = result.tree.size() - 1;
        if (!best || result.tree[idx].h >= result.tree[*best].h) best = idx;
      }
      // Newest batch: keep its best candidate (ties to the most recent).
      if (!sources.empty()) {
        std::size_t newest = result.tree.size() - sources.size();
        for (std::size_t i = newest; i < result.tree.size(); ++i) {
          if (result.tree[i].h >= result.tree[newest].h) newest = i;
        }
        current = newest;
      }
      result.accuracy_trace.push_back(best ? result.tree[*best].h : 0.0);
      if (best && result.tree[*best].h >= 1.0) break;
      if (!current) {
        ex.feedback = "Your reply contained no code block. Return the complete code in a single code block starting "
                      "with ```python.\n";
      } else {
        const RefinementNode& node = result.tree[*current];
        const auto tests =
            select_prompt_tests(task.tests, &node.report, 1, exchanges.size());
        std::vector<PromptTest> one(tests.begin(), tests.begin() + std::min<std::size_t>(tests.size(), 1));
        ex.test_id = one.empty() ? std::string() : one.front().test->id;
        ex.feedback = (sources.empty() ? std::string("Your reply contained no code block. ") : std::string()) +
                      "The code fails the following unit test. Fix the code so that it passes.\n"
                      "# START UNIT TESTS\n" + render_test_code(task, one) + "# END UNIT TESTS\n"
                      "Return the complete corrected code in a single code block starting with ```python.\n";
      }
      exchanges.push_back(std::move(ex));
    }
  } catch (const llm::LlmError& e) {
    result.stopped_by_error = e.what();
  }
  if (best) result.best = result.tree[*best];
  result.budget_exhausted = !result.solved() && result.llm_calls >= max_calls;
  return result;
}

double likelihood_lower_bound(const WorldModel& model, const GameState& initial, const std::vector<Action>& history,
                              PlayerId player) {
  GameState state = initial;
  double log_p = 0.0;
  for (std::size_t i = 0; i < history.size(); ++i) {
    const PlayerId current = model.get_current_player(state);
    if (current == kTerminalPlayer) {
      throw IllegalHistory("history continues past a terminal state at step " + std::to_string(i));
    }
    const auto legal = model.get_legal_actions(state);
    if (std::find(legal.begin(), legal.end(), history[i]) == legal.end()) {
      throw IllegalHistory("action '" + history[i] + "' is not legal at step " + std::to_string(i));
    }
    if (current != player) log_p -= std::log(static_cast<double>(legal.size()));
    state = model.apply_action(state, history[i]);
  }
  return log_p;
}

ValueSynthesisResult synthesize_value_function(const SynthesisTask& task, llm::LlmClient& client,
                                               const CandidateLoader& loader, const std::string& model_source,
                                               const games::GameBundle& bundle, const ValueSynthesisConfig& config,
                                               std::uint64_t seed, RunRecorder* recorder) {
  ValueSynthesisResult result;
  const WorldModelHandle base = loader.load(model_source);
  const WorldModel& model = *base.model;

  // Validation states from random play on the synthesized model.
  std::vector<GameState> open_states;
  std::vector<GameState> terminal_states;
  Rng rng(derive_seed(seed, "value-validation"));
  for (int game = 0; game < 4 * config.validation_states && (static_cast<int>(open_states.size()) < config.validation_states ||
                                                            static_cast<int>(terminal_states.size()) < config.validation_states / 4 + 1);
       ++game) {
    GameState s = model.state_from_value(bundle.initial_state.to_value());
    for (int step = 0; step < evidence::kMaxGameLength; ++step) {
      const PlayerId p = model.get_current_player(s);
      if (p == kTerminalPlayer) {
        terminal_states.push_back(s);
        break;
      }
      if (p >= 0 && rng.uniform01() < 0.3) open_states.push_back(s);
      const auto legal = model.get_legal_actions(s);
      s = model.apply_action(s, legal[rng.uniform_index(legal.size())]);
    }
  }
  if (static_cast<int>(open_states.size()) > config.validation_states) open_states.resize(static_cast<std::size_t>(config.validation_states));
  auto values_of = [](const std::vector<GameState>& states, std::size_t limit) {
    std::vector<Value> out;
    for (std::size_t i = 0; i < states.size() && i < limit; ++i) out.push_back(states[i].to_value());
    return out;
  };
  const std::string prompt =
      assemble_value_prompt(task, model_source, values_of(open_states, 5), values_of(terminal_states, 5));

  std::vector<std::shared_ptr<arena::Agent>> agents;
  std::vector<std::size_t> agent_candidate;  // candidate index per agent (after the baseline)
  agents.push_back(arena::make_search_agent("no-value-function", base, bundle.perfect_information(), config.search));
  for (int i = 0; i < config.count; ++i) {
    llm::CompletionRequest request;
    request.prompt = prompt;
    request.temperature = config.temperature;
    request.model_name = config.model_name;
    request.request_id = "value-" + std::to_string(i);
    const std::string response = client.complete(request);
    ++result.llm_calls;
    if (recorder) recorder->record_call(result.llm_calls, prompt, response);
    std::string source;
    std::string reason;
    try {
      source = extract_candidates(response, 1).front();
    } catch (const NoCodeBlock& e) {
      reason = e.what();
    }
    result.candidates.push_back(source);
    WorldModelHandle handle;
    if (reason.empty()) {
      try {
        handle = loader.load_value_function(model_source, source);
        for (const auto& s : open_states) {
          const double v = handle.value_function->value(s, model.get_current_player(s));
          if (!std::isfinite(v)) throw ModelFault("value_function returned a non-finite value");
        }
        for (const auto& s : terminal_states) {
          const auto rewards = model.get_rewards(s);
          for (std::size_t p = 0; p < rewards.size(); ++p) {
            const double v = handle.value_function->value(s, static_cast<PlayerId>(p));
            if (std::abs(v - rewards[p]) > 1e-9) {
              throw ModelFault("terminal value " + std::to_string(v) + " != reward " + std::to_string(rewards[p]) +
                               " for player " + std::to_string(p));
            }
          }
        }
      } catch (const std::exception& e) {
        reason = e.what();
      }
    }
    result.rejected_reasons.push_back(reason);
    if (reason.empty()) {
      agents.push_back(arena::make_search_agent("value-" + std::to_string(i), handle, bundle.perfect_information(),
                                                config.search));
      agent_candidate.push_back(static_cast<std::size_t>(i));
    }
  }
  if (agents.size() == 1) return result;
  const arena::MatchSetup setup = arena::MatchSetup::hosted_by(bundle, base.model);
  result.tournament = arena::round_robin_tournament(agents, setup, config.matches_per_pair, seed);
  const std::size_t winner = result.tournament.ranking.front().index;
  if (winner != 0) result.best_source = result.candidates[agent_candidate[winner - 1]];
  return result;
}

}  // namespace cwm::synthesis
