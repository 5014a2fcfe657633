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

#ifndef CWM_SYNTHESIS_REFINEMENT_HPP_
#define CWM_SYNTHESIS_REFINEMENT_HPP_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cwm/arena/arena.hpp"
#include "cwm/llm/client.hpp"
#include "cwm/synthesis/candidates.hpp"
#include "cwm/synthesis/prompts.hpp"

namespace cwm::synthesis {

class NoEligibleNode : public Error {
 public:
  using Error::Error;
};
class IllegalHistory : public Error {
 public:
  using Error::Error;
};

struct RefinementNode {
  int id = 0;
  std::string source_text;
  int parent_id = -1;  // -1 for roots
  double h = 0.0;      // pass rate over the task's tests
  int expansion_count = 0;
  std::vector<std::string> failing_test_ids;
  evidence::AccuracyReport report;
  std::string load_error;  // set when the candidate failed to load
};

struct SearchBudget {
  int num_retries = 500;  // LLM calls, the initial generation included
  int num_tests_on_init = 5;
  int num_tests_on_error = 1;
  double min_heuristic_value_on_init = 0.01;
  double min_heuristic_value_gain = 0.01;
  double heuristic_weight = 5.0;  // C
  int num_targets_per_call = 3;
  double temperature = 1.0;
  std::string model_name;
  int conversation_window = 20;  // exchanges kept verbatim in chat mode
};

// Beta parameters for a node: alpha = max(1 + C h, 0.01),
// beta = max(1 + (1 - C) h, 0.01) + expansion_count.
std::pair<double, double> thompson_parameters(double h, int expansion_count, double C);

// Draws Beta(alpha, beta) per node and returns the index of the largest draw.
// Throws NoEligibleNode for an empty list.
std::size_t thompson_select(const std::vector<const RefinementNode*>& eligible, double C, Rng& rng);

// Writes prompts, responses, candidates and reports of one run.
class RunRecorder {
 public:
  explicit RunRecorder(std::filesystem::path dir);
  void record_call(int index, const std::string& prompt, const std::string& response);
  void record_candidate(const RefinementNode& node);
  void write_text(const std::string& relative, const std::string& text);
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

// Loads and scores a candidate. A candidate that fails to load fails every
// test with the load error.
RefinementNode evaluate_candidate(const SynthesisTask& task, const CandidateLoader& loader, std::string source,
                                  std::uint64_t test_seed = 0);

struct RefinementResult {
  RefinementNode best;
  std::vector<RefinementNode> tree;    // creation order (conversation: every candidate)
  std::vector<double> accuracy_trace;  // best h after each LLM call
  int llm_calls = 0;
  int wasted_calls = 0;         // responses without any code block
  bool budget_exhausted = false;
  std::optional<std::string> stopped_by_error;  // LLM failure that ended the run
  bool solved() const { return best.h >= 1.0; }
  std::string render_trace() const;  // "call<TAB>best_h" rows
  Value tree_manifest() const;
};

// Tree search (fresh prompt per call). The first call generates roots; each
// further call refines a Thompson-selected eligible node (roots with
// h >= min_heuristic_value_on_init, children that beat their parent by
// min_heuristic_value_gain) or, with none eligible, generates fresh roots.
// Stops when a node reaches h = 1 or after max(num_retries, 1) calls. Returns
// the max-h node, ties to the earliest.
RefinementResult refine_tree_search(const SynthesisTask& task, llm::LlmClient& client, const CandidateLoader& loader,
                                    const SearchBudget& budget, std::uint64_t seed,
                                    RunRecorder* recorder = nullptr);

// Chat mode: a single running conversation; each turn appends the trace of
// one failing test of the newest candidate. Returns the best candidate, ties
// to the most recent.
RefinementResult refine_conversation(const SynthesisTask& task, llm::LlmClient& client,
                                     const CandidateLoader& loader, const SearchBudget& budget,
                                     RunRecorder* recorder = nullptr);

// Sum over chance and other-player decisions of log(1 / |legal actions|)
// while replaying `history` from `initial`; `player` actions contribute 0.
// Throws IllegalHistory when an action is not legal.
double likelihood_lower_bound(const WorldModel& model, const GameState& initial, const std::vector<Action>& history,
                              PlayerId player);

struct ValueSynthesisConfig {
  int count = 3;                 // one-shot candidates to request
  int matches_per_pair = 50;     // tournament matches per ordered pair
  planners::SearchConfig search;
  int validation_states = 20;    // sampled states for the type/terminal checks
  std::string model_name;
  double temperature = 1.0;
};

struct ValueSynthesisResult {
  std::optional<std::string> best_source;  // none: play with rollouts
  std::vector<std::string> candidates;
  std::vector<std::string> rejected_reasons;  // parallel to candidates; empty = valid
  arena::TournamentReport tournament;
  int llm_calls = 0;
};

// Requests `count` value functions one-shot, rejects those that are not
// floats or disagree with the rewards at terminal states, then ranks the
// survivors and a no-value-function baseline in a round robin of search
// agents on the synthesized model. Returns none when the baseline wins or
// nothing is valid.
ValueSynthesisResult synthesize_value_function(const SynthesisTask& task, llm::LlmClient& client,
                                               const CandidateLoader& loader, const std::string& model_source,
                                               const games::GameBundle& bundle, const ValueSynthesisConfig& config,
                                               std::uint64_t seed, RunRecorder* recorder = nullptr);

}  // namespace cwm::synthesis

#endif  // CWM_SYNTHESIS_REFINEMENT_HPP_
