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

#ifndef CWM_SYNTHESIS_PROMPTS_HPP_
#define CWM_SYNTHESIS_PROMPTS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "cwm/core/errors.hpp"
#include "cwm/evidence/unit_tests.hpp"

namespace cwm::synthesis {

class NoCodeBlock : public Error {
 public:
  using Error::Error;
};

enum class SynthesisTarget {
  kCwm,                    // the six functions
  kCwmHistoryInference,    // plus resample_history
  kCwmStateInference,      // plus resample_state
  kClosedDeckAutoencoder,  // resample_history with last_is_terminal
  kValueFunction,
};

std::string to_string(SynthesisTarget t);

struct SynthesisTask {
  std::string game_name;
  std::string game_description;
  SynthesisTarget target = SynthesisTarget::kCwm;
  int num_players = 2;
  Value initial_state;
  // The training suite; refinement heuristics are pass rates over it.
  std::vector<evidence::UnitTest> tests;
};

// Function-signature block for a target.
std::string function_signature(SynthesisTarget target);

// A test shown in a prompt, with the failure of the code being refined.
struct PromptTest {
  const evidence::UnitTest* test = nullptr;
  std::optional<evidence::TestFailure> failure;
};

// Chooses prompt tests. Without a report (first call) the first `per_kind`
// tests of each kind; with a report, `per_kind` failing tests of each kind,
// starting at offset `rotation` in that kind's failure list.
std::vector<PromptTest> select_prompt_tests(const std::vector<evidence::UnitTest>& tests,
                                            const evidence::AccuracyReport* report, int per_kind,
                                            std::size_t rotation = 0);

// Renders tests as unit-test code; failing tests are preceded by their
// fault text and the last lines of their output as comments.
std::string render_test_code(const SynthesisTask& task, const std::vector<PromptTest>& tests);

// Fills the synthesis template. `original_code` adds the refinement block.
std::string assemble_prompt(const SynthesisTask& task, const std::optional<std::string>& original_code,
                            const std::vector<PromptTest>& tests, int num_targets);

// Value-function prompt: the model source, type tests and terminal tests.
std::string assemble_value_prompt(const SynthesisTask& task, const std::string& model_code,
                                  const std::vector<Value>& player_test_states,
                                  const std::vector<Value>& terminal_test_states);

// All complete fenced code blocks in order. An opening fence is a line of
// three backquotes followed by an optional language tag; the block ends at
// the next line that is exactly three backquotes. Unterminated blocks are
// dropped. Throws NoCodeBlock when nothing is found.
std::vector<std::string> extract_candidates(const std::string& response, int expected);

}  // namespace cwm::synthesis

#endif  // CWM_SYNTHESIS_PROMPTS_HPP_
