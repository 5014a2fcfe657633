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

#include "cwm/synthesis/prompts.hpp"

#include <map>
#include <sstream>

namespace cwm::synthesis {
namespace {

constexpr const char* kCoreSignature = R"(Action: str
State: dict[str, Any]
PlayerObservation: dict[str, Any]

def apply_action(state: State, action: Action) -> State:
  """Returns the new state after an action has been taken."""

def get_current_player(state: State) -> int:
  """Returns current player, with -1 for chance and -4 for terminal."""

def get_player_name(player_id: int) -> str:
  """Returns the name of the player, with 'chance' for -1, and 'terminal' for -4."""

def get_rewards(state: State) -> list[float]:
  """Returns the rewards per player from their last action."""

def get_legal_actions(state: State) -> list[Action]:
  """Returns legal actions that can be taken in current state."""

def get_observations(state: State) -> list[PlayerObservation]:
  """Returns the observation for player."""
)";

constexpr const char* kHistorySignature = R"(
def resample_history(obs_action_history: list[tuple[PlayerObservation, Action | None]], player_id: int) -> list[Action]:
  """Stochastically sample one of many potential history of actions for all players(including 'chance' and 'terminal')

  This is given only a single player's observations and actions, and needs to recreate the player_id's observations
  """
)";

constexpr const char* kStateSignature = R"(
def resample_state(obs_action_history: list[tuple[PlayerObservation, Action | None]], player_id: int) -> State:
  """Stochastically sample one of the reachable states for player given the observation and action history that recreates the player's observation."""
)";

constexpr const char* kClosedDeckSignature = R"(
def resample_history(obs_action_history: list[tuple[PlayerObservation, Action | None]], player_id: int, last_is_terminal: bool) -> list[Action]:
  """Stochastically sample one of many potential histories of actions for all players(including 'chance' and 'terminal')
  given only a single player's observations and actions.

  It needs to recreate the player_id's observations.
  last_is_terminal indicates if the last player observation is from end of game when player_id is -4."""
)";

constexpr const char* kValueSignature = R"(def value_function(state: dict[str, Any], player_id: int) -> float:
  """Returns the value estimate for player_id in state.

  For terminal states the function returns the true return. For ongoing play
  the function should return a value estimate that reflect the winning potential
  of the player with given player_id.
  """
)";

std::string comment_block(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string out;
  while (std::getline(in, line)) out += "# " + line + "\n";
  return out;
}

std::string rtrim(std::string s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
  return s;
}

}  // namespace

std::string to_string(SynthesisTarget t) {
  switch (t) {
    case SynthesisTarget::kCwm: return "cwm";
    case SynthesisTarget::kCwmHistoryInference: return "cwm+history-inference";
    case SynthesisTarget::kCwmStateInference: return "cwm+state-inference";
    case SynthesisTarget::kClosedDeckAutoencoder: return "closed-deck-autoencoder";
    case SynthesisTarget::kValueFunction: return "value-function";
  }
  return "unknown";
}

std::string function_signature(SynthesisTarget target) {
  switch (target) {
    case SynthesisTarget::kCwm: return kCoreSignature;
    case SynthesisTarget::kCwmHistoryInference: return std::string(kCoreSignature) + kHistorySignature;
    case SynthesisTarget::kCwmStateInference: return std::string(kCoreSignature) + kStateSignature;
    case SynthesisTarget::kClosedDeckAutoencoder: return std::string(kCoreSignature) + kClosedDeckSignature;
    case SynthesisTarget::kValueFunction: return kValueSignature;
  }
  return {};
}

std::vector<PromptTest> select_prompt_tests(const std::vector<evidence::UnitTest>& tests,
                                            const evidence::AccuracyReport* report, int per_kind,
                                            std::size_t rotation) {
  std::vector<PromptTest> out;
  if (report == nullptr) {
    std::map<evidence::TestKind, int> taken;
    for (const auto& t : tests) {
      if (taken[t.kind] < per_kind) {
        ++taken[t.kind];
        out.push_back({&t, std::nullopt});
      }
    }
    return out;
  }
  std::map<std::string, const evidence::UnitTest*> by_id;
  for (const auto& t : tests) by_id.emplace(t.id, &t);
  std::map<evidence::TestKind, std::vector<const evidence::TestFailure*>> failures;
  for (const auto& f : report->failures) failures[f.kind].push_back(&f);
  for (const auto& [kind, list] : failures) {
    const int take = std::min<int>(per_kind, static_cast<int>(list.size()));
    for (int k = 0; k < take; ++k) {
      const auto* f = list[(rotation + static_cast<std::size_t>(k)) % list.size()];
      auto it = by_id.find(f->test_id);
      if (it != by_id.end()) out.push_back({it->second, *f});
    }
  }
  return out;
}

std::string render_test_code(const SynthesisTask& task, const std::vector<PromptTest>& tests) {
  std::string out;
  bool needs_initial = false;
  for (const auto& t : tests) {
    needs_initial = needs_initial || t.test->kind == evidence::TestKind::kInferenceHistory;
  }
  if (needs_initial) out += "INITIAL_STATE = " + python_repr(task.initial_state) + "\n\n";
  for (const auto& t : tests) {
    if (t.failure) {
      out += comment_block("TODO: this test fails with the following error:\n" + t.failure->trace);
      if (!t.failure->output.empty()) {
        std::string output;
        for (const auto& line : t.failure->output) output += line + "\n";
        out += comment_block("Last lines of output:\n" + output);
      }
    }
    out += evidence::render_python(*t.test, task.initial_state) + "\n";
  }
  return out;
}

std::string assemble_prompt(const SynthesisTask& task, const std::optional<std::string>& original_code,
                            const std::vector<PromptTest>& tests, int num_targets) {
  std::string p = "You are an expert python programmer who is building the game of " + task.game_name + ".\n";
  p += "Here is a description of the game:\n" + task.game_description + "\n\n\n";
  p += "The goal is to implement a python function with the following signature.\n";
  p += "# START FUNCTION SIGNATURE\n" + function_signature(task.target) + "# END FUNCTION SIGNATURE\n\n\n";
  if (original_code) {
    p += "The original implementation is as follow. Please try to refine the original code.\n";
    p += "# START CODE BLOCK\n" + *original_code + (original_code->empty() || original_code->back() == '\n' ? "" : "\n");
    p += "# END CODE BLOCK\n\n\n";
  }
  p += "Your code should satisfy the following unit tests.\n";
  p += "Your code should fix the TODO errors in the comments of the unit tests, if any.\n";
  p += "# START UNIT TESTS\n" + render_test_code(task, tests) + "# END UNIT TESTS\n\n\n";
  p += "Do not repeat the unit tests, only return the functions.\n"
       "Do not leave placeholders.\n\n"
       "Do not repeat the function signature.\n"
       "Do not copy the unit tests.\n\n"
       "Only produce code that is compact.\n"
       "Do write comments explaining what the code does.\n"
       "Do use helper functions to reduce code duplication.\n\n"
       "Start by reasoning about the game and the unit tests.\n"
       "Also reason about the errors and possible fixes.\n\n";
  p += "Finally, try to write " + std::to_string(num_targets) + " versions of the code.\n";
  p += "Make sure each code is in a different code blocks starting with ```python.\n";
  return p;
}

std::string assemble_value_prompt(const SynthesisTask& task, const std::string& model_code,
                                  const std::vector<Value>& player_test_states,
                                  const std::vector<Value>& terminal_test_states) {
  auto render = [](const std::vector<Value>& states, bool terminal) {
    std::string out;
    for (const auto& s : states) {
      out += "state = " + python_repr(s) + "\n";
      if (terminal) {
        out += "rewards = get_rewards(state)\n"
               "for player in range(len(rewards)):\n"
               "    self.assertEqual(rewards[player], value_function(state, player))\n";
      } else {
        out += "self.assertIsInstance(value_function(state, get_current_player(state)), float)\n";
      }
    }
    return out;
  };
  std::string p = "You are an expert python programmer.  You are playing the game " + task.game_name +
                  ", and need\nto synthesize a value function for monte carlo tree search.\n\n";
  p += task.game_description + "\n\n";
  p += "For reference, the game is implemented as follow\n\n" + model_code + "\n\n";
  p += "The function you need to write is:\n" + std::string(kValueSignature) + "\n";
  p += "It should return the reward at terminal states, and otherwise an estimate of the\n"
       "value for each non-terminal states.\n\n";
  p += "It should always be a float:\n" + render(player_test_states, false) + "\n";
  p += "Terminal states should match rewards:\n" + render(terminal_test_states, true) + "\n";
  p += "To write a good value function first reason about the game and produce a heuristic value that is "
       "informative, and do not just output zeros everywhere other than terminal states.\n"
       "Finally ONLY output the new value_function, do not output any other text, code,\n"
       "explanations or placeholders.\n"
       "The response code must be a single CODE BLOCK that uses this format:\n"
       "The opening fence: ```python\n"
       "The closing fence: ```\n";
  return p;
}

std::vector<std::string> extract_candidates(const std::string& response, int expected) {
  std::vector<std::string> blocks;
  std::istringstream in(response);
  std::string line;
  bool inside = false;
  std::string current;
  while (std::getline(in, line)) {
    const std::string t = rtrim(line);
    if (!inside) {
      std::size_t lead = t.find_first_not_of(' ');
      if (lead != std::string::npos && t.compare(lead, 3, "```") == 0) {
        const std::string tag = t.substr(lead + 3);
        bool ok = tag.find('`') == std::string::npos && tag.find(' ') == std::string::npos;
        if (ok) {
          inside = true;
          current.clear();
        }
      }
    } else if (t.find_first_not_of(' ') != std::string::npos && t.substr(t.find_first_not_of(' ')) == "```") {
      inside = false;
      if (!current.empty()) blocks.push_back(current);
    } else {
      current += line + "\n";
    }
  }
  if (blocks.empty()) {
    throw NoCodeBlock("response contains no complete fenced code block (expected " + std::to_string(expected) + ")");
  }
  return blocks;
}

}  // namespace cwm::synthesis
