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

#ifndef CWM_SYNTHESIS_CANDIDATES_HPP_
#define CWM_SYNTHESIS_CANDIDATES_HPP_

#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "cwm/core/world_model.hpp"
#include "cwm/games/registry.hpp"
#include "cwm/host/host.hpp"

namespace cwm::synthesis {

// Turns candidate source text into executable functions. Load failures
// (syntax errors, missing functions) raise ModelFault with a trace.
class CandidateLoader {
 public:
  virtual ~CandidateLoader() = default;
  virtual WorldModelHandle load(const std::string& source) const = 0;
  // Adds a value function written against `model_source` to the model.
  virtual WorldModelHandle load_value_function(const std::string& model_source,
                                               const std::string& value_source) const = 0;
};

// Executes candidates in an out-of-process host.
class HostCandidateLoader : public CandidateLoader {
 public:
  HostCandidateLoader(host::HostConfig config, int num_players, Value initial_state);
  WorldModelHandle load(const std::string& source) const override;
  WorldModelHandle load_value_function(const std::string& model_source,
                                       const std::string& value_source) const override;

 private:
  host::HostConfig config_;
  int num_players_;
  Value initial_state_;
};

// Candidates that name a built-in engine through comment directives, used for
// offline pipelines and tests:
//   # builtin-model: <game>        required; the engine to serve
//   # defect-states: <fp>,<fp>     states (by fingerprint) whose functions fault
//   # swap-players                 report the other player as current
//   # rename-actions               prefix every player action with "bad-"
//   # inference: reference|none    hidden-history inference (default: reference
//                                  for imperfect-information games)
// Value-function sources use
//   # builtin-value: zero | exact | constant:<x> | wrong-terminal | not-float
class BuiltinCandidateLoader : public CandidateLoader {
 public:
  WorldModelHandle load(const std::string& source) const override;
  WorldModelHandle load_value_function(const std::string& model_source,
                                       const std::string& value_source) const override;
};

// Hex digest identifying a state in defect directives.
std::string state_fingerprint(const GameState& state);

// Source text of a built-in candidate.
std::string builtin_source(const std::string& game, const std::vector<std::string>& extra_directives = {});

// Exact game-theoretic value of a small two-player perfect-information game
// (memoized full search); terminal states return the rewards.
class ExactValueFunction : public ValueFunction {
 public:
  explicit ExactValueFunction(std::shared_ptr<const WorldModel> model) : model_(std::move(model)) {}
  double value(const GameState& state, PlayerId player) const override;

 private:
  std::vector<double> solve(const GameState& state) const;
  std::shared_ptr<const WorldModel> model_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::string, std::vector<double>> memo_;
};

}  // namespace cwm::synthesis

#endif  // CWM_SYNTHESIS_CANDIDATES_HPP_
