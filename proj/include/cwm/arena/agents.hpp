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

#ifndef CWM_ARENA_AGENTS_HPP_
#define CWM_ARENA_AGENTS_HPP_

#include <atomic>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cwm/core/world_model.hpp"
#include "cwm/llm/client.hpp"
#include "cwm/planners/search.hpp"

namespace cwm::arena {

// What the referee shows an agent at one of its decision points.
struct AgentView {
  PlayerId player = 0;
  // The agent's own observation-action history; the last entry holds the
  // current observation with no action.
  const ObsActionHistory* history = nullptr;
  // Legal actions according to the referee.
  const std::vector<Action>* legal_actions = nullptr;
  // The full state, shown only in perfect-information games.
  std::optional<Value> full_state;
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string name() const = 0;
  // May throw; the referee treats any exception as a forfeit.
  virtual Action act(const AgentView& view, Rng& rng) = 0;
  virtual bool thread_safe() const { return true; }
};

class RandomAgent : public Agent {
 public:
  explicit RandomAgent(std::string name = "random") : name_(std::move(name)) {}
  std::string name() const override { return name_; }
  Action act(const AgentView& view, Rng& rng) override;

 private:
  std::string name_;
};

// UCT on the agent's own world model from the state shown by the referee.
class MctsAgent : public Agent {
 public:
  MctsAgent(std::string name, WorldModelHandle model, planners::SearchConfig config);
  std::string name() const override { return name_; }
  Action act(const AgentView& view, Rng& rng) override;
  bool thread_safe() const override { return model_.model->thread_safe(); }

 private:
  std::string name_;
  WorldModelHandle model_;
  planners::SearchConfig config_;
};

// ISMCTS on the agent's own world model with the given belief. When search
// fails (for example a model fault deep in the tree) the agent falls back to
// a uniformly random legal action of a resampled state.
class IsmctsAgent : public Agent {
 public:
  IsmctsAgent(std::string name, WorldModelHandle model, std::shared_ptr<const planners::BeliefSampler> belief,
              planners::SearchConfig config);
  std::string name() const override { return name_; }
  Action act(const AgentView& view, Rng& rng) override;
  bool thread_safe() const override { return model_.model->thread_safe(); }
  int fallbacks() const { return fallbacks_.load(); }

 private:
  std::string name_;
  WorldModelHandle model_;
  std::shared_ptr<const planners::BeliefSampler> belief_;
  planners::SearchConfig config_;
  std::atomic<int> fallbacks_{0};
};

// Builds the agent the CLI calls "gt-mcts"/"cwm-ismcts": MCTS for perfect
// information games, ISMCTS with the handle's history sampler otherwise.
std::shared_ptr<Agent> make_search_agent(std::string name, const WorldModelHandle& model, bool perfect_information,
                                         const planners::SearchConfig& config);

// Asks a completion service for a move. The reply must be exactly one legal
// action (surrounding whitespace and backquotes are stripped); anything else
// is returned verbatim and forfeits at the referee.
class LlmPolicyAgent : public Agent {
 public:
  LlmPolicyAgent(std::string name, std::shared_ptr<llm::LlmClient> client, std::string game_name,
                 std::string rules, std::string model_name = {});
  std::string name() const override { return name_; }
  Action act(const AgentView& view, Rng& rng) override;
  bool thread_safe() const override { return false; }

  std::string build_prompt(const AgentView& view) const;

 private:
  std::string name_;
  std::shared_ptr<llm::LlmClient> client_;
  std::string game_name_;
  std::string rules_;
  std::string model_name_;
};

// Plays a fixed list of actions, then repeats the last one.
class ScriptedAgent : public Agent {
 public:
  ScriptedAgent(std::string name, std::vector<Action> script) : name_(std::move(name)), script_(std::move(script)) {}
  std::string name() const override { return name_; }
  Action act(const AgentView& view, Rng& rng) override;
  bool thread_safe() const override { return false; }

 private:
  std::string name_;
  std::vector<Action> script_;
  std::size_t next_ = 0;
};

// Always answers with an action that is never legal.
class InvalidAgent : public Agent {
 public:
  explicit InvalidAgent(std::string name = "invalid") : name_(std::move(name)) {}
  std::string name() const override { return name_; }
  Action act(const AgentView&, Rng&) override { return "INVALID"; }

 private:
  std::string name_;
};

}  // namespace cwm::arena

#endif  // CWM_ARENA_AGENTS_HPP_
