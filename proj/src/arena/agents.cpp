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

#include "cwm/arena/agents.hpp"

#include <algorithm>

namespace cwm::arena {
namespace {

std::string strip_reply(const std::string& text) {
  auto is_junk = [](char c) { return std::isspace(static_cast<unsigned char>(c)) || c == '`' || c == '"' || c == '\''; };
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && is_junk(text[b])) ++b;
  while (e > b && is_junk(text[e - 1])) --e;
  return text.substr(b, e - b);
}

}  // namespace

Action RandomAgent::act(const AgentView& view, Rng& rng) {
  const auto& legal = *view.legal_actions;
  if (legal.empty()) throw NoLegalActions("random agent has no legal action to choose");
  return legal[rng.uniform_index(legal.size())];
}

MctsAgent::MctsAgent(std::string name, WorldModelHandle model, planners::SearchConfig config)
    : name_(std::move(name)), model_(std::move(model)), config_(config) {}

Action MctsAgent::act(const AgentView& view, Rng& rng) {
  if (!view.full_state) throw NotApplicable("MCTS agent needs the full state (perfect-information game)");
  const GameState state = model_.model->state_from_value(*view.full_state);
  planners::SearchConfig config = config_;
  config.seed = rng.next();
  return planners::mcts_select_action(*model_.model, state, config, model_.value_function.get());
}

IsmctsAgent::IsmctsAgent(std::string name, WorldModelHandle model,
                         std::shared_ptr<const planners::BeliefSampler> belief, planners::SearchConfig config)
    : name_(std::move(name)), model_(std::move(model)), belief_(std::move(belief)), config_(config) {
  if (!belief_) throw NotApplicable("ISMCTS agent requires a belief sampler");
}

Action IsmctsAgent::act(const AgentView& view, Rng& rng) {
  planners::SearchConfig config = config_;
  config.seed = rng.next();
  try {
    return planners::ismcts_select_action(*model_.model, *belief_, *view.history, view.player, config,
                                          model_.value_function.get());
  } catch (const std::exception&) {
    fallbacks_.fetch_add(1);
    const GameState state = belief_->resample(*view.history, view.player, rng);
    const auto legal = model_.model->get_legal_actions(state);
    if (legal.empty()) throw NoLegalActions("fallback state has no legal actions");
    return legal[rng.uniform_index(legal.size())];
  }
}

std::shared_ptr<Agent> make_search_agent(std::string name, const WorldModelHandle& model, bool perfect_information,
                                         const planners::SearchConfig& config) {
  if (perfect_information) return std::make_shared<MctsAgent>(std::move(name), model, config);
  std::shared_ptr<const planners::BeliefSampler> belief;
  if (model.history_sampler) {
    belief = std::make_shared<planners::HistoryBelief>(model.model, model.history_sampler, config.max_retries);
  } else if (model.state_sampler) {
    belief = std::make_shared<planners::StateBelief>(model.model, model.state_sampler, config.max_retries);
  } else {
    throw NotApplicable("agent '" + name + "' has no inference function for an imperfect-information game");
  }
  return std::make_shared<IsmctsAgent>(std::move(name), model, std::move(belief), config);
}

LlmPolicyAgent::LlmPolicyAgent(std::string name, std::shared_ptr<llm::LlmClient> client, std::string game_name,
                               std::string rules, std::string model_name)
    : name_(std::move(name)),
      client_(std::move(client)),
      game_name_(std::move(game_name)),
      rules_(std::move(rules)),
      model_name_(std::move(model_name)) {}

std::string LlmPolicyAgent::build_prompt(const AgentView& view) const {
  std::string prompt = "You are player " + std::to_string(view.player) + " in a game of " + game_name_ + ".\n";
  prompt += "Rules of the game:\n" + rules_ + "\n\n";
  prompt += "Your observations so far, each followed by the action you took:\n";
  for (const auto& entry : *view.history) {
    prompt += "observation: " + canonical_serialize(entry.observation) + "\n";
    if (entry.action) prompt += "action: " + *entry.action + "\n";
  }
  prompt += "\nYour legal actions are:\n";
  for (const auto& a : *view.legal_actions) prompt += a + "\n";
  prompt += "\nReply with exactly one legal action and nothing else.\n";
  return prompt;
}

Action LlmPolicyAgent::act(const AgentView& view, Rng&) {
  llm::CompletionRequest request;
  request.prompt = build_prompt(view);
  request.model_name = model_name_;
  const std::string reply = client_->complete(request);
  const std::string stripped = strip_reply(reply);
  const auto& legal = *view.legal_actions;
  if (std::find(legal.begin(), legal.end(), stripped) != legal.end()) return stripped;
  return reply;
}

Action ScriptedAgent::act(const AgentView&, Rng&) {
  if (script_.empty()) throw NoLegalActions("scripted agent has an empty script");
  const Action& a = script_[std::min(next_, script_.size() - 1)];
  ++next_;
  return a;
}

}  // namespace cwm::arena
