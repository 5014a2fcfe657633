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

#include "cwm/synthesis/candidates.hpp"

#include <cstdio>
#include <set>
#include <sstream>

#include "cwm/core/hash.hpp"

namespace cwm::synthesis {
namespace {

struct Directives {
  std::string model;
  std::set<std::string> defects;
  bool swap_players = false;
  bool rename_actions = false;
  std::string inference;
  std::string value;
};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

Directives parse_directives(const std::string& source) {
  Directives d;
  std::istringstream in(source);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.rfind("#", 0) != 0) continue;
    line = trim(line.substr(1));
    auto colon = line.find(':');
    const std::string key = trim(line.substr(0, colon));
    const std::string value = colon == std::string::npos ? std::string() : trim(line.substr(colon + 1));
    if (key == "builtin-model") {
      d.model = value;
    } else if (key == "defect-states") {
      std::istringstream list(value);
      std::string fp;
      while (std::getline(list, fp, ',')) {
        if (!trim(fp).empty()) d.defects.insert(trim(fp));
      }
    } else if (key == "swap-players") {
      d.swap_players = true;
    } else if (key == "rename-actions") {
      d.rename_actions = true;
    } else if (key == "inference") {
      d.inference = value;
    } else if (key == "builtin-value") {
      d.value = value;
    }
  }
  return d;
}

constexpr const char kBadPrefix[] = "bad-";

// A built-in engine with injected defects.
class MutatedModel : public WorldModel {
 public:
  MutatedModel(std::shared_ptr<const WorldModel> inner, Directives d) : inner_(std::move(inner)), d_(std::move(d)) {}

  int num_players() const override { return inner_->num_players(); }
  GameState initial_state() const override { return inner_->initial_state(); }
  GameState state_from_value(const Value& value) const override { return inner_->state_from_value(value); }

  GameState apply_action(const GameState& state, const Action& action) const override {
    check(state, "apply_action");
    Action a = action;
    if (d_.rename_actions && inner_->get_current_player(state) >= 0) {
      if (a.rfind(kBadPrefix, 0) != 0) throw IllegalAction("illegal action: " + action);
      a = a.substr(sizeof(kBadPrefix) - 1);
    }
    return inner_->apply_action(state, a);
  }
  PlayerId get_current_player(const GameState& state) const override {
    check(state, "get_current_player");
    const PlayerId p = inner_->get_current_player(state);
    return d_.swap_players && p >= 0 ? 1 - p : p;
  }
  std::vector<double> get_rewards(const GameState& state) const override {
    check(state, "get_rewards");
    return inner_->get_rewards(state);
  }
  std::vector<Action> get_legal_actions(const GameState& state) const override {
    check(state, "get_legal_actions");
    auto actions = inner_->get_legal_actions(state);
    if (d_.rename_actions && inner_->get_current_player(state) >= 0) {
      for (auto& a : actions) a = kBadPrefix + a;
    }
    return actions;
  }
  std::vector<Value> get_observations(const GameState& state) const override {
    check(state, "get_observations");
    return inner_->get_observations(state);
  }

 private:
  void check(const GameState& state, const char* fn) const {
    if (d_.defects.empty()) return;
    const std::string fp = state_fingerprint(state);
    if (d_.defects.count(fp) != 0) {
      throw ModelFault(std::string("KeyError: injected defect in ") + fn + " at state " + fp,
                       std::string("Traceback (most recent call last):\n  File \"candidate.py\", in ") + fn +
                           "\nKeyError: '" + fp + "'");
    }
  }

  std::shared_ptr<const WorldModel> inner_;
  Directives d_;
};

class BuiltinValue : public ValueFunction {
 public:
  BuiltinValue(std::shared_ptr<const WorldModel> model, std::string kind) : model_(std::move(model)), kind_(std::move(kind)) {
    if (kind_ == "exact") exact_ = std::make_shared<ExactValueFunction>(model_);
    if (kind_.rfind("constant:", 0) == 0) constant_ = std::stod(kind_.substr(9));
  }
  double value(const GameState& state, PlayerId player) const override {
    if (kind_ == "not-float") throw ModelFault("TypeError: value_function returned a str, expected float");
    const bool terminal = model_->get_current_player(state) == kTerminalPlayer;
    if (kind_ == "wrong-terminal") return terminal ? 0.5 : 0.0;
    if (terminal) return model_->get_rewards(state).at(static_cast<std::size_t>(player));
    if (exact_) return exact_->value(state, player);
    return constant_;
  }

 private:
  std::shared_ptr<const WorldModel> model_;
  std::string kind_;
  std::shared_ptr<ExactValueFunction> exact_;
  double constant_ = 0.0;
};

bool known_value_kind(const std::string& kind) {
  return kind == "zero" || kind == "exact" || kind == "wrong-terminal" || kind == "not-float" ||
         kind.rfind("constant:", 0) == 0;
}

}  // namespace

std::string state_fingerprint(const GameState& state) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(state.canonical())));
  return buf;
}

std::string builtin_source(const std::string& game, const std::vector<std::string>& extra_directives) {
  std::string out = "# builtin-model: " + game + "\n";
  for (const auto& d : extra_directives) out += "# " + d + "\n";
  return out;
}

WorldModelHandle BuiltinCandidateLoader::load(const std::string& source) const {
  const Directives d = parse_directives(source);
  if (d.model.empty()) {
    throw ModelFault("SyntaxError: candidate does not define the game functions",
                     "Traceback (most recent call last):\n  File \"candidate.py\", line 1\nSyntaxError: invalid syntax");
  }
  games::GameBundle bundle;
  try {
    bundle = games::make_game(d.model);
  } catch (const UnknownGame& e) {
    throw ModelFault(std::string("NameError: ") + e.what());
  }
  WorldModelHandle handle;
  const bool mutated = !d.defects.empty() || d.swap_players || d.rename_actions;
  handle.model = mutated ? std::make_shared<MutatedModel>(bundle.model.model, d) : bundle.model.model;
  if (!bundle.perfect_information() && d.inference != "none") handle.history_sampler = bundle.model.history_sampler;
  if (!d.value.empty()) {
    if (!known_value_kind(d.value)) throw ModelFault("NameError: unknown value function '" + d.value + "'");
    handle.value_function = std::make_shared<BuiltinValue>(handle.model, d.value);
  }
  return handle;
}

WorldModelHandle BuiltinCandidateLoader::load_value_function(const std::string& model_source,
                                                             const std::string& value_source) const {
  WorldModelHandle handle = load(model_source);
  const Directives d = parse_directives(value_source);
  if (!known_value_kind(d.value)) {
    throw ModelFault("SyntaxError: candidate does not define value_function",
                     "Traceback (most recent call last):\n  File \"value.py\", line 1\nSyntaxError: invalid syntax");
  }
  handle.value_function = std::make_shared<BuiltinValue>(handle.model, d.value);
  return handle;
}

HostCandidateLoader::HostCandidateLoader(host::HostConfig config, int num_players, Value initial_state)
    : config_(std::move(config)), num_players_(num_players), initial_state_(std::move(initial_state)) {}

WorldModelHandle HostCandidateLoader::load(const std::string& source) const {
  return host::load_remote_candidate(config_, source, num_players_, initial_state_);
}

WorldModelHandle HostCandidateLoader::load_value_function(const std::string& model_source,
                                                          const std::string& value_source) const {
  WorldModelHandle handle = load(model_source + "\n\n" + value_source);
  if (!handle.value_function) throw ModelFault("NameError: name 'value_function' is not defined");
  return handle;
}

std::vector<double> ExactValueFunction::solve(const GameState& state) const {
  const std::string key = state.canonical();
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  const PlayerId p = model_->get_current_player(state);
  std::vector<double> best;
  if (p == kTerminalPlayer) {
    best = model_->get_rewards(state);
  } else if (p == kChancePlayer) {
    const auto actions = model_->get_legal_actions(state);
    for (const auto& a : actions) {
      const auto v = solve(model_->apply_action(state, a));
      if (best.empty()) best.assign(v.size(), 0.0);
      for (std::size_t i = 0; i < v.size(); ++i) best[i] += v[i] / static_cast<double>(actions.size());
    }
  } else {
    for (const auto& a : model_->get_legal_actions(state)) {
      auto v = solve(model_->apply_action(state, a));
      if (best.empty() || v[static_cast<std::size_t>(p)] > best[static_cast<std::size_t>(p)]) best = std::move(v);
    }
  }
  std::lock_guard<std::mutex> lock(mutex_);
  memo_.emplace(key, best);
  return best;
}

double ExactValueFunction::value(const GameState& state, PlayerId player) const {
  return solve(state).at(static_cast<std::size_t>(player));
}

}  // namespace cwm::synthesis
