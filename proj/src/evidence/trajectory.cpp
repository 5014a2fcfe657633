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

#include "cwm/evidence/trajectory.hpp"

#include <fstream>
#include <sstream>

#include "cwm/core/errors.hpp"

namespace cwm::evidence {
namespace {

Value rewards_value(const std::vector<double>& rewards) {
  Value out = Value::array();
  for (double r : rewards) out.push_back(r);
  return out;
}

Value observations_value(const std::vector<Value>& obs) {
  Value out = Value::array();
  for (const auto& o : obs) out.push_back(o);
  return out;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

Policy uniform_random_policy() {
  return [](const WorldModel& model, const GameState& state, PlayerId, const ObsActionHistory&, Rng& rng) {
    const auto legal = model.get_legal_actions(state);
    return legal[rng.uniform_index(legal.size())];
  };
}

Trajectory play_trajectory(const games::GameBundle& bundle, const std::vector<Policy>& seats, std::uint64_t seed) {
  const WorldModel& model = *bundle.model.model;
  Trajectory traj;
  traj.game = bundle.name;
  traj.seed = seed;
  traj.num_players = model.num_players();
  Rng chance_rng(derive_seed(seed, "chance"));
  std::vector<Rng> seat_rngs;
  for (int p = 0; p < traj.num_players; ++p) seat_rngs.emplace_back(derive_seed(seed, static_cast<std::uint64_t>(p)));
  std::vector<ObsActionHistory> histories(static_cast<std::size_t>(traj.num_players));

  GameState state = bundle.initial_state;
  for (int step = 0;; ++step) {
    const PlayerId current = model.get_current_player(state);
    if (current == kTerminalPlayer) break;
    if (step >= kMaxGameLength) {
      traj.truncated = true;
      break;
    }
    TransitionRecord rec;
    rec.step_index = step;
    rec.state = state;
    rec.current_player = current;
    rec.rewards = model.get_rewards(state);
    rec.observations = model.get_observations(state);
    rec.legal_actions = model.get_legal_actions(state);
    if (current == kChancePlayer) {
      rec.action_taken = rec.legal_actions[chance_rng.uniform_index(rec.legal_actions.size())];
    } else {
      auto& h = histories[static_cast<std::size_t>(current)];
      h.push_back({rec.observations[static_cast<std::size_t>(current)], std::nullopt});
      rec.action_taken = seats[static_cast<std::size_t>(current)](model, state, current, h,
                                                                  seat_rngs[static_cast<std::size_t>(current)]);
      h.back().action = rec.action_taken;
    }
    state = model.apply_action(state, rec.action_taken);
    traj.records.push_back(std::move(rec));
  }
  traj.terminal_state = state;
  traj.terminal_rewards = traj.truncated ? std::vector<double>(static_cast<std::size_t>(traj.num_players), 0.0)
                                         : model.get_rewards(state);
  traj.terminal_observations = model.get_observations(state);
  return traj;
}

std::vector<Trajectory> generate_trajectories(const games::GameBundle& bundle, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("trajectory count must be at least 1");
  std::vector<Policy> seats(static_cast<std::size_t>(bundle.metadata.num_players), uniform_random_policy());
  std::vector<Trajectory> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out.push_back(play_trajectory(bundle, seats, derive_seed(seed, static_cast<std::uint64_t>(i))));
  }
  return out;
}

std::size_t decision_count(const Trajectory& traj, PlayerId player) {
  std::size_t n = 0;
  for (const auto& r : traj.records) n += r.current_player == player ? 1 : 0;
  return n;
}

ObsActionHistory evidence_prefix(const Trajectory& traj, PlayerId player, std::size_t decision) {
  ObsActionHistory h;
  const auto p = static_cast<std::size_t>(player);
  for (const auto& r : traj.records) {
    if (r.current_player != player) continue;
    if (h.size() == decision) {
      h.push_back({r.observations[p], std::nullopt});
      return h;
    }
    h.push_back({r.observations[p], r.action_taken});
  }
  throw std::out_of_range("player has fewer decision points than requested");
}

ClosedDeckEvidence project_closed_deck(const Trajectory& traj, PlayerId player) {
  ClosedDeckEvidence ev;
  ev.game = traj.game;
  ev.player_id = player;
  const auto p = static_cast<std::size_t>(player);
  for (const auto& r : traj.records) {
    if (r.current_player == player) ev.history.push_back({r.observations[p], r.action_taken});
  }
  ev.history.push_back({traj.terminal_observations[p], std::nullopt});
  ev.last_is_terminal = !traj.truncated;
  return ev;
}

std::string serialize_trajectory(const Trajectory& traj) {
  std::string out;
  canonical_serialize(Value{{"deck_mode", "open"},
                            {"game", traj.game},
                            {"num_players", traj.num_players},
                            {"seed", traj.seed},
                            {"truncated", traj.truncated}},
                      out);
  out += '\n';
  for (const auto& r : traj.records) {
    canonical_serialize(Value{{"step", r.step_index},
                              {"state", r.state.to_value()},
                              {"current_player", r.current_player},
                              {"rewards", rewards_value(r.rewards)},
                              {"observations", observations_value(r.observations)},
                              {"legal_actions", r.legal_actions},
                              {"action", r.action_taken}},
                        out);
    out += '\n';
  }
  canonical_serialize(Value{{"terminal", true},
                            {"state", traj.terminal_state.to_value()},
                            {"rewards", rewards_value(traj.terminal_rewards)},
                            {"observations", observations_value(traj.terminal_observations)}},
                      out);
  out += '\n';
  return out;
}

Trajectory parse_trajectory(const std::string& text, const WorldModel& model) {
  const auto lines = split_lines(text);
  if (lines.size() < 2) throw ParseError("trajectory file needs a header and a terminal line");
  try {
    const Value header = parse_value(lines.front());
    if (header.at("deck_mode") != "open") throw ParseError("not an open-deck trajectory file");
    Trajectory traj;
    traj.game = header.at("game").get<std::string>();
    traj.seed = header.at("seed").get<std::uint64_t>();
    traj.num_players = header.at("num_players").get<int>();
    traj.truncated = header.value("truncated", false);
    for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
      const Value v = parse_value(lines[i]);
      TransitionRecord r;
      r.step_index = v.at("step").get<int>();
      r.state = model.state_from_value(v.at("state"));
      r.current_player = v.at("current_player").get<int>();
      r.rewards = v.at("rewards").get<std::vector<double>>();
      r.observations = v.at("observations").get<std::vector<Value>>();
      r.legal_actions = v.at("legal_actions").get<std::vector<std::string>>();
      r.action_taken = v.at("action").get<std::string>();
      traj.records.push_back(std::move(r));
    }
    const Value last = parse_value(lines.back());
    if (!last.value("terminal", false)) throw ParseError("trajectory file lacks its terminal line");
    traj.terminal_state = model.state_from_value(last.at("state"));
    traj.terminal_rewards = last.at("rewards").get<std::vector<double>>();
    traj.terminal_observations = last.at("observations").get<std::vector<Value>>();
    return traj;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed trajectory file: ") + e.what());
  }
}

std::string serialize_closed_deck(const ClosedDeckEvidence& ev, std::uint64_t seed) {
  std::string out;
  canonical_serialize(Value{{"deck_mode", "closed"},
                            {"game", ev.game},
                            {"last_is_terminal", ev.last_is_terminal},
                            {"num_players", 2},
                            {"player_id", ev.player_id},
                            {"seed", seed}},
                      out);
  out += '\n';
  for (const auto& e : ev.history) {
    canonical_serialize(Value{{"observation", e.observation}, {"action", e.action ? Value(*e.action) : Value()}}, out);
    out += '\n';
  }
  return out;
}

ClosedDeckEvidence parse_closed_deck(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("empty closed-deck file");
  try {
    const Value header = parse_value(lines.front());
    if (header.at("deck_mode") != "closed") throw ParseError("not a closed-deck evidence file");
    ClosedDeckEvidence ev;
    ev.game = header.at("game").get<std::string>();
    ev.player_id = header.at("player_id").get<int>();
    ev.last_is_terminal = header.at("last_is_terminal").get<bool>();
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const Value v = parse_value(lines[i]);
      ObsActionEntry e{v.at("observation"), std::nullopt};
      if (!v.at("action").is_null()) e.action = v.at("action").get<std::string>();
      ev.history.push_back(std::move(e));
    }
    return ev;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed closed-deck file: ") + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cwm::evidence
