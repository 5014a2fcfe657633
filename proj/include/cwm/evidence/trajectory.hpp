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

#ifndef CWM_EVIDENCE_TRAJECTORY_HPP_
#define CWM_EVIDENCE_TRAJECTORY_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "cwm/core/world_model.hpp"
#include "cwm/games/registry.hpp"

namespace cwm::evidence {

inline constexpr int kMaxGameLength = 1000;

struct TransitionRecord {
  int step_index = 0;
  GameState state;
  PlayerId current_player = 0;
  std::vector<double> rewards;
  std::vector<Value> observations;
  std::vector<Action> legal_actions;
  Action action_taken;
};

struct Trajectory {
  std::string game;
  std::uint64_t seed = 0;
  int num_players = 2;
  std::vector<TransitionRecord> records;
  GameState terminal_state;
  std::vector<double> terminal_rewards;
  std::vector<Value> terminal_observations;
  // The game-length cap was hit; the game is scored as a draw.
  bool truncated = false;

  std::string tag() const { return game + "_" + std::to_string(seed); }
};

// Everything one player saw and did, without hidden information.
struct ClosedDeckEvidence {
  std::string game;
  PlayerId player_id = 0;
  ObsActionHistory history;
  bool last_is_terminal = false;
};

// Chooses an action for the acting player. `history` is the player's own
// observation-action history ending at the current decision point.
using Policy = std::function<Action(const WorldModel& model, const GameState& state, PlayerId player,
                                    const ObsActionHistory& history, Rng& rng)>;

Policy uniform_random_policy();

// Plays one full game with one policy per seat (chance uniform).
Trajectory play_trajectory(const games::GameBundle& bundle, const std::vector<Policy>& seats,
                           std::uint64_t seed);

// `count` independent uniform-random games; game i uses derive_seed(seed, i).
std::vector<Trajectory> generate_trajectories(const games::GameBundle& bundle, int count,
                                              std::uint64_t seed);

// The player's observation-action history up to and including its
// `decision`-th decision point (whose action is left empty).
ObsActionHistory evidence_prefix(const Trajectory& traj, PlayerId player, std::size_t decision);
std::size_t decision_count(const Trajectory& traj, PlayerId player);

// Full closed-deck projection: every decision of the player plus the
// terminal observation.
ClosedDeckEvidence project_closed_deck(const Trajectory& traj, PlayerId player);

// Trajectory files: a header line {deck_mode, game, num_players, seed}
// followed by one canonical record per line and a final terminal line.
std::string serialize_trajectory(const Trajectory& traj);
Trajectory parse_trajectory(const std::string& text, const WorldModel& model);
std::string serialize_closed_deck(const ClosedDeckEvidence& evidence, std::uint64_t seed);
ClosedDeckEvidence parse_closed_deck(const std::string& text);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace cwm::evidence

#endif  // CWM_EVIDENCE_TRAJECTORY_HPP_
