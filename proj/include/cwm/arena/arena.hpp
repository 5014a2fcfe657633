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

#ifndef CWM_ARENA_ARENA_HPP_
#define CWM_ARENA_ARENA_HPP_

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cwm/arena/agents.hpp"
#include "cwm/games/registry.hpp"

namespace cwm::arena {

// The game a match is refereed on: the ground-truth engine or a synthesized
// model acting as host.
struct MatchSetup {
  std::string game;
  std::shared_ptr<const WorldModel> referee;
  GameState initial_state;
  games::GameMetadata metadata;
  games::ForfeitRule forfeit_payoffs;

  static MatchSetup from_bundle(const games::GameBundle& bundle);
  // The bundle's game, refereed by `host` instead of the ground truth.
  static MatchSetup hosted_by(const games::GameBundle& bundle, std::shared_ptr<const WorldModel> host);
  bool perfect_information() const { return metadata.observability == games::Observability::kPerfect; }
};

// kBothLose: a referee fault under RefereeFaultPolicy::kBothLose.
enum class Outcome { kWin0, kWin1, kDraw, kBothLose, kVoid };
enum class ForfeitCause { kException, kIllegalAction, kTimeout };
enum class RefereeFaultPolicy {
  kVoid,      // the match is discarded from aggregates
  kBothLose,  // both players receive their forfeit payoff
};

std::string to_string(Outcome o);
std::string to_string(ForfeitCause c);

struct Forfeit {
  PlayerId player = 0;
  ForfeitCause cause = ForfeitCause::kException;
  std::string detail;
};

struct MatchOptions {
  std::chrono::milliseconds move_time_budget{30000};
  int step_cap = 1000;
  RefereeFaultPolicy referee_fault_policy = RefereeFaultPolicy::kVoid;
  bool record_log = false;
};

struct MatchResult {
  std::string game;
  std::vector<std::string> seats;  // agent name per seat
  std::uint64_t seed = 0;
  std::vector<double> payoffs;
  Outcome outcome = Outcome::kDraw;
  std::optional<Forfeit> forfeit;
  std::optional<std::string> referee_fault;
  bool truncated = false;
  int steps = 0;
  std::vector<std::string> log;

  Value to_value() const;
};

// Plays one match from the initial state. Chance moves are drawn by the
// referee; each agent sees only its own observation-action history (and the
// full state in perfect-information games). An agent that throws, overruns
// its time budget (measured when its move returns) or answers with an action
// outside the legal set forfeits. Reaching the step cap is a draw.
MatchResult run_match(const MatchSetup& setup, Agent& agent0, Agent& agent1, std::uint64_t seed,
                      const MatchOptions& options = {});

struct SeatStats {
  std::string agent;
  int wins = 0;
  int losses = 0;
  int draws = 0;
  int forfeits = 0;       // matches this seat forfeited
  int wins_by_forfeit = 0;  // matches won because the opponent forfeited
  double mean_payoff = 0.0;
  int total() const { return wins + losses + draws; }
  double win_rate() const;
  double loss_rate() const;
  double draw_rate() const;
};

struct SeriesReport {
  std::string game;
  int matches = 0;  // scored matches (voided ones excluded)
  int voided = 0;
  int truncated = 0;
  SeatStats seats[2];
  std::vector<MatchResult> results;

  Value to_value() const;
  // "Win (forfeit/n) | Loss | Draw" and "Us | Them" rows per seat.
  std::string render_table() const;
};

// n seeded matches with fixed seats; match i uses derive_seed(base_seed, i).
// `workers` > 1 runs matches concurrently when both agents and the referee are
// thread-safe; the report does not depend on the worker count.
SeriesReport run_series(const MatchSetup& setup, Agent& agent0, Agent& agent1, int n, std::uint64_t base_seed,
                        const MatchOptions& options = {}, int workers = 1);

struct RankedAgent {
  std::size_t index = 0;  // registration order
  std::string name;
  double mean_payoff = 0.0;
  int matches = 0;
  int forfeits = 0;
};

struct TournamentReport {
  std::vector<RankedAgent> ranking;  // best first
  int matches = 0;
  std::string render_table() const;
};

// Every ordered pair (i, j), i != j, plays `matches_per_pair` seeded matches
// with i in seat 0. Ranked by mean payoff, then fewer forfeits, then
// registration order.
TournamentReport round_robin_tournament(const std::vector<std::shared_ptr<Agent>>& agents, const MatchSetup& setup,
                                        int matches_per_pair, std::uint64_t seed, const MatchOptions& options = {});

// One synthesized world model considered by seed rejection: it both hosts
// matches and powers an agent.
struct RejectionCandidate {
  std::string name;
  std::shared_ptr<const WorldModel> host;
  std::shared_ptr<Agent> agent;
};

struct RejectionConfig {
  int repeats = 50;
  double threshold = 0.10;
  int num_hosts = 2;  // the first num_hosts candidates host
  MatchOptions options{std::chrono::milliseconds(30000), 1000, RefereeFaultPolicy::kBothLose, false};
};

struct RejectionEntry {
  std::string name;
  double mean_payoff = 0.0;
  int matches = 0;
  int forfeits = 0;
  std::vector<double> mean_payoff_by_host;
  bool accepted = false;
};

struct RejectionReport {
  std::vector<RejectionEntry> entries;  // candidate order
  double observed_min = 0.0;
  double observed_max = 0.0;
  double cutoff = 0.0;
  int matches = 0;
  std::vector<std::size_t> accepted() const;
  std::string render_table() const;
};

// Plays every host x seat-0 agent x seat-1 agent combination `repeats` times.
// Referee faults score both players their forfeit payoff. Agents whose mean
// payoff is more than threshold * (observed max - observed min) below the
// best are rejected; the best is always kept.
RejectionReport seed_rejection(const std::vector<RejectionCandidate>& candidates, const games::GameBundle& bundle,
                               const RejectionConfig& config, std::uint64_t seed);

}  // namespace cwm::arena

#endif  // CWM_ARENA_ARENA_HPP_
