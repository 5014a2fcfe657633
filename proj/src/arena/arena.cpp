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

#include "cwm/arena/arena.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <thread>

namespace cwm::arena {
namespace {

using Clock = std::chrono::steady_clock;

// Marks a failure of the refereeing model (as opposed to an agent).
struct RefereeFailure {
  std::string message;
};

template <class F>
auto referee_call(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw RefereeFailure{e.what()};
  }
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

double rate(int count, int total) { return total == 0 ? 0.0 : static_cast<double>(count) / total; }

}  // namespace

MatchSetup MatchSetup::from_bundle(const games::GameBundle& bundle) {
  return {bundle.name, bundle.model.model, bundle.initial_state, bundle.metadata, bundle.forfeit_payoffs};
}

MatchSetup MatchSetup::hosted_by(const games::GameBundle& bundle, std::shared_ptr<const WorldModel> host) {
  MatchSetup setup = from_bundle(bundle);
  setup.initial_state = host->state_from_value(bundle.initial_state.to_value());
  setup.referee = std::move(host);
  return setup;
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::kWin0: return "win0";
    case Outcome::kWin1: return "win1";
    case Outcome::kDraw: return "draw";
    case Outcome::kBothLose: return "both-lose";
    case Outcome::kVoid: return "void";
  }
  return "unknown";
}

std::string to_string(ForfeitCause c) {
  switch (c) {
    case ForfeitCause::kException: return "exception";
    case ForfeitCause::kIllegalAction: return "illegal-action";
    case ForfeitCause::kTimeout: return "timeout";
  }
  return "unknown";
}

Value MatchResult::to_value() const {
  Value v{{"game", game},
          {"seats", seats},
          {"seed", seed},
          {"payoffs", payoffs},
          {"outcome", to_string(outcome)},
          {"truncated", truncated},
          {"steps", steps}};
  v["forfeit_by"] = forfeit ? Value{{"player", forfeit->player},
                                    {"cause", to_string(forfeit->cause)},
                                    {"detail", forfeit->detail}}
                            : Value();
  v["referee_fault"] = referee_fault ? Value(*referee_fault) : Value();
  return v;
}

MatchResult run_match(const MatchSetup& setup, Agent& agent0, Agent& agent1, std::uint64_t seed,
                      const MatchOptions& options) {
  const WorldModel& referee = *setup.referee;
  Agent* agents[2] = {&agent0, &agent1};
  MatchResult result;
  result.game = setup.game;
  result.seats = {agent0.name(), agent1.name()};
  result.seed = seed;
  Rng chance_rng(derive_seed(seed, "chance"));
  Rng seat_rng[2] = {Rng(derive_seed(seed, "seat0")), Rng(derive_seed(seed, "seat1"))};
  ObsActionHistory histories[2];
  GameState state = setup.initial_state;
  auto log = [&](std::string line) {
    if (options.record_log) result.log.push_back(std::move(line));
  };
  auto outcome_from = [](const std::vector<double>& p) {
    if (p.size() < 2 || p[0] == p[1]) return Outcome::kDraw;
    return p[0] > p[1] ? Outcome::kWin0 : Outcome::kWin1;
  };

  try {
    while (true) {
      const PlayerId current = referee_call([&] { return referee.get_current_player(state); });
      if (current == kTerminalPlayer) {
        result.payoffs = referee_call([&] { return referee.get_rewards(state); });
        if (static_cast<int>(result.payoffs.size()) != setup.metadata.num_players) {
          throw RefereeFailure{"terminal rewards have the wrong length"};
        }
        result.outcome = outcome_from(result.payoffs);
        break;
      }
      if (result.steps >= options.step_cap) {
        result.truncated = true;
        result.payoffs.assign(static_cast<std::size_t>(setup.metadata.num_players), 0.0);
        result.outcome = Outcome::kDraw;
        log("step cap reached");
        break;
      }
      const auto legal = referee_call([&] { return referee.get_legal_actions(state); });
      if (legal.empty()) throw RefereeFailure{"no legal actions in a non-terminal state"};
      Action action;
      if (current == kChancePlayer) {
        action = legal[chance_rng.uniform_index(legal.size())];
        log("chance: " + action);
      } else if (current == 0 || current == 1) {
        const auto obs = referee_call([&] { return referee.get_observations(state); });
        if (obs.size() <= static_cast<std::size_t>(current)) throw RefereeFailure{"missing observation"};
        auto& history = histories[current];
        history.push_back({obs[static_cast<std::size_t>(current)], std::nullopt});
        AgentView view;
        view.player = current;
        view.history = &history;
        view.legal_actions = &legal;
        if (setup.perfect_information()) view.full_state = state.to_value();
        const auto start = Clock::now();
        std::optional<Forfeit> forfeit;
        try {
          action = agents[current]->act(view, seat_rng[current]);
        } catch (const std::exception& e) {
          forfeit = Forfeit{current, ForfeitCause::kException, e.what()};
        }
        const auto elapsed = Clock::now() - start;
        if (!forfeit && elapsed > options.move_time_budget) {
          forfeit = Forfeit{current, ForfeitCause::kTimeout,
                            std::to_string(std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count()) +
                                " ms"};
        }
        if (!forfeit && std::find(legal.begin(), legal.end(), action) == legal.end()) {
          forfeit = Forfeit{current, ForfeitCause::kIllegalAction, action};
        }
        if (forfeit) {
          log("player " + std::to_string(current) + " forfeits (" + to_string(forfeit->cause) + "): " +
              forfeit->detail);
          result.payoffs = setup.forfeit_payoffs(state, current);
          result.outcome = current == 0 ? Outcome::kWin1 : Outcome::kWin0;
          result.forfeit = std::move(forfeit);
          break;
        }
        history.back().action = action;
        log("player " + std::to_string(current) + ": " + action);
      } else {
        throw RefereeFailure{"invalid current player " + std::to_string(current)};
      }
      state = referee_call([&] { return referee.apply_action(state, action); });
      ++result.steps;
    }
  } catch (const RefereeFailure& failure) {
    result.referee_fault = failure.message;
    log("referee fault: " + failure.message);
    if (options.referee_fault_policy == RefereeFaultPolicy::kVoid) {
      result.outcome = Outcome::kVoid;
      result.payoffs.clear();
    } else {
      result.outcome = Outcome::kBothLose;
      result.payoffs.resize(static_cast<std::size_t>(setup.metadata.num_players));
      for (int p = 0; p < setup.metadata.num_players; ++p) {
        result.payoffs[static_cast<std::size_t>(p)] = setup.forfeit_payoffs(state, p)[static_cast<std::size_t>(p)];
      }
    }
  }
  return result;
}

double SeatStats::win_rate() const { return rate(wins, total()); }
double SeatStats::loss_rate() const { return rate(losses, total()); }
double SeatStats::draw_rate() const { return rate(draws, total()); }

Value SeriesReport::to_value() const {
  Value seats_v = Value::array();
  for (const auto& s : seats) {
    seats_v.push_back(Value{{"agent", s.agent},
                            {"wins", s.wins},
                            {"losses", s.losses},
                            {"draws", s.draws},
                            {"forfeits", s.forfeits},
                            {"wins_by_forfeit", s.wins_by_forfeit},
                            {"win_rate", s.win_rate()},
                            {"loss_rate", s.loss_rate()},
                            {"draw_rate", s.draw_rate()},
                            {"mean_payoff", s.mean_payoff}});
  }
  return Value{{"game", game}, {"matches", matches}, {"voided", voided}, {"truncated", truncated}, {"seats", seats_v}};
}

std::string SeriesReport::render_table() const {
  std::string out = "game: " + game + "  matches: " + std::to_string(matches) + "  voided: " + std::to_string(voided) +
                    "  truncated: " + std::to_string(truncated) + "\n";
  out += pad("seat", 6) + pad("agent", 18) + pad("Win (forfeit/n)", 20) + pad("Loss", 8) + pad("Draw", 8) +
         pad("Us", 10) + "Them\n";
  for (int s = 0; s < 2; ++s) {
    const SeatStats& st = seats[s];
    out += pad("P" + std::to_string(s), 6) + pad(st.agent, 18) +
           pad(fixed(st.win_rate(), 2) + " (" + std::to_string(st.wins_by_forfeit) + "/" + std::to_string(matches) +
                   ")",
               20) +
           pad(fixed(st.loss_rate(), 2), 8) + pad(fixed(st.draw_rate(), 2), 8) + pad(fixed(st.mean_payoff, 3), 10) +
           fixed(seats[1 - s].mean_payoff, 3) + "\n";
  }
  return out;
}

SeriesReport run_series(const MatchSetup& setup, Agent& agent0, Agent& agent1, int n, std::uint64_t base_seed,
                        const MatchOptions& options, int workers) {
  SeriesReport report;
  report.game = setup.game;
  report.results.resize(static_cast<std::size_t>(std::max(n, 0)));
  const bool parallel =
      workers > 1 && agent0.thread_safe() && agent1.thread_safe() && setup.referee->thread_safe();
  if (parallel) {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        for (int i = w; i < n; i += workers) {
          report.results[static_cast<std::size_t>(i)] =
              run_match(setup, agent0, agent1, derive_seed(base_seed, static_cast<std::uint64_t>(i)), options);
        }
      });
    }
    for (auto& t : threads) t.join();
  } else {
    for (int i = 0; i < n; ++i) {
      report.results[static_cast<std::size_t>(i)] =
          run_match(setup, agent0, agent1, derive_seed(base_seed, static_cast<std::uint64_t>(i)), options);
    }
  }
  report.seats[0].agent = agent0.name();
  report.seats[1].agent = agent1.name();
  double sums[2] = {0.0, 0.0};
  for (const auto& r : report.results) {
    if (r.outcome == Outcome::kVoid) {
      ++report.voided;
      continue;
    }
    ++report.matches;
    if (r.truncated) ++report.truncated;
    for (int s = 0; s < 2; ++s) {
      SeatStats& st = report.seats[s];
      sums[s] += r.payoffs[static_cast<std::size_t>(s)];
      if (r.outcome == Outcome::kDraw) {
        ++st.draws;
      } else if (r.outcome == Outcome::kBothLose || r.outcome == (s == 0 ? Outcome::kWin1 : Outcome::kWin0)) {
        ++st.losses;
      } else {
        ++st.wins;
      }
      if (r.forfeit && r.forfeit->player == s) ++st.forfeits;
      if (r.forfeit && r.forfeit->player == 1 - s) ++st.wins_by_forfeit;
    }
  }
  for (int s = 0; s < 2; ++s) report.seats[s].mean_payoff = report.matches == 0 ? 0.0 : sums[s] / report.matches;
  return report;
}

std::string TournamentReport::render_table() const {
  std::string out = pad("rank", 6) + pad("agent", 24) + pad("mean payoff", 14) + pad("matches", 10) + "forfeits\n";
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    const auto& r = ranking[i];
    out += pad(std::to_string(i + 1), 6) + pad(r.name, 24) + pad(fixed(r.mean_payoff, 4), 14) +
           pad(std::to_string(r.matches), 10) + std::to_string(r.forfeits) + "\n";
  }
  return out;
}

TournamentReport round_robin_tournament(const std::vector<std::shared_ptr<Agent>>& agents, const MatchSetup& setup,
                                        int matches_per_pair, std::uint64_t seed, const MatchOptions& options) {
  const std::size_t n = agents.size();
  std::vector<double> sums(n, 0.0);
  std::vector<int> counts(n, 0);
  std::vector<int> forfeits(n, 0);
  TournamentReport report;
  std::uint64_t pair_index = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::uint64_t pair_seed = derive_seed(seed, pair_index++);
      for (int k = 0; k < matches_per_pair; ++k) {
        const MatchResult r =
            run_match(setup, *agents[i], *agents[j], derive_seed(pair_seed, static_cast<std::uint64_t>(k)), options);
        ++report.matches;
        if (r.outcome == Outcome::kVoid) continue;
        sums[i] += r.payoffs[0];
        sums[j] += r.payoffs[1];
        ++counts[i];
        ++counts[j];
        if (r.forfeit) ++forfeits[r.forfeit->player == 0 ? i : j];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    report.ranking.push_back({i, agents[i]->name(), counts[i] == 0 ? 0.0 : sums[i] / counts[i], counts[i],
                              forfeits[i]});
  }
  std::stable_sort(report.ranking.begin(), report.ranking.end(), [](const RankedAgent& a, const RankedAgent& b) {
    if (a.mean_payoff != b.mean_payoff) return a.mean_payoff > b.mean_payoff;
    if (a.forfeits != b.forfeits) return a.forfeits < b.forfeits;
    return a.index < b.index;
  });
  return report;
}

std::vector<std::size_t> RejectionReport::accepted() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].accepted) out.push_back(i);
  }
  return out;
}

std::string RejectionReport::render_table() const {
  std::string out = "matches: " + std::to_string(matches) + "  payoff range: [" + fixed(observed_min, 3) + ", " +
                    fixed(observed_max, 3) + "]  cutoff: " + fixed(cutoff, 4) + "\n";
  out += pad("candidate", 24) + pad("mean payoff", 14) + pad("forfeits", 10) + pad("per host", 24) + "decision\n";
  for (const auto& e : entries) {
    std::string per_host;
    for (double m : e.mean_payoff_by_host) per_host += (per_host.empty() ? "" : " ") + fixed(m, 3);
    out += pad(e.name, 24) + pad(fixed(e.mean_payoff, 4), 14) + pad(std::to_string(e.forfeits), 10) +
           pad(per_host, 24) + (e.accepted ? "accepted" : "rejected") + "\n";
  }
  return out;
}

RejectionReport seed_rejection(const std::vector<RejectionCandidate>& candidates, const games::GameBundle& bundle,
                               const RejectionConfig& config, std::uint64_t seed) {
  if (candidates.size() < 2) throw NotApplicable("seed rejection needs at least two candidates");
  const std::size_t n = candidates.size();
  const std::size_t hosts = std::min<std::size_t>(static_cast<std::size_t>(std::max(config.num_hosts, 1)), n);
  RejectionReport report;
  report.entries.resize(n);
  std::vector<double> sums(n, 0.0);
  std::vector<int> counts(n, 0);
  std::vector<std::vector<double>> host_sums(n, std::vector<double>(hosts, 0.0));
  std::vector<std::vector<int>> host_counts(n, std::vector<int>(hosts, 0));
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::uint64_t config_index = 0;
  for (std::size_t h = 0; h < hosts; ++h) {
    const MatchSetup setup = MatchSetup::hosted_by(bundle, candidates[h].host);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        const std::uint64_t config_seed = derive_seed(seed, config_index++);
        for (int r = 0; r < config.repeats; ++r) {
          const MatchResult m = run_match(setup, *candidates[a].agent, *candidates[b].agent,
                                          derive_seed(config_seed, static_cast<std::uint64_t>(r)), config.options);
          ++report.matches;
          if (m.outcome == Outcome::kVoid) continue;
          const std::size_t seat_agent[2] = {a, b};
          for (int s = 0; s < 2; ++s) {
            const double p = m.payoffs[static_cast<std::size_t>(s)];
            const std::size_t who = seat_agent[s];
            sums[who] += p;
            ++counts[who];
            host_sums[who][h] += p;
            ++host_counts[who][h];
            lo = std::min(lo, p);
            hi = std::max(hi, p);
          }
          if (m.forfeit) ++report.entries[seat_agent[m.forfeit->player]].forfeits;
        }
      }
    }
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    auto& e = report.entries[i];
    e.name = candidates[i].name;
    e.matches = counts[i];
    e.mean_payoff = counts[i] == 0 ? 0.0 : sums[i] / counts[i];
    for (std::size_t h = 0; h < hosts; ++h) {
      e.mean_payoff_by_host.push_back(host_counts[i][h] == 0 ? 0.0 : host_sums[i][h] / host_counts[i][h]);
    }
    best = std::max(best, e.mean_payoff);
  }
  if (lo > hi) lo = hi = 0.0;
  report.observed_min = lo;
  report.observed_max = hi;
  report.cutoff = best - config.threshold * (hi - lo);
  for (auto& e : report.entries) e.accepted = e.mean_payoff >= report.cutoff;
  return report;
}

}  // namespace cwm::arena
