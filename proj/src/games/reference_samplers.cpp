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

#include "cwm/games/reference_samplers.hpp"

#include <algorithm>

#include "cwm/core/errors.hpp"
#include "cwm/games/bargaining.hpp"
#include "cwm/games/hand_of_war.hpp"
#include "cwm/games/leduc_poker.hpp"

namespace cwm::games {
namespace {

const Value& latest_observation(const ObsActionHistory& history) {
  if (history.empty()) throw BeliefExhausted("empty observation-action history");
  return history.back().observation;
}

template <class T>
const T& pick(const std::vector<T>& items, Rng& rng) {
  if (items.empty()) throw BeliefExhausted("no candidate consistent with the evidence");
  return items[rng.uniform_index(items.size())];
}

}  // namespace

std::vector<Action> LeducHistorySampler::resample_history(const ObsActionHistory& history,
                                                          PlayerId player, bool, Rng& rng) const {
  const Value& obs = latest_observation(history);
  try {
    const int own = LeducPoker::card_index(obs.at("private_card").get<std::string>());
    const int pub = obs.at("public_card").is_null()
                        ? -1
                        : LeducPoker::card_index(obs.at("public_card").get<std::string>());
    if (own < 0) throw BeliefExhausted("unknown private card in evidence");
    std::vector<int> hidden;
    for (int c = 0; c < 6; ++c) {
      if (c != own && c != pub) hidden.push_back(c);
    }
    const int opp = pick(hidden, rng);
    std::array<int, 2> cards{};
    cards[static_cast<std::size_t>(player)] = own;
    cards[static_cast<std::size_t>(1 - player)] = opp;
    std::vector<Action> actions = {"deal:" + LeducPoker::card_name(cards[0]),
                                   "deal:" + LeducPoker::card_name(cards[1])};
    const auto& rounds = obs.at("history");
    for (const auto& a : rounds.at(0)) actions.push_back(a.get<std::string>());
    if (pub >= 0) {
      actions.push_back("deal:" + LeducPoker::card_name(pub));
      for (const auto& a : rounds.at(1)) actions.push_back(a.get<std::string>());
    }
    return actions;
  } catch (const nlohmann::json::exception& e) {
    throw BeliefExhausted(std::string("malformed leduc observation: ") + e.what());
  }
}

std::vector<Action> BargainingHistorySampler::resample_history(const ObsActionHistory& history,
                                                               PlayerId player, bool, Rng& rng) const {
  const Value& obs = latest_observation(history);
  try {
    auto counts = [](const Value& v) {
      return ItemCounts{v.at(0).get<int>(), v.at(1).get<int>(), v.at(2).get<int>()};
    };
    const ItemCounts pool = counts(obs.at("pool"));
    const ItemCounts own = counts(obs.at("my_values"));
    ItemCounts opp{};
    for (auto& v : opp) v = static_cast<int>(rng.uniform_index(Bargaining::kMaxValue + 1));
    std::array<ItemCounts, 2> values{};
    values[static_cast<std::size_t>(player)] = own;
    values[static_cast<std::size_t>(1 - player)] = opp;
    std::vector<Action> actions = {"pool:" + Bargaining::format_counts(pool),
                                   "p0_values:" + Bargaining::format_counts(values[0]),
                                   "p1_values:" + Bargaining::format_counts(values[1])};
    int last = -1;
    for (const auto& offer : obs.at("offers")) {
      last = offer.at("player").get<int>();
      actions.push_back("player " + std::to_string(last) + " offers " +
                        Bargaining::format_counts(counts(offer.at("quantities"))));
    }
    if (obs.at("agreed").get<bool>()) actions.push_back("player " + std::to_string(1 - last) + " agrees");
    return actions;
  } catch (const nlohmann::json::exception& e) {
    throw BeliefExhausted(std::string("malformed bargaining observation: ") + e.what());
  }
}

std::vector<Action> HandOfWarHistorySampler::resample_history(const ObsActionHistory& history,
                                                              PlayerId player, bool last_is_terminal,
                                                              Rng& rng) const {
  using Data = NativeStateData<HandOfWarState>;
  const Value& final_obs = latest_observation(history);
  const auto me = static_cast<std::size_t>(player);
  const auto opp = static_cast<std::size_t>(1 - player);
  auto card = [](const Value& v) {
    const int c = HandOfWar::card_index(v.get<std::string>());
    if (c < 0) throw BeliefExhausted("unknown card in evidence");
    return c;
  };

  std::vector<int> own_order;  // own cards in order of first appearance
  std::vector<int> opp_plays;  // cards the opponent is seen to play, in order
  CardSet reserved = 0;
  try {
    for (const auto& entry : history) {
      for (const auto& c : entry.observation.at("my_hand")) {
        const int idx = card(c);
        if (!(reserved & (1u << idx))) {
          own_order.push_back(idx);
          reserved = static_cast<CardSet>(reserved | (1u << idx));
        }
      }
    }
    for (const auto& pair : final_obs.at("revealed")) {
      const int idx = card(pair.at(static_cast<int>(opp)));
      opp_plays.push_back(idx);
      reserved = static_cast<CardSet>(reserved | (1u << idx));
    }
  } catch (const nlohmann::json::exception& e) {
    throw BeliefExhausted(std::string("malformed hand of war observation: ") + e.what());
  }

  HandOfWar engine;
  GameState state = engine.initial_state();
  std::vector<Action> actions;
  std::size_t evidence = 0;
  std::size_t own_next = 0;
  std::size_t opp_next_draw = 0;
  auto random_unreserved = [&](const HandOfWarState& s) {
    std::vector<int> free;
    for (int c = 0; c < HandOfWar::kNumCards; ++c) {
      if ((s.undealt & (1u << c)) && !(reserved & (1u << c))) free.push_back(c);
    }
    return pick(free, rng);
  };
  auto apply = [&](const Action& a) {
    actions.push_back(a);
    state = engine.apply_action(state, a);
  };

  for (int step = 0; step < 1000; ++step) {
    const HandOfWarState& s = state.as<Data>()->state;
    const PlayerId current = HandOfWar::current_player_of(s);
    if (current == kTerminalPlayer) break;
    if (current == player) {
      if (evidence >= history.size()) break;
      const auto& entry = history[evidence];
      if (!entry.action) break;
      ++evidence;
      apply(*entry.action);
      if (evidence == history.size() && !last_is_terminal) break;
      continue;
    }
    if (current != kChancePlayer) {
      const std::size_t battle = s.revealed.size();
      int c = -1;
      if (battle < opp_plays.size()) {
        c = opp_plays[battle];
      } else {
        std::vector<int> hand;
        for (int i = 0; i < HandOfWar::kNumCards; ++i) {
          if (s.hands[opp] & (1u << i)) hand.push_back(i);
        }
        c = pick(hand, rng);
      }
      apply("play:" + HandOfWar::card_name(c));
      continue;
    }
    const std::size_t owner = s.pending_burns[0] > 0 || s.pending_draws[0] > 0 ? 0 : 1;
    const bool burning = s.pending_burns[owner] > 0;
    int c = -1;
    if (burning) {
      c = random_unreserved(s);
    } else if (owner == me) {
      while (own_next < own_order.size() && !(s.undealt & (1u << own_order[own_next]))) ++own_next;
      if (own_next >= own_order.size()) throw BeliefExhausted("evidence does not explain an own draw");
      c = own_order[own_next++];
    } else {
      while (opp_next_draw < opp_plays.size() && !(s.undealt & (1u << opp_plays[opp_next_draw]))) {
        ++opp_next_draw;
      }
      c = opp_next_draw < opp_plays.size() ? opp_plays[opp_next_draw++] : random_unreserved(s);
    }
    apply(std::string(burning ? "burn:" : "draw:") + HandOfWar::card_name(c));
  }
  return actions;
}

}  // namespace cwm::games
