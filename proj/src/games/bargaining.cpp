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

#include "cwm/games/bargaining.hpp"

#include <charconv>

namespace cwm::games {
namespace {

Value counts_value(const std::optional<ItemCounts>& c) {
  if (!c) return Value();
  return Value::array({(*c)[0], (*c)[1], (*c)[2]});
}

std::optional<ItemCounts> read_counts(const Value& v) {
  if (v.is_null()) return std::nullopt;
  return ItemCounts{v.at(0).get<int>(), v.at(1).get<int>(), v.at(2).get<int>()};
}

Value offers_value(const std::vector<BargainingOffer>& offers) {
  Value out = Value::array();
  for (const auto& o : offers) {
    out.push_back(Value{{"player", o.player}, {"quantities", counts_value(o.keep)}});
  }
  return out;
}

double share_value(const ItemCounts& share, const ItemCounts& values) {
  double total = 0.0;
  for (int i = 0; i < 3; ++i) total += share[static_cast<std::size_t>(i)] * values[static_cast<std::size_t>(i)];
  return total;
}

// Share received by `player` if the offer is accepted.
ItemCounts share_of(const BargainingOffer& offer, const ItemCounts& pool, int player) {
  if (offer.player == player) return offer.keep;
  ItemCounts rest{};
  for (int i = 0; i < 3; ++i) {
    rest[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(i)] - offer.keep[static_cast<std::size_t>(i)];
  }
  return rest;
}

std::string offer_token(int player, const ItemCounts& keep) {
  return "player " + std::to_string(player) + " offers " + Bargaining::format_counts(keep);
}

std::string agree_token(int player) { return "player " + std::to_string(player) + " agrees"; }

}  // namespace

std::string Bargaining::format_counts(const ItemCounts& c) {
  return std::to_string(c[0]) + "," + std::to_string(c[1]) + "," + std::to_string(c[2]);
}

std::optional<ItemCounts> Bargaining::parse_counts(std::string_view text) {
  ItemCounts out{};
  for (int i = 0; i < 3; ++i) {
    auto end = i < 2 ? text.find(',') : text.size();
    if (end == std::string_view::npos) return std::nullopt;
    auto part = text.substr(0, end);
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out[static_cast<std::size_t>(i)]);
    if (ec != std::errc() || ptr != part.data() + part.size()) return std::nullopt;
    text.remove_prefix(i < 2 ? end + 1 : end);
  }
  return out;
}

Value BargainingState::to_value() const {
  return Value{
      {"pool", counts_value(pool)},
      {"values", Value::array({counts_value(values[0]), counts_value(values[1])})},
      {"offers", offers_value(offers)},
      {"agreed", agreed},
      {"current_player", current},
  };
}

BargainingState Bargaining::parse(const Value& v) const {
  try {
    BargainingState s;
    s.pool = read_counts(v.at("pool"));
    s.values = {read_counts(v.at("values").at(0)), read_counts(v.at("values").at(1))};
    for (const auto& o : v.at("offers")) {
      s.offers.push_back({o.at("player").get<int>(), *read_counts(o.at("quantities"))});
    }
    s.agreed = v.at("agreed").get<bool>();
    s.current = v.at("current_player").get<int>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ModelFault(std::string("malformed bargaining state: ") + e.what());
  }
}

GameState Bargaining::initial_state() const { return wrap(BargainingState{}); }

std::vector<Action> Bargaining::get_legal_actions(const GameState& state) const {
  auto data = unwrap(state);
  const BargainingState& s = data->state;
  std::vector<Action> actions;
  if (s.current == kTerminalPlayer) return actions;
  if (s.current == kChancePlayer) {
    std::string prefix = !s.pool ? "pool:" : (!s.values[0] ? "p0_values:" : "p1_values:");
    const int lo = !s.pool ? 1 : 0;
    const int hi = !s.pool ? kMaxQuantity : kMaxValue;
    for (int a = lo; a <= hi; ++a) {
      for (int b = lo; b <= hi; ++b) {
        for (int c = lo; c <= hi; ++c) actions.push_back(prefix + format_counts({a, b, c}));
      }
    }
    return actions;
  }
  const ItemCounts& pool = *s.pool;
  for (int a = 0; a <= pool[0]; ++a) {
    for (int b = 0; b <= pool[1]; ++b) {
      for (int c = 0; c <= pool[2]; ++c) actions.push_back(offer_token(s.current, {a, b, c}));
    }
  }
  if (!s.offers.empty() && s.offers.back().player != s.current) actions.push_back(agree_token(s.current));
  return actions;
}

GameState Bargaining::apply_action(const GameState& state, const Action& action) const {
  auto data = unwrap(state);
  const BargainingState& s = data->state;
  BargainingState n = s;
  if (s.current == kTerminalPlayer) throw IllegalAction("negotiation is over; no action applies: " + action);
  if (s.current == kChancePlayer) {
    auto colon = action.find(':');
    if (colon == std::string::npos) throw IllegalAction("illegal chance action: " + action);
    auto counts = parse_counts(std::string_view(action).substr(colon + 1));
    const std::string prefix = action.substr(0, colon);
    const std::string expected = !s.pool ? "pool" : (!s.values[0] ? "p0_values" : "p1_values");
    const int lo = !s.pool ? 1 : 0;
    const int hi = !s.pool ? kMaxQuantity : kMaxValue;
    if (!counts || prefix != expected) throw IllegalAction("illegal chance action: " + action);
    for (int x : *counts) {
      if (x < lo || x > hi) throw IllegalAction("chance outcome out of range: " + action);
    }
    if (!s.pool) {
      n.pool = counts;
    } else if (!s.values[0]) {
      n.values[0] = counts;
    } else {
      n.values[1] = counts;
      n.current = 0;
    }
    return wrap(std::move(n));
  }
  const int p = s.current;
  if (action == agree_token(p)) {
    if (s.offers.empty() || s.offers.back().player == p) throw IllegalAction("no opponent offer to agree to");
    n.agreed = true;
    n.current = kTerminalPlayer;
    return wrap(std::move(n));
  }
  const std::string prefix = "player " + std::to_string(p) + " offers ";
  if (action.rfind(prefix, 0) != 0) throw IllegalAction("illegal action: " + action);
  auto keep = parse_counts(std::string_view(action).substr(prefix.size()));
  if (!keep) throw IllegalAction("malformed offer: " + action);
  for (int i = 0; i < 3; ++i) {
    const int k = (*keep)[static_cast<std::size_t>(i)];
    if (k < 0 || k > (*s.pool)[static_cast<std::size_t>(i)]) throw IllegalAction("offer exceeds the pool: " + action);
  }
  n.offers.push_back({p, *keep});
  n.current = static_cast<int>(n.offers.size()) >= kMaxOffers ? kTerminalPlayer : 1 - p;
  return wrap(std::move(n));
}

PlayerId Bargaining::get_current_player(const GameState& state) const {
  return unwrap(state)->state.current;
}

std::vector<double> Bargaining::get_rewards(const GameState& state) const {
  auto data = unwrap(state);
  const BargainingState& s = data->state;
  if (s.current != kTerminalPlayer || !s.agreed) return {0.0, 0.0};
  const auto& offer = s.offers.back();
  std::vector<double> r(2);
  for (int p = 0; p < 2; ++p) {
    r[static_cast<std::size_t>(p)] = share_value(share_of(offer, *s.pool, p), *s.values[static_cast<std::size_t>(p)]);
  }
  return r;
}

std::vector<Value> Bargaining::get_observations(const GameState& state) const {
  auto data = unwrap(state);
  const BargainingState& s = data->state;
  std::vector<Value> obs;
  for (int p = 0; p < 2; ++p) {
    obs.push_back(Value{
        {"player", p},
        {"pool", counts_value(s.pool)},
        {"my_values", counts_value(s.values[static_cast<std::size_t>(p)])},
        {"offers", offers_value(s.offers)},
        {"agreed", s.agreed},
        {"current_player", s.current},
    });
  }
  return obs;
}

std::vector<double> Bargaining::forfeit_payoffs(const GameState& state, PlayerId forfeiter) const {
  auto data = unwrap(state);
  const BargainingState& s = data->state;
  std::vector<double> r(2, 0.0);
  const int other = 1 - forfeiter;
  if (!s.offers.empty() && s.pool && s.values[static_cast<std::size_t>(other)]) {
    r[static_cast<std::size_t>(other)] =
        share_value(share_of(s.offers.back(), *s.pool, other), *s.values[static_cast<std::size_t>(other)]);
  }
  return r;
}

}  // namespace cwm::games
