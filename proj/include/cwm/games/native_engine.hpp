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

#ifndef CWM_GAMES_NATIVE_ENGINE_HPP_
#define CWM_GAMES_NATIVE_ENGINE_HPP_

#include <memory>
#include <utility>

#include "cwm/core/errors.hpp"
#include "cwm/core/world_model.hpp"

namespace cwm::games {

template <class S>
class NativeStateData final : public StateData {
 public:
  explicit NativeStateData(S s) : state(std::move(s)) {}
  Value to_value() const override { return state.to_value(); }
  S state;
};

// Base for engines with a native state type S. Derived must provide
// `S parse(const Value&) const`, throwing ModelFault on malformed input.
template <class S, class Derived>
class NativeEngine : public WorldModel {
 public:
  GameState state_from_value(const Value& value) const override {
    return wrap(derived().parse(value));
  }

  // Engines sharing a state type override this to reject foreign states.
  bool accepts(const S&) const { return true; }

 protected:
  using Data = NativeStateData<S>;

  std::shared_ptr<const Data> unwrap(const GameState& state) const {
    if (auto native = state.template as<Data>()) {
      if (derived().accepts(native->state)) return native;
    }
    if (state.empty()) throw ModelFault("empty game state");
    return std::make_shared<const Data>(derived().parse(state.to_value()));
  }

  static GameState wrap(S s) {
    return GameState(std::make_shared<const Data>(std::move(s)));
  }


 private:
  const Derived& derived() const { return static_cast<const Derived&>(*this); }
};

}  // namespace cwm::games

#endif  // CWM_GAMES_NATIVE_ENGINE_HPP_
