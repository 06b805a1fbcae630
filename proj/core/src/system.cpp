// Copyright 2026 The impulse authors.
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

#include "impulse/system.hpp"

namespace impulse {

ImpulseSystem::ImpulseSystem(IntervalMap f, IntervalMap g, ImpulseTimeDistribution times)
    : f_(std::move(f)), g_(std::move(g)), times_(std::move(times)) {
  if (!(f_.domain() == g_.domain())) throw InvalidArgument("f and g must share the domain");
}

Interval ImpulseSystem::compose_image(std::span<const State> symbols, Interval j) const {
  for (auto it = symbols.rbegin(); it != symbols.rend(); ++it) j = image(map_for(*it), j);
  return j;
}

Interval ImpulseSystem::apply_image(std::span<const State> applied, Interval j) const {
  for (State s : applied) j = image(map_for(s), j);
  return j;
}

}  // namespace impulse
