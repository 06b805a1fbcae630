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

#ifndef IMPULSE_SYSTEM_H
#define IMPULSE_SYSTEM_H

#include <span>
#include <vector>

#include "impulse/distribution.hpp"
#include "impulse/maps.hpp"

namespace impulse {

/// The dynamical system x -> f(x) interrupted by the impulse map g at random
/// times. The map selected by countdown state k is f_0 = g and f_k = f for
/// every k >= 1.
class ImpulseSystem {
 public:
  ImpulseSystem(IntervalMap f, IntervalMap g, ImpulseTimeDistribution times);

  const IntervalMap& f() const { return f_; }
  const IntervalMap& g() const { return g_; }
  const ImpulseTimeDistribution& times() const { return times_; }
  const IntervalDomain& domain() const { return f_.domain(); }

  const IntervalMap& map_for(State k) const { return k == 0 ? g_ : f_; }

  /// f_{xi_0} o f_{xi_1} o ... o f_{xi_{n-1}} (j): the last symbol acts first.
  Interval compose_image(std::span<const State> symbols, Interval j) const;
  /// f_{a_l} o ... o f_{a_1} (j): symbols listed in the order they act.
  Interval apply_image(std::span<const State> applied, Interval j) const;

 private:
  IntervalMap f_;
  IntervalMap g_;
  ImpulseTimeDistribution times_;
};

}  // namespace impulse

#endif  // IMPULSE_SYSTEM_H
