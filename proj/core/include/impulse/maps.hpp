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

#ifndef IMPULSE_MAPS_H
#define IMPULSE_MAPS_H

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "impulse/interval.hpp"

namespace impulse {

// Branch rules. Each branch of an IntervalMap applies one of these on its
// sub-interval; every rule except Opaque is monotone on a branch and has a
// closed-form inverse, which is what makes images and preimages exact.

struct Affine {
  double slope = 1.0;
  double intercept = 0.0;
};

/// a * x * (1 - x). Branches are split at the vertex x = 1/2.
struct Logistic {
  double a = 4.0;
};

/// x^exponent with exponent > 0, defined for x >= 0.
struct Power {
  double exponent = 1.0;
};

struct Constant {
  double value = 0.0;
};

/// Black-box callable. Usable for simulation only; images, preimages and
/// certificates reject it.
struct Opaque {
  std::function<double(double)> fn;
};

using Rule = std::variant<Affine, Logistic, Power, Constant, Opaque>;

/// A monotone piece of a map. Branch 0 covers [lo, hi]; every later branch
/// covers (lo, hi], so a shared endpoint belongs to the left branch.
struct Branch {
  Interval span;
  Rule rule;
};

/// How a preimage treats a constant piece whose value sits on the upper end
/// of the target interval. kRightOpen matches half-open histogram bins.
enum class Closure { kClosed, kRightOpen };

/// Self-map of a compact interval built from monotone branches.
class IntervalMap {
 public:
  /// Validates that the branches partition the domain, that each is monotone
  /// and that the image stays inside the domain. A declared Lipschitz
  /// constant is checked against a 4097-point sample grid.
  IntervalMap(IntervalDomain domain, std::vector<Branch> branches,
              std::optional<double> lipschitz = std::nullopt, std::string name = {});

  static IntervalMap affine(IntervalDomain d, double slope, double intercept,
                            std::optional<double> lipschitz = std::nullopt);
  static IntervalMap identity(IntervalDomain d);
  static IntervalMap constant(IntervalDomain d, double value);
  /// a * x * (1 - x) on [0, 1], a in (0, 4].
  static IntervalMap logistic(double a, std::optional<double> lipschitz = std::nullopt);
  static IntervalMap power(IntervalDomain d, double exponent,
                           std::optional<double> lipschitz = std::nullopt);
  /// Linear interpolation through (x, y) breakpoints whose x values start at
  /// domain.lo, end at domain.hi and strictly increase.
  static IntervalMap piecewise_linear(IntervalDomain d, std::span<const std::pair<double, double>> table,
                                      std::optional<double> lipschitz = std::nullopt);
  static IntervalMap opaque(IntervalDomain d, std::function<double(double)> fn,
                            std::optional<double> lipschitz = std::nullopt);

  const IntervalDomain& domain() const { return domain_; }
  std::span<const Branch> branches() const { return branches_; }
  const std::string& name() const { return name_; }
  IntervalMap& set_name(std::string name) {
    name_ = std::move(name);
    return *this;
  }

  /// Whole-map monotone (non-decreasing or non-increasing across branches).
  bool monotone() const { return monotone_; }
  /// Strictly monotone across the whole domain.
  bool injective() const { return injective_; }
  /// False when any branch is Opaque.
  bool exact() const { return exact_; }
  std::optional<double> lipschitz() const { return lipschitz_; }

  double operator()(double x) const;

  /// Index of the branch owning x (x already clamped onto the domain).
  std::size_t branch_index(double x) const;

 private:
  IntervalDomain domain_;
  std::vector<Branch> branches_;
  std::optional<double> lipschitz_;
  std::string name_;
  bool monotone_ = false;
  bool injective_ = false;
  bool exact_ = true;
};

double eval(const IntervalMap& map, double x);

/// Exact range of the map over j (closed hull; for discontinuous maps the
/// hull may include limit values).
Interval image(const IntervalMap& map, Interval j);

/// Image of j under maps[0] o maps[1] o ... o maps[n-1]: the last map is
/// applied first. An empty sequence returns j.
Interval compose_image(std::span<const IntervalMap> maps, Interval j);
Interval compose_image(std::span<const IntervalMap* const> maps, Interval j);

/// Exact preimage of c, one interval per branch that reaches c, in branch
/// order. Pieces are not merged.
std::vector<Interval> preimage(const IntervalMap& map, Interval c, Closure closure = Closure::kClosed);

/// Preimage of a union of intervals, merged.
std::vector<Interval> preimage(const IntervalMap& map, std::span<const Interval> parts,
                               Closure closure = Closure::kClosed);

/// Largest difference quotient between consecutive points of a uniform grid.
double lipschitz_estimate(const IntervalMap& map, std::size_t grid_size);

}  // namespace impulse

#endif  // IMPULSE_MAPS_H
