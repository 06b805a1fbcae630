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

#include "impulse/maps.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace impulse {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double rule_value(const Rule& rule, double x) {
  return std::visit(Overloaded{
                        [x](const Affine& r) { return r.slope * x + r.intercept; },
                        [x](const Logistic& r) { return r.a * x * (1.0 - x); },
                        [x](const Power& r) { return std::pow(std::max(x, 0.0), r.exponent); },
                        [](const Constant& r) { return r.value; },
                        [x](const Opaque& r) { return r.fn(x); },
                    },
                    rule);
}

// +1 increasing, -1 decreasing, 0 constant, 2 unknown.
int direction(const Branch& b) {
  return std::visit(Overloaded{
                        [](const Affine& r) { return r.slope > 0 ? 1 : (r.slope < 0 ? -1 : 0); },
                        [&b](const Logistic&) { return b.span.hi <= 0.5 ? 1 : -1; },
                        [](const Power&) { return 1; },
                        [](const Constant&) { return 0; },
                        [](const Opaque&) { return 2; },
                    },
                    b.rule);
}

Interval branch_range(const Branch& b, double lo, double hi) {
  const int dir = direction(b);
  if (dir == 2) throw UnsupportedMap("opaque branch has no exact image");
  if (dir == 0) return Interval::point(rule_value(b.rule, lo));
  return Interval::hull(rule_value(b.rule, lo), rule_value(b.rule, hi));
}

// Point of the branch span mapped to y. y outside the branch range returns
// the endpoint attaining the nearer extreme, so the endpoints are exact.
double branch_inverse(const Branch& b, double y) {
  const double lo = b.span.lo;
  const double hi = b.span.hi;
  const double flo = rule_value(b.rule, lo);
  const double fhi = rule_value(b.rule, hi);
  const int dir = direction(b);
  if (dir > 0) {
    if (y <= flo) return lo;
    if (y >= fhi) return hi;
  } else {
    if (y >= flo) return lo;
    if (y <= fhi) return hi;
  }
  const double x = std::visit(Overloaded{
                                  [y](const Affine& r) { return (y - r.intercept) / r.slope; },
                                  [y, dir](const Logistic& r) {
                                    const double disc = std::sqrt(std::max(0.0, 1.0 - 4.0 * y / r.a));
                                    return dir > 0 ? 0.5 * (1.0 - disc) : 0.5 * (1.0 + disc);
                                  },
                                  [y](const Power& r) { return std::pow(std::max(y, 0.0), 1.0 / r.exponent); },
                                  [lo](const Constant&) { return lo; },
                                  [lo](const Opaque&) { return lo; },
                              },
                              b.rule);
  return std::clamp(x, lo, hi);
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

IntervalMap::IntervalMap(IntervalDomain domain, std::vector<Branch> branches, std::optional<double> lipschitz,
                         std::string name)
    : domain_(domain), branches_(std::move(branches)), lipschitz_(lipschitz), name_(std::move(name)) {
  if (branches_.empty()) throw InvalidArgument("map needs at least one branch");
  if (branches_.front().span.lo != domain_.lo() || branches_.back().span.hi != domain_.hi()) {
    throw InvalidArgument("branches must start at domain.lo and end at domain.hi");
  }
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    const auto& b = branches_[i];
    if (!(b.span.lo < b.span.hi)) throw InvalidArgument("branch sub-interval must have lo < hi");
    if (i > 0 && b.span.lo != branches_[i - 1].span.hi) {
      throw InvalidArgument("branch sub-intervals must abut without gaps or overlaps");
    }
    if (const auto* lg = std::get_if<Logistic>(&b.rule)) {
      if (!(lg->a > 0.0)) throw InvalidArgument("logistic parameter must be positive");
      if (b.span.lo < 0.5 && b.span.hi > 0.5) throw InvalidArgument("logistic branch must not straddle the vertex");
    }
    if (const auto* pw = std::get_if<Power>(&b.rule)) {
      if (!(pw->exponent > 0.0)) throw InvalidArgument("power exponent must be positive");
      if (b.span.lo < 0.0) throw InvalidArgument("power branch needs a non-negative sub-interval");
    }
    if (const auto* op = std::get_if<Opaque>(&b.rule); op && !op->fn) {
      throw InvalidArgument("opaque branch needs a callable");
    }
    if (direction(b) == 2) exact_ = false;
  }

  if (exact_) {
    // image() clamps to the domain, so take the unclamped hull here
    Interval range = branch_range(branches_.front(), branches_.front().span.lo, branches_.front().span.hi);
    for (const auto& b : branches_) range = hull(range, branch_range(b, b.span.lo, b.span.hi));
    if (range.lo < domain_.lo() - kEndpointSlack || range.hi > domain_.hi() + kEndpointSlack) {
      throw InvalidArgument("map image leaves the domain");
    }
    bool up = true;
    bool down = true;
    bool strict = true;
    for (std::size_t i = 0; i < branches_.size(); ++i) {
      const int dir = direction(branches_[i]);
      if (dir < 0) up = false;
      if (dir > 0) down = false;
      if (dir == 0) strict = false;
      if (i > 0) {
        const double left = rule_value(branches_[i - 1].rule, branches_[i].span.lo);
        const double right = rule_value(branches_[i].rule, branches_[i].span.lo);
        if (left > right + kEndpointSlack) up = false;
        if (left < right - kEndpointSlack) down = false;
        if (std::abs(left - right) <= kEndpointSlack) {
          // A continuous junction keeps strictness only if both sides move the same way.
          if (direction(branches_[i - 1]) != direction(branches_[i])) strict = false;
        }
      }
    }
    monotone_ = up || down;
    injective_ = monotone_ && strict &&
                 (std::all_of(branches_.begin(), branches_.end(), [](const Branch& b) { return direction(b) > 0; }) ||
                  std::all_of(branches_.begin(), branches_.end(), [](const Branch& b) { return direction(b) < 0; }));
  } else {
    constexpr std::size_t kSamples = 1025;
    for (std::size_t i = 0; i < kSamples; ++i) {
      const double x = domain_.lo() + domain_.width() * static_cast<double>(i) / (kSamples - 1);
      const double y = rule_value(branches_[branch_index(x)].rule, x);
      if (!(y >= domain_.lo() - kEndpointSlack && y <= domain_.hi() + kEndpointSlack)) {
        throw InvalidArgument("map image leaves the domain");
      }
    }
  }

  if (lipschitz_) {
    const double declared = *lipschitz_;
    if (!(declared >= 0.0) || !std::isfinite(declared)) throw InvalidArgument("Lipschitz constant must be >= 0");
    const double estimate = lipschitz_estimate(*this, 4097);
    if (estimate > declared * (1.0 + 1e-9) + kEndpointSlack) {
      throw InvalidArgument("declared Lipschitz constant " + format_number(declared) +
                            " is below the sampled estimate " + format_number(estimate));
    }
  }
}

IntervalMap IntervalMap::affine(IntervalDomain d, double slope, double intercept, std::optional<double> lipschitz) {
  Rule rule = slope == 0.0 ? Rule{Constant{intercept}} : Rule{Affine{slope, intercept}};
  return IntervalMap(d, {Branch{d.interval(), std::move(rule)}}, lipschitz.value_or(std::abs(slope)),
                     "affine(" + format_number(slope) + "," + format_number(intercept) + ")");
}

IntervalMap IntervalMap::identity(IntervalDomain d) {
  return IntervalMap(d, {Branch{d.interval(), Affine{1.0, 0.0}}}, 1.0, "identity");
}

IntervalMap IntervalMap::constant(IntervalDomain d, double value) {
  return IntervalMap(d, {Branch{d.interval(), Constant{value}}}, 0.0, "constant(" + format_number(value) + ")");
}

IntervalMap IntervalMap::logistic(double a, std::optional<double> lipschitz) {
  if (!(a > 0.0 && a <= 4.0)) throw InvalidArgument("logistic parameter must lie in (0, 4]");
  const IntervalDomain unit(0.0, 1.0);
  return IntervalMap(unit, {Branch{{0.0, 0.5}, Logistic{a}}, Branch{{0.5, 1.0}, Logistic{a}}}, lipschitz.value_or(a),
                     "logistic(" + format_number(a) + ")");
}

IntervalMap IntervalMap::power(IntervalDomain d, double exponent, std::optional<double> lipschitz) {
  if (!lipschitz && exponent >= 1.0) lipschitz = exponent * std::pow(d.hi(), exponent - 1.0);
  return IntervalMap(d, {Branch{d.interval(), Power{exponent}}}, lipschitz, "power(" + format_number(exponent) + ")");
}

IntervalMap IntervalMap::piecewise_linear(IntervalDomain d, std::span<const std::pair<double, double>> table,
                                          std::optional<double> lipschitz) {
  if (table.size() < 2) throw InvalidArgument("piecewise-linear table needs at least two breakpoints");
  if (table.front().first != d.lo() || table.back().first != d.hi()) {
    throw InvalidArgument("piecewise-linear table must span the domain");
  }
  std::vector<Branch> branches;
  double steepest = 0.0;
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto [x0, y0] = table[i - 1];
    const auto [x1, y1] = table[i];
    if (!(x1 > x0)) throw InvalidArgument("piecewise-linear breakpoints must strictly increase");
    const double slope = (y1 - y0) / (x1 - x0);
    steepest = std::max(steepest, std::abs(slope));
    Rule rule = slope == 0.0 ? Rule{Constant{y0}} : Rule{Affine{slope, y0 - slope * x0}};
    branches.push_back(Branch{{x0, x1}, std::move(rule)});
  }
  return IntervalMap(d, std::move(branches), lipschitz.value_or(steepest), "piecewise_linear");
}

IntervalMap IntervalMap::opaque(IntervalDomain d, std::function<double(double)> fn, std::optional<double> lipschitz) {
  return IntervalMap(d, {Branch{d.interval(), Opaque{std::move(fn)}}}, lipschitz, "opaque");
}

std::size_t IntervalMap::branch_index(double x) const {
  const auto it = std::partition_point(branches_.begin(), branches_.end(),
                                       [x](const Branch& b) { return b.span.hi < x; });
  return it == branches_.end() ? branches_.size() - 1 : static_cast<std::size_t>(it - branches_.begin());
}

double IntervalMap::operator()(double x) const {
  const double xc = domain_.clamp(x);
  const double y = rule_value(branches_[branch_index(xc)].rule, xc);
  return std::clamp(y, domain_.lo(), domain_.hi());
}

double eval(const IntervalMap& map, double x) { return map(x); }

Interval image(const IntervalMap& map, Interval j) {
  const auto& d = map.domain();
  j = {d.clamp(j.lo), d.clamp(j.hi)};
  if (j.lo > j.hi) throw InvalidArgument("interval with lo > hi");
  bool found = false;
  Interval out{};
  const auto branches = map.branches();
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const auto& b = branches[i];
    const double a = std::max(j.lo, b.span.lo);
    const double c = std::min(j.hi, b.span.hi);
    if (a > c) continue;
    if (i > 0 && !(j.hi > b.span.lo)) continue;
    const Interval r = branch_range(b, a, c);
    out = found ? hull(out, r) : r;
    found = true;
  }
  return {std::clamp(out.lo, d.lo(), d.hi()), std::clamp(out.hi, d.lo(), d.hi())};
}

Interval compose_image(std::span<const IntervalMap> maps, Interval j) {
  for (auto it = maps.rbegin(); it != maps.rend(); ++it) j = image(*it, j);
  return j;
}

Interval compose_image(std::span<const IntervalMap* const> maps, Interval j) {
  for (auto it = maps.rbegin(); it != maps.rend(); ++it) j = image(**it, j);
  return j;
}

std::vector<Interval> preimage(const IntervalMap& map, Interval c, Closure closure) {
  std::vector<Interval> pieces;
  const double top = map.domain().hi();
  for (const auto& b : map.branches()) {
    const int dir = direction(b);
    if (dir == 2) throw UnsupportedMap("opaque branch has no exact preimage");
    if (dir == 0) {
      const double v = rule_value(b.rule, b.span.lo);
      const bool below_top = closure == Closure::kClosed ? v <= c.hi : (v < c.hi || (v == c.hi && c.hi >= top));
      if (c.lo <= v && below_top) pieces.push_back(b.span);
      continue;
    }
    const Interval range = branch_range(b, b.span.lo, b.span.hi);
    const double u = std::max(c.lo, range.lo);
    const double v = std::min(c.hi, range.hi);
    if (u > v) continue;
    pieces.push_back(Interval::hull(branch_inverse(b, u), branch_inverse(b, v)));
  }
  return pieces;
}

std::vector<Interval> preimage(const IntervalMap& map, std::span<const Interval> parts, Closure closure) {
  std::vector<Interval> all;
  for (const auto& part : parts) {
    auto pieces = preimage(map, part, closure);
    all.insert(all.end(), pieces.begin(), pieces.end());
  }
  return merge_intervals(std::move(all));
}

double lipschitz_estimate(const IntervalMap& map, std::size_t grid_size) {
  if (grid_size < 2) throw InvalidArgument("grid_size must be at least 2");
  const auto& d = map.domain();
  const double step = d.width() / static_cast<double>(grid_size - 1);
  double best = 0.0;
  double x_prev = d.lo();
  double y_prev = map(x_prev);
  for (std::size_t i = 1; i < grid_size; ++i) {
    const double x = i + 1 == grid_size ? d.hi() : d.lo() + step * static_cast<double>(i);
    const double y = map(x);
    best = std::max(best, std::abs(y - y_prev) / (x - x_prev));
    x_prev = x;
    y_prev = y;
  }
  return best;
}

}  // namespace impulse
