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

#include "impulse/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace impulse {

GridSpec::GridSpec(IntervalDomain domain, std::size_t bins) : domain_(domain), bins_(bins) {
  if (bins_ < 2) throw InvalidArgument("grid needs at least two bins");
}

double GridSpec::edge(std::size_t b) const {
  if (b >= bins_) return domain_.hi();
  return domain_.lo() + domain_.width() * static_cast<double>(b) / static_cast<double>(bins_);
}

std::size_t GridSpec::bin_of(double x) const {
  x = domain_.clamp(x);
  const double t = (x - domain_.lo()) / domain_.width() * static_cast<double>(bins_);
  auto b = static_cast<std::size_t>(std::min<double>(std::floor(t), static_cast<double>(bins_ - 1)));
  // The floor can land one off near an edge; settle it against the edges.
  while (b > 0 && x < edge(b)) --b;
  while (b + 1 < bins_ && x >= edge(b + 1)) ++b;
  return b;
}

BinnedCdf::BinnedCdf(const GridSpec& grid, std::span<const double> masses)
    : grid_(&grid), masses_(masses), prefix_(masses.size() + 1, 0.0) {
  if (masses.size() != grid.bins()) throw InvalidArgument("mass row does not match the grid");
  std::partial_sum(masses.begin(), masses.end(), prefix_.begin() + 1);
}

double BinnedCdf::operator()(double x) const {
  const auto& d = grid_->domain();
  if (x <= d.lo()) return 0.0;
  if (x >= d.hi()) return prefix_.back();
  const std::size_t b = grid_->bin_of(x);
  const double lo = grid_->edge(b);
  const double frac = (x - lo) / (grid_->edge(b + 1) - lo);
  return prefix_[b] + frac * masses_[b];
}

double BinnedDistribution::total() const { return std::accumulate(masses.begin(), masses.end(), 0.0); }

double BinnedDistribution::cdf(double x) const { return BinnedCdf(grid, masses)(x); }

std::vector<double> BinnedDistribution::cdf_at_edges() const {
  std::vector<double> out(masses.size() + 1, 0.0);
  std::partial_sum(masses.begin(), masses.end(), out.begin() + 1);
  return out;
}

double sup_cdf_distance(const BinnedDistribution& d, const std::function<double(double)>& cdf) {
  const BinnedCdf g(d.grid, d.masses);
  double worst = 0.0;
  for (std::size_t b = 0; b <= d.grid.bins(); ++b) {
    const double x = d.grid.edge(b);
    worst = std::max(worst, std::abs(g(x) - cdf(x)));
    if (b < d.grid.bins()) {
      const double m = d.grid.midpoint(b);
      worst = std::max(worst, std::abs(g(m) - cdf(m)));
    }
  }
  return worst;
}

double sup_cdf_distance(const BinnedDistribution& a, const BinnedDistribution& b) {
  if (!(a.grid == b.grid)) throw InvalidArgument("distributions live on different grids");
  const auto ca = a.cdf_at_edges();
  const auto cb = b.cdf_at_edges();
  double worst = 0.0;
  for (std::size_t i = 0; i < ca.size(); ++i) worst = std::max(worst, std::abs(ca[i] - cb[i]));
  return worst;
}

ProductMeasure::ProductMeasure(GridSpec grid, std::size_t states)
    : grid_(grid), states_(states), weights_(states * grid.bins(), 0.0) {
  if (states_ < 1) throw InvalidArgument("product measure needs at least one state");
}

double ProductMeasure::total() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0) + tail_mass_;
}

double ProductMeasure::mass(State j, Interval c) const {
  if (j >= states_) return 0.0;
  return BinnedCdf(grid_, row(j)).mass(c);
}

ProductMeasure discretize(std::span<const MassSpec> parts, const GridSpec& grid, std::size_t states) {
  ProductMeasure mu(grid, states);
  double total = 0.0;
  for (const auto& part : parts) {
    if (const auto* p = std::get_if<PointMass>(&part)) {
      if (p->state >= states) throw DomainError("point mass on a state beyond the truncation");
      if (!(p->mass >= 0.0)) throw InvalidArgument("negative mass");
      mu.at(p->state, grid.bin_of(p->x)) += p->mass;
      total += p->mass;
      continue;
    }
    const auto& u = std::get<UniformMass>(part);
    if (u.state >= states) throw DomainError("uniform piece on a state beyond the truncation");
    if (!(u.mass >= 0.0)) throw InvalidArgument("negative mass");
    const auto& d = grid.domain();
    if (!d.contains(u.span.lo) || !d.contains(u.span.hi) || u.span.lo > u.span.hi) {
      throw DomainError("uniform piece off the domain");
    }
    total += u.mass;
    if (u.span.width() == 0.0) {
      mu.at(u.state, grid.bin_of(u.span.lo)) += u.mass;
      continue;
    }
    const std::size_t first = grid.bin_of(u.span.lo);
    const std::size_t last = grid.bin_of(u.span.hi);
    for (std::size_t b = first; b <= last; ++b) {
      const double lo = std::max(u.span.lo, grid.edge(b));
      const double hi = std::min(u.span.hi, grid.edge(b + 1));
      if (hi > lo) mu.at(u.state, b) += u.mass * (hi - lo) / u.span.width();
    }
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("initial masses must total 1");
  return mu;
}

ProductMeasure stationary_times_uniform(const ImpulseTimeDistribution& dist, const GridSpec& grid,
                                        std::size_t states) {
  const auto m = stationary(dist, states);
  ProductMeasure mu(grid, states);
  const double share = 1.0 / static_cast<double>(grid.bins());
  for (State j = 0; j < states; ++j) {
    for (double& w : mu.row(j)) w = m.weights[j] * share;
  }
  mu.set_tail_mass(m.tail_mass);
  return mu;
}

std::vector<double> state_marginal(const ProductMeasure& mu) {
  std::vector<double> out(mu.states());
  for (State j = 0; j < mu.states(); ++j) {
    const auto r = mu.row(j);
    out[j] = std::accumulate(r.begin(), r.end(), 0.0);
  }
  return out;
}

BinnedDistribution space_marginal(const ProductMeasure& mu) {
  BinnedDistribution out{mu.grid(), std::vector<double>(mu.bins(), 0.0)};
  for (State j = 0; j < mu.states(); ++j) {
    const auto r = mu.row(j);
    for (std::size_t b = 0; b < r.size(); ++b) out.masses[b] += r[b];
  }
  return out;
}

double tv_to_stationary(const ProductMeasure& mu, const ImpulseTimeDistribution& dist) {
  const auto m = stationary(dist, mu.states());
  const auto marg = state_marginal(mu);
  double l1 = std::abs(mu.tail_mass() - m.tail_mass);
  for (State j = 0; j < marg.size(); ++j) l1 += std::abs(marg[j] - m.weights[j]);
  return 0.5 * l1;
}

TestFunction TestFunction::constant(double c) {
  return {[c](State, double) { return c; }};
}

TestFunction TestFunction::polynomial(std::vector<double> coeffs) {
  return {[coeffs = std::move(coeffs)](State, double x) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
  }};
}

TestFunction TestFunction::smoothed_indicator(Interval j, double width) {
  if (!(width > 0.0)) throw InvalidArgument("smoothing width must be positive");
  return {[j, width](State, double x) {
    const double outside = std::max({0.0, j.lo - x, x - j.hi});
    return std::max(0.0, 1.0 - outside / width);
  }};
}

TestFunction TestFunction::piecewise_linear(std::vector<std::pair<double, double>> table) {
  if (table.empty()) throw InvalidArgument("piecewise-linear test function needs breakpoints");
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (!(table[i].first > table[i - 1].first)) throw InvalidArgument("breakpoints must strictly increase");
  }
  return {[table = std::move(table)](State, double x) {
    if (x <= table.front().first) return table.front().second;
    if (x >= table.back().first) return table.back().second;
    const auto it = std::upper_bound(table.begin(), table.end(), x,
                                     [](double v, const auto& p) { return v < p.first; });
    const auto& [x1, y1] = *it;
    const auto& [x0, y0] = *(it - 1);
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
  }};
}

TestFunction TestFunction::per_state(std::vector<std::function<double(double)>> per_state) {
  if (per_state.empty()) throw InvalidArgument("per-state test function needs at least one entry");
  return {[fs = std::move(per_state)](State j, double x) { return fs[std::min(j, fs.size() - 1)](x); }};
}

double integrate(const ProductMeasure& mu, const TestFunction& h) {
  double acc = 0.0;
  for (State j = 0; j < mu.states(); ++j) {
    const auto r = mu.row(j);
    for (std::size_t b = 0; b < r.size(); ++b) {
      if (r[b] != 0.0) acc += h(j, mu.grid().midpoint(b)) * r[b];
    }
  }
  return acc;
}

}  // namespace impulse
