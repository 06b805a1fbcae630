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

#ifndef IMPULSE_MEASURE_H
#define IMPULSE_MEASURE_H

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "impulse/distribution.hpp"
#include "impulse/interval.hpp"

namespace impulse {

/// Uniform partition of a domain into B bins. Bin b is [edge(b), edge(b+1));
/// the last bin also holds domain.hi.
class GridSpec {
 public:
  GridSpec(IntervalDomain domain, std::size_t bins);

  const IntervalDomain& domain() const { return domain_; }
  std::size_t bins() const { return bins_; }
  double bin_width() const { return domain_.width() / static_cast<double>(bins_); }
  double edge(std::size_t b) const;
  Interval bin(std::size_t b) const { return {edge(b), edge(b + 1)}; }
  double midpoint(std::size_t b) const { return 0.5 * (edge(b) + edge(b + 1)); }
  /// Bin holding x; throws DomainError for points off the domain.
  std::size_t bin_of(double x) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  IntervalDomain domain_;
  std::size_t bins_;
};

/// Distribution function of a row of bin masses, linear inside every bin.
/// Mass of an interval is read off as G(hi) - G(lo).
class BinnedCdf {
 public:
  BinnedCdf(const GridSpec& grid, std::span<const double> masses);

  double operator()(double x) const;
  double mass(Interval j) const { return (*this)(j.hi) - (*this)(j.lo); }
  double total() const { return prefix_.back(); }

 private:
  const GridSpec* grid_;
  std::span<const double> masses_;
  std::vector<double> prefix_;
};

/// Bin masses of a (sub-)probability measure on the domain.
struct BinnedDistribution {
  GridSpec grid;
  std::vector<double> masses;

  double total() const;
  /// Piecewise-linear distribution function (linear within bins).
  double cdf(double x) const;
  /// Distribution function at the B + 1 bin edges.
  std::vector<double> cdf_at_edges() const;
};

/// sup |G - F| over bin edges and midpoints, G the piecewise-linear CDF of d.
double sup_cdf_distance(const BinnedDistribution& d, const std::function<double(double)>& cdf);
/// sup |G_a - G_b| at the bin edges; exact for piecewise-linear CDFs on one grid.
double sup_cdf_distance(const BinnedDistribution& a, const BinnedDistribution& b);

/// Discretized measure on {0..K-1} x I. weights[j * B + b] is mu_j(bin b).
/// tail_mass holds whatever left the truncated state range.
class ProductMeasure {
 public:
  ProductMeasure(GridSpec grid, std::size_t states);

  const GridSpec& grid() const { return grid_; }
  std::size_t states() const { return states_; }
  std::size_t bins() const { return grid_.bins(); }

  std::span<double> row(State j) { return {weights_.data() + j * bins(), bins()}; }
  std::span<const double> row(State j) const { return {weights_.data() + j * bins(), bins()}; }
  double& at(State j, std::size_t b) { return weights_[j * bins() + b]; }
  double at(State j, std::size_t b) const { return weights_[j * bins() + b]; }
  std::span<const double> weights() const { return weights_; }

  double tail_mass() const { return tail_mass_; }
  void set_tail_mass(double t) { tail_mass_ = t; }

  /// Sum of all weights plus the tail.
  double total() const;
  /// mu_j(c) with linear-within-bin allocation.
  double mass(State j, Interval c) const;

 private:
  GridSpec grid_;
  std::size_t states_;
  std::vector<double> weights_;
  double tail_mass_ = 0.0;
};

struct PointMass {
  State state = 0;
  double x = 0.0;
  double mass = 1.0;
};

/// Mass spread uniformly over span at one state.
struct UniformMass {
  State state = 0;
  Interval span;
  double mass = 1.0;
};

using MassSpec = std::variant<PointMass, UniformMass>;

/// Builds a product measure from point masses and uniform pieces. Point
/// masses go to their containing bin; uniform pieces are integrated exactly.
/// Throws InvalidArgument unless the masses total 1 within 1e-12, and
/// DomainError for mass off the domain or on a state >= K.
ProductMeasure discretize(std::span<const MassSpec> parts, const GridSpec& grid, std::size_t states);

/// m_j x uniform(I) for j < K; m's tail beyond K goes to tail_mass.
ProductMeasure stationary_times_uniform(const ImpulseTimeDistribution& dist, const GridSpec& grid,
                                        std::size_t states);

/// Sum over bins for every state.
std::vector<double> state_marginal(const ProductMeasure& mu);
/// Sum over states for every bin (tail mass excluded).
BinnedDistribution space_marginal(const ProductMeasure& mu);

/// Half the L1 distance between the state marginal (with its tail) and the
/// stationary law truncated at the same K (with its tail).
double tv_to_stationary(const ProductMeasure& mu, const ImpulseTimeDistribution& dist);

/// Per-state bounded function h_j(x).
struct TestFunction {
  std::function<double(State, double)> fn;

  double operator()(State j, double x) const { return fn(j, x); }

  static TestFunction constant(double c);
  /// sum_i coeffs[i] x^i, the same on every state.
  static TestFunction polynomial(std::vector<double> coeffs);
  /// Continuous approximation of the indicator of [lo, hi]: 1 inside, 0 at
  /// distance >= width outside, linear in between.
  static TestFunction smoothed_indicator(Interval j, double width);
  /// Linear interpolation through breakpoints, constant beyond the ends.
  static TestFunction piecewise_linear(std::vector<std::pair<double, double>> table);
  /// Uses per_state[j] on state j, and the last entry for larger j.
  static TestFunction per_state(std::vector<std::function<double(double)>> per_state);
};

/// sum_j sum_b h_j(midpoint b) mu_j(bin b). Midpoint rule, O(1/B) bias.
double integrate(const ProductMeasure& mu, const TestFunction& h);

}  // namespace impulse

#endif  // IMPULSE_MEASURE_H
