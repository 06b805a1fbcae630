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

#ifndef IMPULSE_SIMULATE_H
#define IMPULSE_SIMULATE_H

#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "impulse/system.hpp"

namespace impulse {

/// Pair process state (omega_{n-1}, X_n): the countdown state that produced
/// the current position, and the position.
struct ZState {
  State countdown = 0;
  double x = 0.0;
};

/// One step of the pair process. From (k, x) with k >= 1 the result is
/// (k - 1, f_{k-1}(x)); from (0, x) a fresh time j ~ (p_n) is drawn and the
/// result is (j, f_j(x)).
ZState step(const ImpulseSystem& sys, ZState z, RngStream& rng);

/// Row n holds (F_n, X_n): F_n is the countdown that selects the map taking
/// X_n to X_{n+1}.
struct TrajectoryPoint {
  State countdown = 0;
  double x = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// Trajectory X_0..X_steps. F_0 is drawn from (p_n) by default, as the time
/// to the first impulse.
Trajectory simulate_trajectory(const ImpulseSystem& sys, double x0, std::size_t steps, std::uint64_t seed,
                               std::uint64_t stream = 0, StartLaw start = StartLaw::kImpulseTimes);

/// Positions X_0..X_steps for prescribed inter-impulse times T_1, T_2, ...
/// Throws InvalidArgument if the times run out before `steps`.
std::vector<double> apply_impulse_times(const ImpulseSystem& sys, double x0, std::span<const State> times,
                                        std::size_t steps);

/// Right-continuous empirical distribution function of a finite sample.
class EmpiricalCDF {
 public:
  explicit EmpiricalCDF(std::vector<double> samples);

  std::span<const double> sorted() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }
  /// Fraction of samples <= x.
  double operator()(double x) const;
  /// Fraction of samples < x.
  double left_limit(double x) const;

 private:
  std::vector<double> sorted_;
};

struct PointStart {
  double x = 0.0;
};
struct UniformStart {};
using InitialCondition = std::variant<PointStart, UniformStart>;

struct EnsembleOptions {
  std::size_t steps = 200;
  std::size_t count = 1000;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  StartLaw start = StartLaw::kImpulseTimes;
};

/// ECDF of X_steps over `count` trajectories. Trajectory i draws from stream
/// (seed, i), so the result does not depend on `threads`.
EmpiricalCDF simulate_ensemble(const ImpulseSystem& sys, const InitialCondition& init, const EnsembleOptions& opts);

/// ECDF of the i.i.d. two-map system that applies f with probability prob_f
/// and g otherwise.
EmpiricalCDF simulate_iid_ensemble(const IntervalMap& f, const IntervalMap& g, double prob_f,
                                   const InitialCondition& init, const EnsembleOptions& opts);

using CdfFunction = std::function<double(double)>;

/// sup_x |e(x) - F(x)|, evaluated at the sample points and their left limits.
double ks_distance(const EmpiricalCDF& e, const CdfFunction& cdf);
/// sup_x |a(x) - b(x)| between two ECDFs.
double ks_two_sample(const EmpiricalCDF& a, const EmpiricalCDF& b);
/// Integral over the domain of |e(x) - F(x)|, with Simpson's rule on every
/// piece between consecutive grid points and samples.
double wasserstein1(const EmpiricalCDF& e, const CdfFunction& cdf, const IntervalDomain& domain,
                    std::size_t grid_bins = 1024);

struct ConditionalQuery {
  /// Number of positions X_1..X_m the condition looks at.
  std::size_t history = 1;
  std::function<bool(std::span<const double>)> condition;
  std::function<bool(double)> target;
};

struct ConditionalEstimate {
  double probability = 0.0;
  double standard_error = 0.0;
  std::size_t events = 0;
  std::size_t trials = 0;
  /// False when no trajectory met the condition.
  bool conclusive = false;
};

/// Relative frequency of target(X_{m+1}) among trajectories whose history
/// satisfies the condition. Stops after `events` conditioning events or
/// `max_trials` trajectories.
ConditionalEstimate conditional_probability_estimate(const ImpulseSystem& sys, double x0,
                                                     const ConditionalQuery& query, std::size_t events,
                                                     std::uint64_t seed, std::size_t max_trials);

/// Predicate matching a value within 1e-9.
std::function<bool(double)> near(double value);

}  // namespace impulse

#endif  // IMPULSE_SIMULATE_H
