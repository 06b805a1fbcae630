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

#ifndef IMPULSE_DISTRIBUTION_H
#define IMPULSE_DISTRIBUTION_H

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "impulse/rng.hpp"

namespace impulse {

/// State of the countdown chain: the number of f-steps left before the next
/// impulse. State 0 means the impulse map is applied now.
using State = std::size_t;

/// Tail mass below which a state truncation is considered exact.
inline constexpr double kTruncationTail = 1e-9;

/// Law (p_n) of the number of f-applications between consecutive impulses.
///
/// Immutable after construction. The countdown chain it induces has
/// transition kernel p_{0j} = p_j, p_{k,k-1} = 1 and stationary weights
/// m_i = (sum_{j>=i} p_j) / (1 + E).
class ImpulseTimeDistribution {
 public:
  enum class Kind { kGeometric, kFinite, kCustom };

  /// p_k = (1 - ratio) * ratio^k, mean ratio / (1 - ratio). ratio in [0, 1).
  static ImpulseTimeDistribution geometric(double ratio);
  /// Explicit p_0..p_N summing to one; the support is bounded by N.
  static ImpulseTimeDistribution finite(std::vector<double> probs);
  /// p_0 = 1 - p, p_1 = p.
  static ImpulseTimeDistribution bernoulli(double p);
  /// p_0 = 1: an impulse at every step.
  static ImpulseTimeDistribution degenerate();
  /// Listed head p_0..p_{N-1} plus a declared tail: tail_mass = sum_{n>=N} p_n
  /// and tail_mean = sum_{n>=N} n p_n. States from N on are lumped.
  static ImpulseTimeDistribution custom(std::vector<double> head, double tail_mass, double tail_mean);

  Kind kind() const { return kind_; }
  double pmf(State n) const;
  /// sum_{j >= n} p_j.
  double survival(State n) const;
  double mean() const { return mean_; }
  bool unbounded_support() const { return kind_ == Kind::kGeometric ? ratio_ > 0.0 : tail_mass_ > 0.0; }
  /// Largest n with p_n > 0, when the support is bounded.
  std::optional<State> max_support() const;
  /// Length of the listed head for custom laws.
  std::size_t head_size() const { return probs_.size(); }
  double ratio() const { return ratio_; }

  /// Default state truncation K for discretized measures: max support + 1 for
  /// bounded laws, max(64, ceil(log(1e-9) / log ratio)) for geometric ones,
  /// the head length for custom laws.
  std::size_t default_truncation() const;

  /// Stationary weight m_i, computed from the closed form (no truncation).
  double stationary_weight(State i) const { return survival(i) / (1.0 + mean_); }

  State sample(RngStream& rng) const;
  /// Draws a state from m.
  State sample_stationary(RngStream& rng) const;
  /// Stationary mass not covered by the sampling table used for m (zero for
  /// closed-form geometric sampling).
  double stationary_sampling_tail() const { return stationary_tail_; }

  std::string describe() const;

 private:
  ImpulseTimeDistribution() = default;
  void build_tables();

  Kind kind_ = Kind::kFinite;
  double ratio_ = 0.0;
  std::vector<double> probs_;
  double tail_mass_ = 0.0;
  double tail_mean_ = 0.0;
  double mean_ = 0.0;
  std::vector<double> cumulative_;             // of probs_
  std::vector<double> stationary_cumulative_;  // of m over the sampling table
  double stationary_tail_ = 0.0;
};

/// Truncated stationary law of the countdown chain.
struct StationaryStateDistribution {
  std::vector<double> weights;  // m_0..m_{K-1}
  double tail_mass = 0.0;       // 1 - sum(weights)

  std::size_t truncation() const { return weights.size(); }
};

/// Finite symbol sequence [xi_0, ..., xi_{n-1}]; never empty.
class Cylinder {
 public:
  explicit Cylinder(std::vector<State> symbols);
  std::span<const State> symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  State operator[](std::size_t i) const { return symbols_[i]; }
  Cylinder reversed() const;
  friend bool operator==(const Cylinder&, const Cylinder&) = default;

 private:
  std::vector<State> symbols_;
};

double mean(const ImpulseTimeDistribution& dist);
double transition_prob(const ImpulseTimeDistribution& dist, State i, State j);
StationaryStateDistribution stationary(const ImpulseTimeDistribution& dist, std::size_t truncation);
/// q_{ij} = (m_j / m_i) p_{ji}. Throws UndefinedState when m_i = 0.
double reversed_prob(const ImpulseTimeDistribution& dist, State i, State j);
/// m_{xi_0} * prod p_{xi_k xi_{k+1}}; 0 for inadmissible cylinders.
double cylinder_prob_forward(const ImpulseTimeDistribution& dist, const Cylinder& c);
/// m_{xi_0} * prod q_{xi_k xi_{k+1}}; 0 for inadmissible cylinders.
double cylinder_prob_reversed(const ImpulseTimeDistribution& dist, const Cylinder& c);

State sample_time(const ImpulseTimeDistribution& dist, RngStream& rng);

enum class StartLaw { kImpulseTimes, kStationary };

/// Countdown path of the given length. The first state comes from (p_n)
/// (the first inter-impulse time) or from m.
std::vector<State> sample_forward_path(const ImpulseTimeDistribution& dist, RngStream& rng, std::size_t len,
                                       StartLaw start = StartLaw::kImpulseTimes);
/// Path of the reversed chain started from m.
std::vector<State> sample_reversed_path(const ImpulseTimeDistribution& dist, RngStream& rng, std::size_t len);

}  // namespace impulse

#endif  // IMPULSE_DISTRIBUTION_H
