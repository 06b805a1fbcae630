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

#ifndef IMPULSE_STATIONARY_H
#define IMPULSE_STATIONARY_H

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "impulse/measure.hpp"
#include "impulse/system.hpp"

namespace impulse {

/// The system observed at impulse times: x -> g(f^k(x)) with probability p_k,
/// k < K. Mass of k >= K is reported as tail_mass.
class CollapsedIFS {
 public:
  /// K defaults to the smallest K with survival(K) <= 1e-12 (bounded laws:
  /// max support + 1; custom laws: the head length).
  explicit CollapsedIFS(const ImpulseSystem& sys, std::optional<std::size_t> truncation = std::nullopt);

  const ImpulseSystem& system() const { return *sys_; }
  std::size_t size() const { return probs_.size(); }
  double prob(std::size_t k) const { return probs_[k]; }
  double tail_mass() const { return tail_mass_; }
  /// g(I): every collapsed map lands here.
  Interval absorbing() const { return absorbing_; }

  /// g(f^k(x)).
  double operator()(std::size_t k, double x) const;
  /// Exact preimage of c under g o f^k, merged.
  std::vector<Interval> preimage(std::size_t k, Interval c, Closure closure = Closure::kRightOpen) const;

 private:
  const ImpulseSystem* sys_;
  std::vector<double> probs_;
  double tail_mass_ = 0.0;
  Interval absorbing_;
};

/// Stationary law of the collapsed system, binned over its absorbing
/// interval, or an atom when that interval is a single point.
struct CollapsedStationary {
  std::optional<BinnedDistribution> binned;
  std::optional<double> atom;
  /// TV change under one more application of the collapsed operator.
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;

  /// Mass of a union of disjoint intervals (linear within bins).
  double mass(std::span<const Interval> set) const;
  double cdf(double x) const;
};

/// Fixed point of nu(A) = sum_k p_k nu(f~_k^{-1}(A)) by iteration from the
/// uniform law on the absorbing interval. The truncated tail is spread
/// proportionally, so every iterate is a probability law.
CollapsedStationary collapsed_stationary(const CollapsedIFS& cifs, std::size_t bins, std::size_t max_iter,
                                         double tol);

struct LimitDistribution {
  ProductMeasure mu_star;
  BinnedDistribution nu;
  std::optional<std::function<double(double)>> closed_form_cdf;
};

/// Lifts the collapsed stationary law to the pair process:
///   mu*_0(A) = nu~(A) / (1 + E),
///   mu*_k(A) = sum_j p_{k+j} / (1 + E) * nu~(f^{-(j+1)}(A)),  k >= 1,
/// on the given grid and state truncation. The inner sum stops once
/// survival drops below 1e-10. Mass beyond the truncations is tail_mass.
LimitDistribution lift_stationary(const ImpulseSystem& sys, const CollapsedStationary& nu_tilde, const GridSpec& grid,
                                  std::size_t states);

/// TV distance between T(mu*) and mu*, tails included.
double fixed_point_residual(const ImpulseSystem& sys, const LimitDistribution& ld);

/// Limit distribution function of the reference system
/// g(x) = x/2, f(x) = min(x + 1, 2) on [0, 2] with p_0 = p_1 = 1/2.
template <class T>
T example_cdf(T a) {
  if (a < T(0)) return T(0);
  if (a < T(1)) return T(2) * a / T(3);
  if (a < T(2)) return a / T(3) + T(1) / T(3);
  return T(1);
}

/// The reference system above.
ImpulseSystem example_system();

}  // namespace impulse

#endif  // IMPULSE_STATIONARY_H
