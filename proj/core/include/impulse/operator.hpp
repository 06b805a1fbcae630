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

#ifndef IMPULSE_OPERATOR_H
#define IMPULSE_OPERATOR_H

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "impulse/measure.hpp"
#include "impulse/system.hpp"

namespace impulse {

/// Push-forward of bin masses under one map, stored as a sparse matrix.
///
/// Entry (b -> c) is the fraction of source bin b lying in the exact preimage
/// of target bin c, so mass inside a bin is treated as uniform. Columns are
/// renormalized to one to absorb rounding in the inverses.
class PushPlan {
 public:
  /// Throws UnsupportedMap for maps without exact preimages.
  PushPlan(const IntervalMap& map, const GridSpec& grid);

  /// dst += push(src).
  void accumulate(std::span<const double> src, std::span<double> dst) const;
  std::size_t nonzeros() const { return fractions_.size(); }

 private:
  std::size_t bins_;
  std::vector<std::size_t> offsets_;  // per source bin, into targets_/fractions_
  std::vector<std::size_t> targets_;
  std::vector<double> fractions_;
};

/// Discretized Markov operator of the pair process on a fixed grid and state
/// truncation:
///   (T mu)_j = push_{f_j}(mu_{j+1} + p_j mu_0),  j < K.
/// Mass sent from state 0 to states >= K joins tail_mass and never returns.
class TransferOperator {
 public:
  TransferOperator(const ImpulseSystem& sys, GridSpec grid, std::size_t states);

  ProductMeasure apply(const ProductMeasure& mu) const;
  const GridSpec& grid() const { return grid_; }
  std::size_t states() const { return states_; }

 private:
  GridSpec grid_;
  std::size_t states_;
  std::vector<double> pmf_;
  double escape_ = 0.0;  // survival(K)
  PushPlan push_f_;
  PushPlan push_g_;
};

/// One application of T, on the grid and truncation of mu.
ProductMeasure apply_T(const ImpulseSystem& sys, const ProductMeasure& mu);

/// Largest n accepted by n_step_direct.
inline constexpr std::size_t kMaxDirectSteps = 6;

/// (T^n mu)_j(c) as a sum over reversed state paths xi_n -> ... -> xi_1 -> j
/// of the path probability times the sequential push of mu_{xi_n}. Every
/// push re-bins with the same within-bin rule as apply_T but is computed
/// directly from preimages and the source CDF. n = 0 returns mu_j(c).
/// Throws InvalidArgument for n > kMaxDirectSteps.
double n_step_direct(const ImpulseSystem& sys, const ProductMeasure& mu, std::size_t n, State j, Interval c);

struct IterationRecord {
  std::size_t n = 0;
  /// TV between the state marginal and the truncated stationary law.
  double tv_state = 0.0;
  /// sup-CDF change of the space marginal from step n - 1 to n.
  double sup_cdf_delta = 0.0;
  double tail_mass = 0.0;
};

struct ConvergenceResult {
  ProductMeasure measure;
  std::vector<IterationRecord> diagnostics;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Iterates T until the space-marginal sup-CDF change drops below tol or
/// max_n steps were taken; tol = 0 always runs max_n steps. Not converging
/// is reported, not thrown. The optional observer sees every iterate.
ConvergenceResult iterate_to_convergence(
    const ImpulseSystem& sys, const ProductMeasure& mu0, std::size_t max_n, double tol,
    const std::function<void(std::size_t, const ProductMeasure&)>& observer = {});

}  // namespace impulse

#endif  // IMPULSE_OPERATOR_H
