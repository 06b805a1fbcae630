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

#include "impulse/operator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace impulse {
namespace {

struct Entry {
  std::size_t src;
  std::size_t dst;
  double frac;
};

// Direct push of one row: target bin c receives G(preimage(c)).
std::vector<double> push_direct(const IntervalMap& map, const GridSpec& grid, std::span<const double> src) {
  const BinnedCdf g(grid, src);
  std::vector<double> out(grid.bins(), 0.0);
  for (std::size_t c = 0; c < grid.bins(); ++c) {
    for (const auto& piece : preimage(map, grid.bin(c), Closure::kRightOpen)) out[c] += g.mass(piece);
  }
  return out;
}

}  // namespace

PushPlan::PushPlan(const IntervalMap& map, const GridSpec& grid) : bins_(grid.bins()) {
  if (!(map.domain() == grid.domain())) throw InvalidArgument("map and grid live on different domains");
  if (!map.exact()) throw UnsupportedMap("push-forward needs exact preimages");
  std::vector<Entry> entries;
  for (std::size_t c = 0; c < bins_; ++c) {
    for (const auto& piece : preimage(map, grid.bin(c), Closure::kRightOpen)) {
      if (!(piece.hi > piece.lo)) continue;
      const std::size_t first = grid.bin_of(piece.lo);
      const std::size_t last = grid.bin_of(piece.hi);
      for (std::size_t b = first; b <= last; ++b) {
        const double lo = std::max(piece.lo, grid.edge(b));
        const double hi = std::min(piece.hi, grid.edge(b + 1));
        if (hi > lo) entries.push_back({b, c, (hi - lo) / (grid.edge(b + 1) - grid.edge(b))});
      }
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return std::tie(a.src, a.dst) < std::tie(b.src, b.dst); });

  offsets_.assign(bins_ + 1, 0);
  targets_.reserve(entries.size());
  fractions_.reserve(entries.size());
  std::size_t i = 0;
  for (std::size_t b = 0; b < bins_; ++b) {
    offsets_[b] = targets_.size();
    double column = 0.0;
    const std::size_t start = targets_.size();
    for (; i < entries.size() && entries[i].src == b; ++i) {
      if (!targets_.empty() && targets_.size() > start && targets_.back() == entries[i].dst) {
        fractions_.back() += entries[i].frac;
      } else {
        targets_.push_back(entries[i].dst);
        fractions_.push_back(entries[i].frac);
      }
      column += entries[i].frac;
    }
    if (std::abs(column - 1.0) > 1e-9) throw std::logic_error("push-forward lost mass in a source bin");
    for (std::size_t k = start; k < fractions_.size(); ++k) fractions_[k] /= column;
  }
  offsets_[bins_] = targets_.size();
}

void PushPlan::accumulate(std::span<const double> src, std::span<double> dst) const {
  for (std::size_t b = 0; b < bins_; ++b) {
    const double w = src[b];
    if (w == 0.0) continue;
    for (std::size_t k = offsets_[b]; k < offsets_[b + 1]; ++k) dst[targets_[k]] += w * fractions_[k];
  }
}

TransferOperator::TransferOperator(const ImpulseSystem& sys, GridSpec grid, std::size_t states)
    : grid_(grid),
      states_(states),
      pmf_(states),
      escape_(sys.times().survival(states)),
      push_f_(sys.f(), grid),
      push_g_(sys.g(), grid) {
  if (states_ < 1) throw InvalidArgument("state truncation must be at least 1");
  for (State j = 0; j < states_; ++j) pmf_[j] = sys.times().pmf(j);
}

ProductMeasure TransferOperator::apply(const ProductMeasure& mu) const {
  if (!(mu.grid() == grid_) || mu.states() != states_) throw InvalidArgument("measure does not match the operator");
  ProductMeasure out(grid_, states_);
  const auto zero = mu.row(0);
  const double zero_mass = std::accumulate(zero.begin(), zero.end(), 0.0);
  std::vector<double> inflow(grid_.bins());
  for (State j = 0; j < states_; ++j) {
    if (j + 1 < states_) {
      const auto next = mu.row(j + 1);
      for (std::size_t b = 0; b < inflow.size(); ++b) inflow[b] = next[b] + pmf_[j] * zero[b];
    } else {
      for (std::size_t b = 0; b < inflow.size(); ++b) inflow[b] = pmf_[j] * zero[b];
    }
    (j == 0 ? push_g_ : push_f_).accumulate(inflow, out.row(j));
  }
  out.set_tail_mass(mu.tail_mass() + zero_mass * escape_);
  return out;
}

ProductMeasure apply_T(const ImpulseSystem& sys, const ProductMeasure& mu) {
  return TransferOperator(sys, mu.grid(), mu.states()).apply(mu);
}

double n_step_direct(const ImpulseSystem& sys, const ProductMeasure& mu, std::size_t n, State j, Interval c) {
  if (n > kMaxDirectSteps) throw InvalidArgument("n_step_direct enumerates paths only up to n = 6");
  const std::size_t K = mu.states();
  if (j >= K) return 0.0;
  if (n == 0) return mu.mass(j, c);
  const auto& grid = mu.grid();
  const auto& times = sys.times();

  // path[0] = j, path[i + 1] is the predecessor of path[i].
  std::vector<State> path{j};
  double total = 0.0;
  std::function<void(double)> walk = [&](double weight) {
    if (path.size() == n + 1) {
      std::vector<double> row(mu.row(path.back()).begin(), mu.row(path.back()).end());
      for (auto& w : row) w *= weight;
      for (std::size_t i = n; i-- > 0;) row = push_direct(sys.map_for(path[i]), grid, row);
      total += BinnedCdf(grid, row).mass(c);
      return;
    }
    const State s = path.back();
    if (s + 1 < K) {
      path.push_back(s + 1);
      walk(weight);
      path.pop_back();
    }
    if (const double p = times.pmf(s); p > 0.0) {
      path.push_back(0);
      walk(weight * p);
      path.pop_back();
    }
  };
  walk(1.0);
  return total;
}

ConvergenceResult iterate_to_convergence(const ImpulseSystem& sys, const ProductMeasure& mu0, std::size_t max_n,
                                         double tol,
                                         const std::function<void(std::size_t, const ProductMeasure&)>& observer) {
  if (!(tol >= 0.0)) throw InvalidArgument("tolerance must be non-negative");
  const TransferOperator op(sys, mu0.grid(), mu0.states());
  ConvergenceResult result{mu0, {}, false, 0};
  auto previous = space_marginal(mu0);
  for (std::size_t n = 1; n <= max_n; ++n) {
    result.measure = op.apply(result.measure);
    auto current = space_marginal(result.measure);
    const double delta = sup_cdf_distance(previous, current);
    result.diagnostics.push_back(
        {n, tv_to_stationary(result.measure, sys.times()), delta, result.measure.tail_mass()});
    result.iterations = n;
    if (observer) observer(n, result.measure);
    if (delta < tol) {
      result.converged = true;
      break;
    }
    previous = std::move(current);
  }
  return result;
}

}  // namespace impulse
