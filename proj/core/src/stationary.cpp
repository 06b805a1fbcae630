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

#include "impulse/stationary.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <utility>

#include "impulse/operator.hpp"

namespace impulse {
namespace {

constexpr double kCollapsedTail = 1e-12;
constexpr double kLiftTail = 1e-10;
constexpr std::size_t kMaxPieces = 4096;

std::size_t collapsed_truncation(const ImpulseTimeDistribution& t) {
  if (t.kind() == ImpulseTimeDistribution::Kind::kCustom) return t.head_size();
  if (const auto top = t.max_support()) return *top + 1;
  std::size_t k = 1;
  while (t.survival(k) > kCollapsedTail && k < 100000) ++k;
  return k;
}

std::vector<Interval> clip(std::vector<Interval> parts, Interval j) {
  std::vector<Interval> out;
  for (const auto& p : parts) {
    const double lo = std::max(p.lo, j.lo);
    const double hi = std::min(p.hi, j.hi);
    if (lo <= hi) out.push_back({lo, hi});
  }
  return out;
}

}  // namespace

CollapsedIFS::CollapsedIFS(const ImpulseSystem& sys, std::optional<std::size_t> truncation) : sys_(&sys) {
  if (!sys.f().exact() || !sys.g().exact()) throw UnsupportedMap("collapsed system needs exact preimages");
  const std::size_t K = truncation.value_or(collapsed_truncation(sys.times()));
  if (K < 1) throw InvalidArgument("collapsed truncation must be at least 1");
  probs_.resize(K);
  for (std::size_t k = 0; k < K; ++k) probs_[k] = sys.times().pmf(k);
  tail_mass_ = std::max(0.0, 1.0 - std::accumulate(probs_.begin(), probs_.end(), 0.0));
  absorbing_ = image(sys.g(), sys.domain().interval());
}

double CollapsedIFS::operator()(std::size_t k, double x) const {
  for (std::size_t i = 0; i < k; ++i) x = sys_->f()(x);
  return sys_->g()(x);
}

std::vector<Interval> CollapsedIFS::preimage(std::size_t k, Interval c, Closure closure) const {
  std::array<Interval, 1> start{c};
  auto set = impulse::preimage(sys_->g(), std::span<const Interval>(start), closure);
  for (std::size_t i = 0; i < k && !set.empty(); ++i) {
    set = impulse::preimage(sys_->f(), set, closure);
    if (set.size() > kMaxPieces) throw UnsupportedMap("preimage under the collapsed map splits into too many pieces");
  }
  return set;
}

double CollapsedStationary::mass(std::span<const Interval> set) const {
  if (atom) {
    return std::any_of(set.begin(), set.end(), [&](const Interval& j) { return j.contains(*atom); }) ? 1.0 : 0.0;
  }
  const BinnedCdf g(binned->grid, binned->masses);
  const auto& d = binned->grid.domain();
  double total = 0.0;
  for (const auto& j : set) {
    const double lo = std::max(j.lo, d.lo());
    const double hi = std::min(j.hi, d.hi());
    if (hi > lo) total += g(hi) - g(lo);
  }
  return total;
}

double CollapsedStationary::cdf(double x) const {
  if (atom) return x >= *atom ? 1.0 : 0.0;
  return binned->cdf(x);
}

CollapsedStationary collapsed_stationary(const CollapsedIFS& cifs, std::size_t bins, std::size_t max_iter,
                                         double tol) {
  CollapsedStationary out;
  const Interval J = cifs.absorbing();
  if (!(J.width() > 0.0)) {
    out.atom = J.lo;
    out.converged = true;
    return out;
  }
  const GridSpec grid(IntervalDomain(J.lo, J.hi), bins);

  // Sparse transfer matrix on the J grid: source bin b -> (target c, weight).
  std::vector<std::vector<std::pair<std::size_t, double>>> columns(bins);
  for (std::size_t c = 0; c < bins; ++c) {
    for (std::size_t k = 0; k < cifs.size(); ++k) {
      if (cifs.prob(k) == 0.0) continue;
      for (const auto& piece : clip(cifs.preimage(k, grid.bin(c)), J)) {
        if (!(piece.hi > piece.lo)) continue;
        const std::size_t first = grid.bin_of(piece.lo);
        const std::size_t last = grid.bin_of(piece.hi);
        for (std::size_t b = first; b <= last; ++b) {
          const double lo = std::max(piece.lo, grid.edge(b));
          const double hi = std::min(piece.hi, grid.edge(b + 1));
          if (hi > lo) columns[b].push_back({c, cifs.prob(k) * (hi - lo) / (grid.edge(b + 1) - grid.edge(b))});
        }
      }
    }
  }
  const double kept = 1.0 - cifs.tail_mass();
  for (auto& col : columns) {
    double s = 0.0;
    for (const auto& e : col) s += e.second;
    if (std::abs(s - kept) > 1e-9) throw std::logic_error("collapsed transfer lost mass in a source bin");
    for (auto& e : col) e.second /= s;
  }

  std::vector<double> nu(bins, 1.0 / static_cast<double>(bins));
  std::vector<double> next(bins);
  for (std::size_t it = 1; it <= max_iter; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t b = 0; b < bins; ++b) {
      if (nu[b] == 0.0) continue;
      for (const auto& [c, w] : columns[b]) next[c] += nu[b] * w;
    }
    double l1 = 0.0;
    for (std::size_t b = 0; b < bins; ++b) l1 += std::abs(next[b] - nu[b]);
    nu.swap(next);
    out.iterations = it;
    out.residual = 0.5 * l1;
    if (out.residual <= tol) {
      out.converged = true;
      break;
    }
  }
  out.binned = BinnedDistribution{grid, std::move(nu)};
  return out;
}

LimitDistribution lift_stationary(const ImpulseSystem& sys, const CollapsedStationary& nu_tilde, const GridSpec& grid,
                                  std::size_t states) {
  if (!(grid.domain() == sys.domain())) throw InvalidArgument("grid and system live on different domains");
  const auto& t = sys.times();
  std::size_t inner = 1;
  if (t.kind() == ImpulseTimeDistribution::Kind::kCustom) {
    inner = std::max<std::size_t>(1, t.head_size());
  } else if (const auto top = t.max_support()) {
    inner = std::max<std::size_t>(1, *top);
  } else {
    while (t.survival(inner) >= kLiftTail && inner < 100000) ++inner;
  }
  const double norm = 1.0 + t.mean();

  // V[j][c] = nu~(f^{-(j+1)}(bin c)), shared by every state.
  std::vector<std::vector<double>> V(inner, std::vector<double>(grid.bins(), 0.0));
  for (std::size_t c = 0; c < grid.bins(); ++c) {
    std::vector<Interval> set{grid.bin(c)};
    for (std::size_t j = 0; j < inner; ++j) {
      set = preimage(sys.f(), set, Closure::kRightOpen);
      if (set.size() > kMaxPieces) throw UnsupportedMap("preimage of a bin splits into too many pieces");
      if (set.empty()) break;
      V[j][c] = nu_tilde.mass(set);
    }
  }

  ProductMeasure mu(grid, states);
  for (std::size_t c = 0; c < grid.bins(); ++c) {
    const std::array<Interval, 1> bin{grid.bin(c)};
    mu.at(0, c) = nu_tilde.mass(bin) / norm;
  }
  for (State k = 1; k < states; ++k) {
    for (std::size_t j = 0; j < inner; ++j) {
      const double w = t.pmf(k + j) / norm;
      if (w == 0.0) continue;
      for (std::size_t c = 0; c < grid.bins(); ++c) mu.at(k, c) += w * V[j][c];
    }
  }
  const auto w = mu.weights();
  mu.set_tail_mass(std::max(0.0, 1.0 - std::accumulate(w.begin(), w.end(), 0.0)));
  LimitDistribution ld{mu, space_marginal(mu), std::nullopt};
  return ld;
}

double fixed_point_residual(const ImpulseSystem& sys, const LimitDistribution& ld) {
  const auto next = apply_T(sys, ld.mu_star);
  double l1 = std::abs(next.tail_mass() - ld.mu_star.tail_mass());
  const auto a = next.weights();
  const auto b = ld.mu_star.weights();
  for (std::size_t i = 0; i < a.size(); ++i) l1 += std::abs(a[i] - b[i]);
  return 0.5 * l1;
}

ImpulseSystem example_system() {
  const IntervalDomain d(0.0, 2.0);
  const std::array<std::pair<double, double>, 3> clipped{{{0.0, 1.0}, {1.0, 2.0}, {2.0, 2.0}}};
  auto f = IntervalMap::piecewise_linear(d, clipped).set_name("min(x+1,2)");
  auto g = IntervalMap::affine(d, 0.5, 0.0).set_name("x/2");
  return ImpulseSystem(std::move(f), std::move(g), ImpulseTimeDistribution::bernoulli(0.5));
}

}  // namespace impulse
