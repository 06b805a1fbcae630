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

#include "impulse/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"

namespace impulse {
namespace {

double initial_position(const IntervalDomain& d, const InitialCondition& init, RngStream& rng) {
  if (const auto* p = std::get_if<PointStart>(&init)) return d.clamp(p->x);
  return d.lo() + d.width() * rng.uniform();
}

// Simpson's rule for |c - F| on [a, b].
double abs_gap_integral(double c, const CdfFunction& cdf, double a, double b) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  return (b - a) / 6.0 * (std::abs(c - cdf(a)) + 4.0 * std::abs(c - cdf(m)) + std::abs(c - cdf(b)));
}

}  // namespace

ZState step(const ImpulseSystem& sys, ZState z, RngStream& rng) {
  const State next = z.countdown > 0 ? z.countdown - 1 : sys.times().sample(rng);
  return {next, sys.map_for(next)(z.x)};
}

Trajectory simulate_trajectory(const ImpulseSystem& sys, double x0, std::size_t steps, std::uint64_t seed,
                               std::uint64_t stream, StartLaw start) {
  RngStream rng(seed, stream);
  Trajectory t{.points = {}, .seed = seed, .stream = stream};
  t.points.reserve(steps + 1);
  double x = sys.domain().clamp(x0);
  State k = start == StartLaw::kStationary ? sys.times().sample_stationary(rng) : sys.times().sample(rng);
  for (std::size_t n = 0; n <= steps; ++n) {
    t.points.push_back({k, x});
    if (n == steps) break;
    // step() advances (F_{n-1}, X_n) -> (F_n, X_{n+1}); here F_n is already
    // known, so apply its map and then draw F_{n+1}.
    x = sys.map_for(k)(x);
    k = k > 0 ? k - 1 : sys.times().sample(rng);
  }
  return t;
}

std::vector<double> apply_impulse_times(const ImpulseSystem& sys, double x0, std::span<const State> times,
                                        std::size_t steps) {
  std::vector<double> xs{sys.domain().clamp(x0)};
  std::size_t next_time = 0;
  auto draw = [&]() -> State {
    if (next_time >= times.size()) throw InvalidArgument("prescribed impulse times ran out");
    return times[next_time++];
  };
  State k = steps > 0 ? draw() : 0;
  for (std::size_t n = 0; n < steps; ++n) {
    xs.push_back(sys.map_for(k)(xs.back()));
    if (n + 1 < steps) k = k > 0 ? k - 1 : draw();
  }
  return xs;
}

EmpiricalCDF::EmpiricalCDF(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw InvalidArgument("empirical CDF needs at least one sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCDF::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCDF::left_limit(double x) const {
  const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

EmpiricalCDF simulate_ensemble(const ImpulseSystem& sys, const InitialCondition& init, const EnsembleOptions& opts) {
  if (opts.count < 1) throw InvalidArgument("ensemble count must be at least 1");
  std::vector<double> finals(opts.count);
  detail::parallel_for(opts.count, opts.threads, [&](std::size_t i) {
    RngStream rng(opts.seed, i);
    double x = initial_position(sys.domain(), init, rng);
    State k = opts.start == StartLaw::kStationary ? sys.times().sample_stationary(rng) : sys.times().sample(rng);
    for (std::size_t n = 0; n < opts.steps; ++n) {
      x = sys.map_for(k)(x);
      k = k > 0 ? k - 1 : sys.times().sample(rng);
    }
    finals[i] = x;
  });
  return EmpiricalCDF(std::move(finals));
}

EmpiricalCDF simulate_iid_ensemble(const IntervalMap& f, const IntervalMap& g, double prob_f,
                                   const InitialCondition& init, const EnsembleOptions& opts) {
  if (opts.count < 1) throw InvalidArgument("ensemble count must be at least 1");
  if (!(prob_f >= 0.0 && prob_f <= 1.0)) throw InvalidArgument("prob_f must lie in [0, 1]");
  std::vector<double> finals(opts.count);
  detail::parallel_for(opts.count, opts.threads, [&](std::size_t i) {
    RngStream rng(opts.seed, i);
    double x = initial_position(f.domain(), init, rng);
    for (std::size_t n = 0; n < opts.steps; ++n) x = rng.uniform() < prob_f ? f(x) : g(x);
    finals[i] = x;
  });
  return EmpiricalCDF(std::move(finals));
}

double ks_distance(const EmpiricalCDF& e, const CdfFunction& cdf) {
  const auto xs = e.sorted();
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < xs.size()) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    const double v = xs[i];
    const double below = static_cast<double>(i) / n;
    const double at = static_cast<double>(j) / n;
    d = std::max(d, std::abs(at - cdf(v)));
    d = std::max(d, std::abs(below - cdf(std::nextafter(v, -INFINITY))));
    i = j;
  }
  return d;
}

double ks_two_sample(const EmpiricalCDF& a, const EmpiricalCDF& b) {
  const auto xa = a.sorted();
  const auto xb = b.sorted();
  const double na = static_cast<double>(xa.size());
  const double nb = static_cast<double>(xb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < xa.size() || j < xb.size()) {
    const double v = j >= xb.size() || (i < xa.size() && xa[i] <= xb[j]) ? xa[i] : xb[j];
    while (i < xa.size() && xa[i] == v) ++i;
    while (j < xb.size() && xb[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double wasserstein1(const EmpiricalCDF& e, const CdfFunction& cdf, const IntervalDomain& domain,
                    std::size_t grid_bins) {
  if (grid_bins < 1) throw InvalidArgument("grid_bins must be positive");
  std::vector<double> cuts;
  cuts.reserve(grid_bins + 1 + e.size());
  for (std::size_t k = 0; k <= grid_bins; ++k) {
    cuts.push_back(domain.lo() + domain.width() * static_cast<double>(k) / static_cast<double>(grid_bins));
  }
  for (double x : e.sorted()) cuts.push_back(std::clamp(x, domain.lo(), domain.hi()));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) total += abs_gap_integral(e(cuts[k]), cdf, cuts[k], cuts[k + 1]);
  return total;
}

ConditionalEstimate conditional_probability_estimate(const ImpulseSystem& sys, double x0,
                                                     const ConditionalQuery& query, std::size_t events,
                                                     std::uint64_t seed, std::size_t max_trials) {
  if (query.history < 1 || !query.condition || !query.target) throw InvalidArgument("incomplete conditional query");
  ConditionalEstimate out;
  std::size_t hits = 0;
  std::vector<double> history(query.history);
  while (out.events < events && out.trials < max_trials) {
    RngStream rng(seed, out.trials++);
    double x = sys.domain().clamp(x0);
    State k = sys.times().sample(rng);
    for (std::size_t n = 0; n < query.history; ++n) {
      x = sys.map_for(k)(x);
      k = k > 0 ? k - 1 : sys.times().sample(rng);
      history[n] = x;
    }
    if (!query.condition(history)) continue;
    ++out.events;
    if (query.target(sys.map_for(k)(x))) ++hits;
  }
  if (out.events == 0) return out;
  out.conclusive = true;
  const double n = static_cast<double>(out.events);
  out.probability = static_cast<double>(hits) / n;
  out.standard_error = std::sqrt(out.probability * (1.0 - out.probability) / n);
  return out;
}

std::function<bool(double)> near(double value) {
  return [value](double x) { return std::abs(x - value) <= 1e-9; };
}

}  // namespace impulse
