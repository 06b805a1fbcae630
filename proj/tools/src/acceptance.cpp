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

#include "impulse_tools/acceptance.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <boost/rational.hpp>

#include "impulse/operator.hpp"
#include "impulse/simulate.hpp"
#include "impulse/stability.hpp"
#include "impulse/stationary.hpp"

namespace impulse::tools {
namespace {

using Clock = std::chrono::steady_clock;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

ImpulseSystem example3_system() {
  const IntervalDomain d(0.0, 2.0);
  const double r = std::sqrt(2.0);
  return ImpulseSystem(IntervalMap::affine(d, 1.0 - r / 2.0, r), IntervalMap::power(d, 0.5),
                       ImpulseTimeDistribution::geometric(0.5));
}

ImpulseSystem example_with_geometric_times() {
  const auto ref = example_system();
  return ImpulseSystem(ref.f(), ref.g(), ImpulseTimeDistribution::geometric(0.5));
}

// 1: exact rational evaluation of the limit distribution function.
bool c1(std::string& detail) {
  using Q = boost::rational<long long>;
  const std::array<std::pair<Q, Q>, 6> cases{{{Q(1, 2), Q(1, 3)},
                                              {Q(3, 2), Q(5, 6)},
                                              {Q(0), Q(0)},
                                              {Q(2), Q(1)},
                                              {Q(-1), Q(0)},
                                              {Q(3), Q(1)}}};
  bool ok = true;
  std::ostringstream os;
  for (const auto& [a, want] : cases) {
    const Q got = example_cdf(a);
    ok = ok && got == want;
    os << "F(" << a << ")=" << got << ' ';
  }
  detail = os.str();
  return ok;
}

// 2: ensemble ECDF against the closed form.
bool c2(const AcceptanceOptions& o, std::string& detail) {
  const auto sys = example_system();
  EnsembleOptions e;
  e.steps = 200;
  e.seed = o.seed;
  e.threads = o.threads;
  e.count = 80000;
  const double ks_large = ks_distance(simulate_ensemble(sys, UniformStart{}, e), example_cdf<double>);
  e.count = 1000;
  const double ks_small = ks_distance(simulate_ensemble(sys, UniformStart{}, e), example_cdf<double>);
  detail = "KS(80000)=" + num(ks_large) + " <= 0.02, KS(1000)=" + num(ks_small) + " <= 0.06";
  return ks_large <= 0.02 && ks_small <= 0.06;
}

// 3: operator iteration against the closed form.
bool c3(std::string& detail) {
  const auto sys = example_system();
  const GridSpec grid(sys.domain(), 1024);
  const std::array<MassSpec, 1> start{UniformMass{0, {0.0, 2.0}, 1.0}};
  std::size_t first = 0;
  double final_dist = 1.0;
  iterate_to_convergence(sys, discretize(start, grid, 2), 200, 0.0, [&](std::size_t n, const ProductMeasure& mu) {
    final_dist = sup_cdf_distance(space_marginal(mu), example_cdf<double>);
    if (first == 0 && final_dist <= 0.01) first = n;
  });
  detail = "sup-CDF <= 0.01 first at n=" + std::to_string(first) + ", at n=200: " + num(final_dist);
  return first != 0 && first <= 200;
}

// 4: two-constant thresholds at the listed means.
bool c4(std::string& detail) {
  struct Case {
    const char* label;
    double L0, L1;
    bool (*expected)(double);
  };
  const std::array<Case, 2> cases{{{"(1/8,8) E>1", 0.125, 8.0, [](double E) { return E > 1.0; }},
                                   {"(8,1/8) E<1", 8.0, 0.125, [](double E) { return E < 1.0; }}}};
  bool ok = true;
  std::ostringstream os;
  for (const auto& c : cases) {
    os << c.label << ":";
    for (double E : {0.5, 0.999, 1.001, 2.0}) {
      const auto r = average_contraction(c.L0, c.L1, E);
      const bool match = r.satisfied == c.expected(E);
      ok = ok && match;
      os << ' ' << E << (r.satisfied ? "=sat" : "=unsat") << (match ? "" : "(!)");
    }
    os << " [" << describe(mean_threshold(c.L0, c.L1)) << "]; ";
  }
  detail = os.str();
  return ok;
}

// 5: both certificate routes on the square-root system.
bool c5(std::string& detail) {
  const auto sys = example3_system();
  const auto search = find_splitting(sys, 32);
  const auto fixed = fixed_point_splitting(sys);
  const bool search_ok = search && validate_certificate(sys, *search).ok;
  const bool fixed_ok = fixed.certificate && validate_certificate(sys, *fixed.certificate).ok;
  std::ostringstream os;
  if (search) os << "search: len " << std::max(search->seq_a.size(), search->seq_b.size()) << " gap " << num(search->gap);
  else os << "search: none";
  if (fixed.certificate) os << "; fixed-point: n=" << fixed.n << " gap " << num(fixed.certificate->gap);
  else os << "; fixed-point: " << fixed.diagnostic;
  detail = os.str();
  return search_ok && fixed_ok;
}

// Random piecewise-linear self-map of [0,1] with 1..3 interior breakpoints.
IntervalMap random_map(RngStream& rng) {
  const IntervalDomain d(0.0, 1.0);
  const std::size_t pieces = 1 + static_cast<std::size_t>(rng.uniform() * 3.0);
  std::vector<double> xs{0.0, 1.0};
  for (std::size_t i = 1; i < pieces; ++i) xs.push_back(0.05 + 0.9 * rng.uniform());
  std::sort(xs.begin(), xs.end());
  std::vector<std::pair<double, double>> table;
  for (double x : xs) table.push_back({x, rng.uniform()});
  return IntervalMap::piecewise_linear(d, table);
}

ImpulseTimeDistribution random_times(RngStream& rng, std::size_t& K) {
  if (rng.uniform() < 0.3) {
    K = 2 + static_cast<std::size_t>(rng.uniform() * 5.0);  // 2..6
    return ImpulseTimeDistribution::geometric(0.2 + 0.6 * rng.uniform());
  }
  const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 6.0);  // support 0..n-1
  std::vector<double> probs(n);
  double total = 0.0;
  for (auto& p : probs) total += (p = 0.1 + rng.uniform());
  for (auto& p : probs) p /= total;
  double head = 0.0;
  for (std::size_t i = 1; i < n; ++i) head += probs[i];
  probs[0] = 1.0 - head;
  K = n;
  return ImpulseTimeDistribution::finite(probs);
}

// 6: path-sum oracle against iterated T.
bool c6(const AcceptanceOptions& o, std::string& detail) {
  RngStream rng(o.seed, 6);
  double worst = 0.0;
  std::size_t checks = 0;
  for (int sys_i = 0; sys_i < 20; ++sys_i) {
    std::size_t K = 1;
    auto times = random_times(rng, K);
    const ImpulseSystem sys(random_map(rng), random_map(rng), times);
    const std::size_t B = 4 + static_cast<std::size_t>(rng.uniform() * 29.0);  // 4..32
    const GridSpec grid(sys.domain(), B);
    ProductMeasure mu(grid, K);
    double total = 0.0;
    for (State j = 0; j < K; ++j) {
      for (auto& w : mu.row(j)) total += (w = rng.uniform() < 0.3 ? 0.0 : rng.uniform());
    }
    for (State j = 0; j < K; ++j) {
      for (auto& w : mu.row(j)) w /= total;
    }
    const TransferOperator op(sys, grid, K);
    ProductMeasure iter = mu;
    for (std::size_t n = 1; n <= 4; ++n) {
      iter = op.apply(iter);
      for (State j = 0; j < K; ++j) {
        for (int q = 0; q < 4; ++q) {
          Interval c = q == 0 ? grid.bin(static_cast<std::size_t>(rng.uniform() * static_cast<double>(B)))
                              : Interval::hull(rng.uniform(), rng.uniform());
          worst = std::max(worst, std::abs(n_step_direct(sys, mu, n, j, c) - iter.mass(j, c)));
          ++checks;
        }
      }
    }
  }
  detail = std::to_string(checks) + " comparisons, max |diff| = " + num(worst) + " <= 1e-12";
  return worst <= 1e-12;
}

// 7: state marginals approach m from three starts.
bool c7(std::string& detail) {
  bool ok = true;
  std::ostringstream os;
  for (const auto& sys : {example_system(), example_with_geometric_times()}) {
    const std::size_t K = sys.times().default_truncation();
    const GridSpec grid(sys.domain(), 256);
    const State high = std::min<State>(K - 1, 5);
    const std::array<MassSpec, 1> a{UniformMass{0, {0.0, 2.0}, 1.0}};
    const std::array<MassSpec, 1> b{PointMass{high, 1.7, 1.0}};
    const std::array<ProductMeasure, 3> starts{discretize(a, grid, K), discretize(b, grid, K),
                                               stationary_times_uniform(sys.times(), grid, K)};
    os << "K=" << K << ":";
    for (const auto& mu0 : starts) {
      const auto r = iterate_to_convergence(sys, mu0, 200, 0.0);
      const double tv = r.diagnostics.back().tv_state;
      ok = ok && tv <= 1e-6 && r.iterations == 200;
      os << ' ' << num(tv);
    }
    os << "; ";
  }
  detail = "TV at n=200 " + os.str() + "(<= 1e-6)";
  return ok;
}

// 8: time-reversal identities on random cylinders.
bool c8(const AcceptanceOptions& o, std::string& detail) {
  RngStream rng(o.seed, 8);
  const std::array<ImpulseTimeDistribution, 4> laws{
      ImpulseTimeDistribution::geometric(0.5), ImpulseTimeDistribution::geometric(0.85),
      ImpulseTimeDistribution::finite({0.3, 0.3, 0.4}), ImpulseTimeDistribution::finite({0.1, 0.0, 0.5, 0.0, 0.4})};
  double worst = 0.0;
  std::size_t positive = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto& law = laws[static_cast<std::size_t>(i) % laws.size()];
    const std::size_t len = 1 + static_cast<std::size_t>(rng.uniform() * 8.0);
    std::vector<State> symbols;
    if (i % 2 == 0) {
      symbols = sample_reversed_path(law, rng, len);
    } else {
      for (std::size_t k = 0; k < len; ++k) symbols.push_back(static_cast<State>(rng.uniform() * 5.0));
    }
    const Cylinder c(symbols);
    const double rev = cylinder_prob_reversed(law, c);
    worst = std::max(worst, std::abs(rev - cylinder_prob_forward(law, c.reversed())));
    if (rev > 0.0) ++positive;
  }
  double row_worst = 0.0;
  for (const auto& law : laws) {
    for (State i = 0; i < 40; ++i) {
      if (!(law.stationary_weight(i) > 0.0)) continue;
      double row = 0.0;
      for (State j = 0; j <= i + 2; ++j) row += reversed_prob(law, i, j);
      row_worst = std::max(row_worst, std::abs(row - 1.0));
    }
  }
  detail = "1000 cylinders (" + std::to_string(positive) + " positive), max |P-(c)-P(rev c)| = " + num(worst) +
           ", max |Q row - 1| = " + num(row_worst);
  return worst <= 1e-12 && row_worst <= 1e-12;
}

// 9: geometric impulse times against the i.i.d. two-map system.
bool c9(const AcceptanceOptions& o, std::string& detail) {
  const auto sys = example_with_geometric_times();
  EnsembleOptions e;
  e.steps = 50;
  e.count = 100000;
  e.threads = o.threads;
  e.seed = o.seed;
  const auto impulse_ecdf = simulate_ensemble(sys, UniformStart{}, e);
  e.seed = o.seed + 1;
  const auto iid_ecdf = simulate_iid_ensemble(sys.f(), sys.g(), 0.5, UniformStart{}, e);
  const double ks = ks_two_sample(impulse_ecdf, iid_ecdf);

  const GridSpec grid(sys.domain(), 1024);
  const std::size_t K = sys.times().default_truncation();
  const std::array<MassSpec, 1> start{UniformMass{0, {0.0, 2.0}, 1.0}};
  const TransferOperator op(sys, grid, K);
  ProductMeasure mu = discretize(start, grid, K);
  const PushPlan pf(sys.f(), grid);
  const PushPlan pg(sys.g(), grid);
  std::vector<double> nu(grid.bins(), 1.0 / static_cast<double>(grid.bins()));
  for (int n = 0; n < 50; ++n) {
    mu = op.apply(mu);
    std::vector<double> half(nu.size());
    for (std::size_t b = 0; b < nu.size(); ++b) half[b] = 0.5 * nu[b];
    std::vector<double> next(nu.size(), 0.0);
    pf.accumulate(half, next);
    pg.accumulate(half, next);
    nu = std::move(next);
  }
  const double op_dist = sup_cdf_distance(space_marginal(mu), BinnedDistribution{grid, nu});
  detail = "two-sample KS = " + num(ks) + " <= 0.01, operator sup-CDF = " + num(op_dist) + " <= 1e-3";
  return ks <= 0.01 && op_dist <= 1e-3;
}

// 10: lifted stationary measure is a fixed point of T.
bool c10(std::string& detail) {
  const auto sys = example_system();
  const CollapsedIFS cifs(sys);
  const auto nu_tilde = collapsed_stationary(cifs, 1024, 1000, 1e-14);
  auto residual = [&](std::size_t B) {
    const GridSpec grid(sys.domain(), B);
    return fixed_point_residual(sys, lift_stationary(sys, nu_tilde, grid, 2));
  };
  const double r1 = residual(1024);
  const double r2 = residual(2048);
  // Both grids resolve the limit exactly, so the residual sits at rounding
  // level and the ratio carries no information; that case is reported as such.
  constexpr double kFloor = 1e-14;
  const bool at_floor = r1 <= kFloor && r2 <= kFloor;
  const double ratio = r1 > 0.0 ? r2 / r1 : 0.0;
  const bool trend = at_floor || (r1 > 0.0 && ratio <= 0.7);
  std::ostringstream os;
  os << "residual(1024)=" << num(r1) << " <= 0.005, residual(2048)=" << num(r2);
  if (at_floor) os << ", both at rounding floor (ratio undefined)";
  else os << ", ratio=" << num(ratio) << " <= 0.7";
  os << "; misaligned-grid sup-CDF:";
  for (std::size_t B : {1023, 2047, 4095}) {
    const GridSpec grid(sys.domain(), B);
    os << ' ' << B << "->" << num(sup_cdf_distance(lift_stationary(sys, nu_tilde, grid, 2).nu, example_cdf<double>));
  }
  detail = os.str();
  return r1 <= 0.005 && trend;
}

// 11: reversed paths synchronize; the identity control never does.
bool c11(const AcceptanceOptions& o, std::string& detail) {
  const auto sys = example_system();
  const auto r = synchronization_test(sys, 1000, 200, 1e-6, o.seed, o.threads);
  const IntervalDomain d = sys.domain();
  const ImpulseSystem control(IntervalMap::identity(d), IntervalMap::identity(d), sys.times());
  const auto rc = synchronization_test(control, 1000, 200, 1e-6, o.seed, o.threads);
  detail = "fraction=" + num(r.fraction) + " >= 0.99, identity control=" + num(rc.fraction) + " == 0";
  if (r.mean_log_lipschitz) detail += ", mean log L=" + num(*r.mean_log_lipschitz);
  return r.fraction >= 0.99 && rc.fraction == 0.0;
}

// 12: conditional frequencies of the constant-map system.
bool c12(const AcceptanceOptions& o, std::string& detail) {
  const IntervalDomain d(0.0, 1.0);
  const ImpulseSystem sys(IntervalMap::constant(d, 1.0), IntervalMap::constant(d, 0.0),
                          ImpulseTimeDistribution::finite({0.3, 0.3, 0.4}));
  auto run = [&](double first, double expected, std::uint64_t salt) {
    ConditionalQuery q;
    q.history = 2;
    const auto is_first = near(first);
    const auto is_one = near(1.0);
    q.condition = [=](std::span<const double> h) { return is_first(h[0]) && is_one(h[1]); };
    q.target = near(0.0);
    const auto est = conditional_probability_estimate(sys, 0.5, q, 100000, o.seed + salt, 10000000);
    const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(est.events));
    const bool ok = est.conclusive && est.events == 100000 && std::abs(est.probability - expected) <= 3.0 * se;
    return std::make_pair(ok, num(est.probability) + " vs " + num(expected) + " (3 SE = " + num(3.0 * se) + ")");
  };
  const auto [ok1, d1] = run(0.0, 3.0 / 7.0, 12);
  const auto [ok2, d2] = run(1.0, 1.0, 13);
  detail = "P(X3=0|X2=1,X1=0)=" + d1 + "; P(X3=0|X2=1,X1=1)=" + d2;
  return ok1 && ok2;
}

struct CriterionInfo {
  const char* name;
  double limit;
};

constexpr std::array<CriterionInfo, kCriteria> kInfo{{
    {"limit CDF closed form (exact rationals)", 1.0},
    {"ensemble ECDF vs limit CDF", 10.0},
    {"operator iteration vs limit CDF", 5.0},
    {"two-constant contraction thresholds", 1.0},
    {"splitting certificates, sqrt system", 5.0},
    {"path-sum oracle vs iterated T", 30.0},
    {"state marginal convergence to m", 10.0},
    {"reversed-chain identities", 1.0},
    {"geometric times vs i.i.d. system", 30.0},
    {"lifted measure fixed-point residual", 10.0},
    {"synchronization of reversed paths", 10.0},
    {"non-Markov conditional frequencies", 10.0},
}};

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
  if (id < 1 || id > kCriteria) throw InvalidArgument("criterion id must lie in [1, 12]");
  CriterionResult r;
  r.id = id;
  r.name = kInfo[static_cast<std::size_t>(id - 1)].name;
  r.limit_seconds = kInfo[static_cast<std::size_t>(id - 1)].limit;
  const auto t0 = Clock::now();
  bool ok = false;
  try {
    switch (id) {
      case 1: ok = c1(r.detail); break;
      case 2: ok = c2(opts, r.detail); break;
      case 3: ok = c3(r.detail); break;
      case 4: ok = c4(r.detail); break;
      case 5: ok = c5(r.detail); break;
      case 6: ok = c6(opts, r.detail); break;
      case 7: ok = c7(r.detail); break;
      case 8: ok = c8(opts, r.detail); break;
      case 9: ok = c9(opts, r.detail); break;
      case 10: ok = c10(r.detail); break;
      case 11: ok = c11(opts, r.detail); break;
      case 12: ok = c12(opts, r.detail); break;
    }
  } catch (const std::exception& e) {
    r.detail = std::string("exception: ") + e.what();
    ok = false;
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.passed = ok && r.seconds < r.limit_seconds;
  if (ok && !r.passed) r.detail += " [over time limit]";
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriteria; ++id) {
    out.push_back(run_criterion(id, opts));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  char head[160];
  std::snprintf(head, sizeof head, "%s %2d  %-40s", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str());
  char tail[64];
  std::snprintf(tail, sizeof tail, " (%.2f s / %.0f s)", r.seconds, r.limit_seconds);
  return std::string(head) + " | " + r.detail + tail;
}

}  // namespace impulse::tools
