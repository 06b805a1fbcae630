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

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "impulse/simulate.hpp"
#include "impulse/stationary.hpp"

namespace impulse {
namespace {

const IntervalDomain kUnit(0.0, 1.0);

ImpulseSystem ConstantSystem(ImpulseTimeDistribution t) {
  return ImpulseSystem(IntervalMap::constant(kUnit, 1.0), IntervalMap::constant(kUnit, 0.0), std::move(t));
}

TEST(SimulateTest, StepCountdown) {
  const auto sys = ConstantSystem(ImpulseTimeDistribution::finite({0.3, 0.3, 0.4}));
  RngStream rng(1);
  // k = 1 applies f_0 = g
  auto z = step(sys, {1, 0.7}, rng);
  EXPECT_EQ(z.countdown, 0u);
  EXPECT_DOUBLE_EQ(z.x, 0.0);
  z = step(sys, {3, 0.2}, rng);
  EXPECT_EQ(z.countdown, 2u);
  EXPECT_DOUBLE_EQ(z.x, 1.0);
}

TEST(SimulateTest, DegenerateAlwaysImpulses) {
  const ImpulseSystem sys(IntervalMap::identity(kUnit), IntervalMap::affine(kUnit, 0.5, 0.0),
                          ImpulseTimeDistribution::degenerate());
  RngStream rng(2);
  ZState z{0, 0.8};
  for (int i = 0; i < 10; ++i) {
    const double before = z.x;
    z = step(sys, z, rng);
    EXPECT_EQ(z.countdown, 0u);
    EXPECT_DOUBLE_EQ(z.x, before / 2);
  }
}

TEST(SimulateTest, TrajectoryDeterministic) {
  const auto sys = example_system();
  const auto a = simulate_trajectory(sys, 0.3, 500, 7);
  const auto b = simulate_trajectory(sys, 0.3, 500, 7);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    EXPECT_EQ(a.points[i].countdown, b.points[i].countdown);
    EXPECT_EQ(a.points[i].x, b.points[i].x);
  }
  const auto c = simulate_trajectory(sys, 0.3, 500, 8);
  bool differs = false;
  for (std::size_t i = 0; i < a.points.size(); ++i) differs |= a.points[i].x != c.points[i].x;
  EXPECT_TRUE(differs);
}

TEST(SimulateTest, TrajectoryInvariants) {
  const ImpulseSystem sys(IntervalMap::logistic(3.9), IntervalMap::affine(kUnit, 0.25, 0.1),
                          ImpulseTimeDistribution::geometric(0.8));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto t = simulate_trajectory(sys, 0.5, 400, seed);
    for (std::size_t n = 0; n + 1 < t.points.size(); ++n) {
      const auto& p = t.points[n];
      const auto& q = t.points[n + 1];
      EXPECT_TRUE(kUnit.contains(q.x));
      if (p.countdown >= 1) {
        EXPECT_EQ(q.countdown, p.countdown - 1);
      }
      EXPECT_DOUBLE_EQ(q.x, sys.map_for(p.countdown)(p.x));
    }
  }
}

TEST(SimulateTest, ApplyImpulseTimes) {
  const auto sys = example_system();
  // times (1, 0): F_0 = 1 -> f, then 0 -> g, then draw 0 -> g
  const State times[] = {1, 0};
  const auto xs = apply_impulse_times(sys, 0.5, times, 3);
  ASSERT_EQ(xs.size(), 4u);
  EXPECT_DOUBLE_EQ(xs[1], 1.5);
  EXPECT_DOUBLE_EQ(xs[2], 0.75);
  EXPECT_DOUBLE_EQ(xs[3], 0.375);
  EXPECT_THROW(apply_impulse_times(sys, 0.5, times, 10), InvalidArgument);
}

TEST(SimulateTest, EnsembleSinglePointAndSupport) {
  const auto sys = ConstantSystem(ImpulseTimeDistribution::finite({0.3, 0.3, 0.4}));
  const auto one = simulate_ensemble(sys, PointStart{0.5}, {10, 1, 4, 1});
  EXPECT_EQ(one.size(), 1u);
  const auto many = simulate_ensemble(sys, PointStart{0.5}, {10, 2000, 4, 1});
  const std::set<double> values(many.sorted().begin(), many.sorted().end());
  EXPECT_EQ(values, (std::set<double>{0.0, 1.0}));
}

TEST(SimulateTest, EnsembleIndependentOfThreads) {
  const auto sys = example_system();
  const auto a = simulate_ensemble(sys, UniformStart{}, {200, 5000, 17, 1});
  const auto b = simulate_ensemble(sys, UniformStart{}, {200, 5000, 17, 4});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.sorted()[i], b.sorted()[i]);
}

TEST(SimulateTest, KsDistance) {
  const auto u = [](double x) { return std::clamp(x, 0.0, 1.0); };
  EXPECT_NEAR(ks_distance(EmpiricalCDF({0.5}), u), 0.5, 1e-15);
  const EmpiricalCDF e({0.1, 0.4, 0.4, 0.9});
  EXPECT_DOUBLE_EQ(ks_distance(e, [&](double x) { return e(x); }), 0.0);
  EXPECT_DOUBLE_EQ(ks_two_sample(e, e), 0.0);

  RngStream rng(4);
  std::vector<double> xs(100000);
  for (auto& x : xs) x = rng.uniform();
  // DKW: P(D > 0.01) <= 2 exp(-2 * 1e5 * 1e-4) ~ 4e-9
  EXPECT_LE(ks_distance(EmpiricalCDF(xs), u), 0.01);
  EXPECT_LE(wasserstein1(EmpiricalCDF(xs), u, kUnit), 0.005);
}

TEST(SimulateTest, Wasserstein) {
  const auto u = [](double x) { return std::clamp(x, 0.0, 1.0); };
  // point mass at 0 against uniform: integral of x over [0, 1]
  EXPECT_NEAR(wasserstein1(EmpiricalCDF({0.0}), u, kUnit), 0.5, 1e-6);
}

TEST(SimulateTest, FinalExampleEnsembleMatchesClosedForm) {
  const auto e = simulate_ensemble(example_system(), UniformStart{}, {200, 80000, 20260415, 1});
  EXPECT_LE(ks_distance(e, example_cdf<double>), 0.02);
}

TEST(SimulateTest, NonMarkovConditionals) {
  const auto sys = ConstantSystem(ImpulseTimeDistribution::finite({0.3, 0.3, 0.4}));
  ConditionalQuery q1{2, [](std::span<const double> h) { return h[0] == 0.0 && h[1] == 1.0; }, near(0.0)};
  const auto a = conditional_probability_estimate(sys, 0.5, q1, 20000, 1, 2000000);
  ASSERT_TRUE(a.conclusive);
  EXPECT_NEAR(a.probability, 3.0 / 7.0, 4.0 * std::sqrt(3.0 / 7.0 * 4.0 / 7.0 / 20000.0));

  ConditionalQuery q2{2, [](std::span<const double> h) { return h[0] == 1.0 && h[1] == 1.0; }, near(0.0)};
  const auto b = conditional_probability_estimate(sys, 0.5, q2, 20000, 2, 2000000);
  ASSERT_TRUE(b.conclusive);
  EXPECT_DOUBLE_EQ(b.probability, 1.0);
}

TEST(SimulateTest, ImpossibleConditionInconclusive) {
  const auto sys = ConstantSystem(ImpulseTimeDistribution::finite({0.3, 0.3, 0.4}));
  ConditionalQuery q{1, [](std::span<const double> h) { return h[0] == 0.5; }, near(0.0)};
  const auto r = conditional_probability_estimate(sys, 0.5, q, 10, 1, 5000);
  EXPECT_FALSE(r.conclusive);
  EXPECT_EQ(r.events, 0u);
}

TEST(SimulateTest, GeometricTimesMatchIidSystem) {
  const auto base = example_system();
  const ImpulseSystem sys(base.f(), base.g(), ImpulseTimeDistribution::geometric(0.5));
  const auto a = simulate_ensemble(sys, UniformStart{}, {50, 100000, 21, 1});
  const auto b = simulate_iid_ensemble(base.f(), base.g(), 0.5, UniformStart{}, {50, 100000, 22, 1});
  EXPECT_LE(ks_two_sample(a, b), 0.01);
}

}  // namespace
}  // namespace impulse
