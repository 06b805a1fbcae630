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

#include <boost/rational.hpp>
#include <gtest/gtest.h>

#include "impulse/operator.hpp"
#include "impulse/stationary.hpp"

namespace impulse {
namespace {

using Q = boost::rational<long long>;

const IntervalDomain kUnit(0.0, 1.0);

TEST(ExampleCdfTest, ExactValues) {
  EXPECT_EQ(example_cdf(Q(1, 2)), Q(1, 3));
  EXPECT_EQ(example_cdf(Q(3, 2)), Q(5, 6));
  EXPECT_EQ(example_cdf(Q(0)), Q(0));
  EXPECT_EQ(example_cdf(Q(2)), Q(1));
  EXPECT_EQ(example_cdf(Q(-1)), Q(0));
  EXPECT_EQ(example_cdf(Q(3)), Q(1));
  EXPECT_EQ(example_cdf(Q(1)), Q(2, 3));
}

TEST(ExampleCdfTest, IsACdf) {
  const Q h(1, 1000000);
  Q prev = example_cdf(Q(-2));
  for (int i = -20; i <= 60; ++i) {
    const Q a(i, 20);
    const Q v = example_cdf(a);
    EXPECT_GE(v, prev);
    EXPECT_GE(v, Q(0));
    EXPECT_LE(v, Q(1));
    // right-continuous: slopes are at most 2/3, so no jump to the right of a
    EXPECT_LE(example_cdf(a + h) - v, h);
    prev = v;
  }
  // the two linear pieces meet at 1 without a jump
  EXPECT_EQ(example_cdf(Q(1)) - example_cdf(Q(1) - h), Q(2, 3) * h);
}

TEST(CollapsedTest, FinalExampleCollapsedLawIsUniform) {
  const auto sys = example_system();
  const CollapsedIFS cifs(sys);
  EXPECT_EQ(cifs.size(), 2u);
  EXPECT_EQ(cifs.absorbing(), (Interval{0.0, 1.0}));
  EXPECT_DOUBLE_EQ(cifs(0, 0.6), 0.3);
  EXPECT_DOUBLE_EQ(cifs(1, 0.6), 0.8);
  const auto nu = collapsed_stationary(cifs, 512, 1000, 1e-14);
  ASSERT_TRUE(nu.converged);
  ASSERT_TRUE(nu.binned.has_value());
  EXPECT_LE(sup_cdf_distance(*nu.binned, [](double x) { return std::clamp(x, 0.0, 1.0); }), 1e-12);
}

TEST(CollapsedTest, ConstantImpulseGivesAtom) {
  const ImpulseSystem sys(IntervalMap::logistic(3.5), IntervalMap::constant(kUnit, 0.3),
                          ImpulseTimeDistribution::bernoulli(0.5));
  const auto nu = collapsed_stationary(CollapsedIFS(sys), 128, 100, 1e-12);
  ASSERT_TRUE(nu.atom.has_value());
  EXPECT_DOUBLE_EQ(*nu.atom, 0.3);
  EXPECT_DOUBLE_EQ(nu.cdf(0.29), 0.0);
  EXPECT_DOUBLE_EQ(nu.cdf(0.3), 1.0);
}

TEST(LiftTest, FinalExampleStateRows) {
  const auto sys = example_system();
  const CollapsedIFS cifs(sys);
  const auto nu = collapsed_stationary(cifs, 1024, 1000, 1e-14);
  const GridSpec grid(sys.domain(), 1024);
  const auto ld = lift_stationary(sys, nu, grid, 2);
  // state 0 carries (2/3) uniform on [0, 1]; state 1 carries (1/3) uniform pushed by f onto [1, 2]
  EXPECT_NEAR(ld.mu_star.mass(0, {0.0, 0.5}), 1.0 / 3, 1e-12);
  EXPECT_NEAR(ld.mu_star.mass(0, {1.0, 2.0}), 0.0, 1e-12);
  EXPECT_NEAR(ld.mu_star.mass(1, {1.0, 1.5}), 1.0 / 6, 1e-12);
  EXPECT_NEAR(ld.mu_star.mass(1, {0.0, 1.0}), 0.0, 1e-12);
  EXPECT_LE(sup_cdf_distance(ld.nu, example_cdf<double>), 1e-12);
  EXPECT_LE(fixed_point_residual(sys, ld), 0.005);
}

TEST(LiftTest, DegenerateLivesOnStateZero) {
  const ImpulseSystem sys(IntervalMap::identity(kUnit), IntervalMap::affine(kUnit, 0.5, 0.0),
                          ImpulseTimeDistribution::degenerate());
  const auto nu = collapsed_stationary(CollapsedIFS(sys), 64, 200, 1e-14);
  const GridSpec grid(kUnit, 64);
  const auto ld = lift_stationary(sys, nu, grid, 1);
  EXPECT_NEAR(ld.mu_star.at(0, 0), 1.0, 1e-9);
  EXPECT_LE(fixed_point_residual(sys, ld), 1.0 / 64);
}

std::vector<ImpulseSystem> LiftSystems() {
  const auto base = example_system();
  return {base,
          ImpulseSystem(base.f(), base.g(), ImpulseTimeDistribution::geometric(0.5)),
          ImpulseSystem(base.f(), base.g(), ImpulseTimeDistribution::finite({0.2, 0.3, 0.1, 0.4})),
          ImpulseSystem(IntervalMap::affine(kUnit, 0.5, 0.5), IntervalMap::affine(kUnit, 0.3, 0.0),
                        ImpulseTimeDistribution::geometric(0.7))};
}

TEST(LiftPropertyTest, StateMarginalIsStationary) {
  for (const auto& sys : LiftSystems()) {
    const CollapsedIFS cifs(sys);
    const auto nu = collapsed_stationary(cifs, 256, 2000, 1e-13);
    const std::size_t K = std::min<std::size_t>(sys.times().default_truncation(), 40);
    const auto ld = lift_stationary(sys, nu, GridSpec(sys.domain(), 256), K);
    const auto m = state_marginal(ld.mu_star);
    for (State k = 0; k < K; ++k) EXPECT_NEAR(m[k], sys.times().stationary_weight(k), 1e-10) << k;
  }
}

TEST(LiftPropertyTest, LiftAgreesWithOperatorLimit) {
  for (const auto& sys : LiftSystems()) {
    const std::size_t B = 512;
    const GridSpec grid(sys.domain(), B);
    const std::size_t K = sys.times().default_truncation();
    const auto nu = collapsed_stationary(CollapsedIFS(sys), B, 5000, 1e-14);
    const auto ld = lift_stationary(sys, nu, grid, K);
    const MassSpec start[] = {UniformMass{0, sys.domain().interval(), 1.0}};
    // truncation leaks about survival(K) of the state-0 mass per step, so 1e-9 is the floor here
    const auto op = iterate_to_convergence(sys, discretize(start, grid, K), 2000, 1e-9);
    ASSERT_TRUE(op.converged) << sys.times().describe() << " last delta " << op.diagnostics.back().sup_cdf_delta;
    // both sides are exact up to one bin of smearing per discontinuity
    EXPECT_LE(sup_cdf_distance(ld.nu, space_marginal(op.measure)), 2.0 / static_cast<double>(B)) << sys.times().describe();
  }
}

}  // namespace
}  // namespace impulse
