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
#include <random>

#include <gtest/gtest.h>

#include "impulse/stability.hpp"
#include "impulse/stationary.hpp"

namespace impulse {
namespace {

const IntervalDomain kUnit(0.0, 1.0);
const IntervalDomain kTwo(0.0, 2.0);

ImpulseSystem SqrtSystem(ImpulseTimeDistribution t = ImpulseTimeDistribution::geometric(0.5)) {
  const double r = std::sqrt(2.0);
  return ImpulseSystem(IntervalMap::affine(kTwo, 1.0 - r / 2.0, r), IntervalMap::power(kTwo, 0.5), std::move(t));
}

TEST(ContractionTest, ExpectationAndProduct) {
  const auto r = average_contraction(0.125, 8.0, 2.0);
  EXPECT_NEAR(r.expectation, (std::log(0.125) + 2.0 * std::log(8.0)) / 3.0, 1e-15);
  EXPECT_NEAR(r.product, 8.0, 1e-12);
  EXPECT_FALSE(r.satisfied);
  // L1 < L0^{-E}: 8 < 64
  EXPECT_NEAR(r.printed_threshold, 64.0, 1e-12);
  EXPECT_TRUE(r.printed_form_holds);
  EXPECT_FALSE(r.forms_agree);

  const auto s = average_contraction(8.0, 0.125, 0.5);
  EXPECT_FALSE(s.satisfied);
  EXPECT_TRUE(s.printed_form_holds);
}

TEST(ContractionTest, UnitConstantsNeverSatisfy) {
  for (double E : {0.1, 1.0, 7.0}) {
    const auto r = average_contraction(1.0, 1.0, E);
    EXPECT_DOUBLE_EQ(r.expectation, 0.0);
    EXPECT_FALSE(r.satisfied);
  }
}

TEST(ContractionTest, InvalidInputs) {
  EXPECT_THROW(average_contraction(-1.0, 1.0, 1.0), InvalidArgument);
  EXPECT_THROW(average_contraction(1.0, 1.0, -1.0), InvalidArgument);
  EXPECT_THROW(average_contraction(std::nan(""), 1.0, 1.0), InvalidArgument);
  EXPECT_THROW(mean_threshold(-1.0, 0.5), InvalidArgument);
}

TEST(ContractionTest, ZeroLipschitzIsContracting) {
  const auto r = average_contraction(0.0, 3.0, 2.0);
  EXPECT_TRUE(std::isinf(r.expectation) && r.expectation < 0);
  EXPECT_TRUE(r.satisfied);
}

TEST(MeanThresholdTest, Kinds) {
  auto t = mean_threshold(8.0, 0.125);
  EXPECT_EQ(t.kind, MeanThreshold::Kind::kAbove);
  EXPECT_NEAR(t.value, 1.0, 1e-15);
  t = mean_threshold(0.125, 8.0);
  EXPECT_EQ(t.kind, MeanThreshold::Kind::kBelow);
  EXPECT_NEAR(t.value, 1.0, 1e-15);
  EXPECT_EQ(mean_threshold(2.0, 2.0).kind, MeanThreshold::Kind::kNone);
  EXPECT_EQ(mean_threshold(1.0, 0.5).kind, MeanThreshold::Kind::kAny);
  EXPECT_EQ(describe(mean_threshold(0.125, 8.0)), "satisfied for E < 1");
}

TEST(ContractionPropertyTest, SatisfiedMatchesSignOfExpectation) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> logl(-5.0, 5.0), e(0.01, 10.0);
  int checked = 0;
  for (int i = 0; i < 10000; ++i) {
    const double L0 = std::exp(logl(rng)), L1 = std::exp(logl(rng)), E = e(rng);
    const double oracle = std::log(L0) + E * std::log(L1);
    if (std::abs(oracle) < 1e-12) continue;
    const auto r = average_contraction(L0, L1, E);
    ASSERT_EQ(r.satisfied, oracle < 0.0) << L0 << ' ' << L1 << ' ' << E;
    ASSERT_EQ(r.satisfied, r.expectation < 0.0);
    ASSERT_EQ(r.printed_form_holds, std::log(L1) + E * std::log(L0) < 0.0);
    ASSERT_EQ(r.forms_agree, r.satisfied == r.printed_form_holds);
    // the threshold summary agrees with direct evaluation
    const auto t = mean_threshold(L0, L1);
    bool predicted = false;
    switch (t.kind) {
      case MeanThreshold::Kind::kAny: predicted = true; break;
      case MeanThreshold::Kind::kAbove: predicted = E > t.value; break;
      case MeanThreshold::Kind::kBelow: predicted = E < t.value; break;
      case MeanThreshold::Kind::kNone: predicted = false; break;
    }
    if (std::abs(E - t.value) > 1e-9) {
      ASSERT_EQ(predicted, r.satisfied);
    }
    ++checked;
  }
  EXPECT_GT(checked, 9900);
}

TEST(ContractionPropertyTest, DistinctAffineSelfMapsContractForAnyMean) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0), e(0.01, 50.0);
  for (int i = 0; i < 1000; ++i) {
    // random affine self-maps of [0, 1]: images of 0 and 1 anywhere in [0, 1]
    const double a0 = u(rng), a1 = u(rng), b0 = u(rng), b1 = u(rng);
    const auto f = IntervalMap::affine(kUnit, a1 - a0, a0);
    const auto g = IntervalMap::affine(kUnit, b1 - b0, b0);
    const double L0 = *g.lipschitz(), L1 = *f.lipschitz();
    if (L0 >= 1.0 && L1 >= 1.0) continue;  // both identities (or reflections) are excluded
    EXPECT_TRUE(average_contraction(L0, L1, e(rng)).satisfied);
  }
}

TEST(ContractionPropertyTest, SomeMeanWorksWhenImpulseContracts) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> l0(0.01, 0.99), l1(1.0, 1000.0);
  for (int i = 0; i < 1000; ++i) {
    const double L0 = l0(rng), L1 = l1(rng);
    const double E = 0.5 * std::log(1.0 / L0) / std::log(L1);
    EXPECT_TRUE(average_contraction(L0, L1, E).satisfied);
  }
}

TEST(SplittingTest, SqrtSystemSearch) {
  const auto sys = SqrtSystem();
  const auto c = find_splitting(sys, 32);
  ASSERT_TRUE(c.has_value());
  EXPECT_LE(std::max(c->seq_a.size(), c->seq_b.size()), 32u);
  EXPECT_EQ(c->seq_a.back(), c->seq_b.back());
  EXPECT_GT(c->gap, kDisjointGap);
  EXPECT_GT(c->prob_a, 0.0);
  EXPECT_GT(c->prob_b, 0.0);
  EXPECT_TRUE(validate_certificate(sys, *c).ok);
}

TEST(SplittingTest, IdentityHasNoCertificate) {
  const ImpulseSystem sys(IntervalMap::identity(kUnit), IntervalMap::identity(kUnit),
                          ImpulseTimeDistribution::geometric(0.5));
  EXPECT_FALSE(find_splitting(sys, 16).has_value());
}

TEST(SplittingTest, ConstantMapsNeverSplit) {
  // the last-applied map decides the image, and both words share it
  const ImpulseSystem sys(IntervalMap::constant(kUnit, 0.8), IntervalMap::constant(kUnit, 0.1),
                          ImpulseTimeDistribution::finite({0.5, 0.5}));
  EXPECT_FALSE(find_splitting(sys, 8).has_value());
}

TEST(SplittingTest, ShortCertificateFromDistinctLastStep) {
  // g(f(I)) = [0.45, 0.5] and g(g(I)) = [0, 0.25] share the final symbol 0
  const ImpulseSystem sys(IntervalMap::affine(kUnit, 0.1, 0.9), IntervalMap::affine(kUnit, 0.5, 0.0),
                          ImpulseTimeDistribution::finite({0.5, 0.5}));
  const auto c = find_splitting(sys, 8);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->seq_a.size() + c->seq_b.size(), 4u);
  EXPECT_EQ(c->seq_a.back(), 0u);
  EXPECT_EQ(c->seq_b.back(), 0u);
  EXPECT_TRUE(validate_certificate(sys, *c).ok);
}

TEST(SplittingTest, NonMonotoneRejected) {
  const ImpulseSystem sys(IntervalMap::logistic(4.0), IntervalMap::affine(kUnit, 0.5, 0.0),
                          ImpulseTimeDistribution::geometric(0.5));
  EXPECT_THROW(find_splitting(sys, 8), UnsupportedMap);
}

TEST(SplittingTest, FixedPointRouteSqrtSystem) {
  const auto sys = SqrtSystem();
  const auto r = fixed_point_splitting(sys);
  ASSERT_TRUE(r.certificate.has_value()) << r.diagnostic;
  ASSERT_TRUE(r.limit_f && r.limit_g);
  EXPECT_NEAR(r.limit_f->lo, 2.0, 1e-9);
  // 0 is fixed but repelling for sqrt; iterates of [0, 2] shrink to [0, 1]
  EXPECT_DOUBLE_EQ(r.limit_g->lo, 0.0);
  EXPECT_NEAR(r.limit_g->hi, 1.0, 1e-9);
  EXPECT_TRUE(validate_certificate(sys, *r.certificate).ok);
}

TEST(SplittingTest, FixedPointRouteHalves) {
  const ImpulseSystem sys(IntervalMap::affine(kUnit, 0.5, 0.0), IntervalMap::affine(kUnit, 0.5, 0.5),
                          ImpulseTimeDistribution::geometric(0.5));
  const auto r = fixed_point_splitting(sys);
  ASSERT_TRUE(r.certificate.has_value()) << r.diagnostic;
  EXPECT_NEAR(r.limit_f->lo, 0.0, 1e-9);
  EXPECT_NEAR(r.limit_g->lo, 1.0, 1e-9);
  EXPECT_TRUE(validate_certificate(sys, *r.certificate).ok);
}

TEST(SplittingTest, FixedPointRouteSharedFixedPoint) {
  const auto h = IntervalMap::affine(kUnit, 0.5, 0.0);
  const ImpulseSystem sys(h, h, ImpulseTimeDistribution::geometric(0.5));
  const auto r = fixed_point_splitting(sys);
  EXPECT_FALSE(r.certificate.has_value());
  EXPECT_FALSE(r.diagnostic.empty());
}

TEST(CertificateTest, TextRoundTripAndTampering) {
  const auto sys = SqrtSystem();
  const auto c = *find_splitting(sys, 32);
  const auto back = certificate_from_text(to_text(c));
  EXPECT_EQ(back.seq_a, c.seq_a);
  EXPECT_EQ(back.seq_b, c.seq_b);
  EXPECT_EQ(back.image_a, c.image_a);
  EXPECT_EQ(back.gap, c.gap);
  EXPECT_TRUE(validate_certificate(sys, back).ok);

  auto bad = c;
  bad.seq_b = bad.seq_a;
  EXPECT_FALSE(validate_certificate(sys, bad).ok);
  bad = c;
  bad.image_a.hi += 0.25;
  EXPECT_FALSE(validate_certificate(sys, bad).ok);
  EXPECT_THROW(certificate_from_text("seq_a=1,0\n"), InvalidArgument);
}

TEST(CertificatePropertyTest, EveryReturnedCertificateValidates) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int found = 0;
  for (int i = 0; i < 60; ++i) {
    const double a = u(rng) * 0.9, b = u(rng) * 0.9;
    const ImpulseSystem sys(IntervalMap::affine(kUnit, a, u(rng) * (1 - a)),
                            IntervalMap::affine(kUnit, b, u(rng) * (1 - b)),
                            ImpulseTimeDistribution::geometric(0.2 + 0.6 * u(rng)));
    if (const auto c = find_splitting(sys, 12)) {
      ++found;
      EXPECT_TRUE(validate_certificate(sys, *c).ok);
    }
    const auto r = fixed_point_splitting(sys);
    if (r.certificate) {
      EXPECT_TRUE(validate_certificate(sys, *r.certificate).ok);
    }
  }
  EXPECT_GT(found, 0);
}

TEST(SynchronizationTest, FinalExampleSynchronizes) {
  const auto r = synchronization_test(example_system(), 1000, 200, 1e-6, 5);
  EXPECT_GE(r.fraction, 0.99);
  ASSERT_TRUE(r.mean_log_lipschitz.has_value());
  EXPECT_LT(*r.mean_log_lipschitz, 0.0);
}

TEST(SynchronizationTest, IdentityNeverSynchronizes) {
  const ImpulseSystem sys(IntervalMap::identity(kUnit), IntervalMap::identity(kUnit),
                          ImpulseTimeDistribution::geometric(0.5));
  EXPECT_DOUBLE_EQ(synchronization_test(sys, 200, 100, 1e-6, 5).fraction, 0.0);
}

TEST(SynchronizationTest, ConstantImpulseCollapses) {
  const ImpulseSystem sys(IntervalMap::identity(kUnit), IntervalMap::constant(kUnit, 0.3),
                          ImpulseTimeDistribution::bernoulli(0.5));
  EXPECT_DOUBLE_EQ(synchronization_test(sys, 200, 10, 1e-12, 5).fraction, 1.0);
}

TEST(SynchronizationTest, ThreadCountInvariant) {
  const auto sys = example_system();
  const auto a = synchronization_test(sys, 300, 100, 1e-6, 9, 1);
  const auto b = synchronization_test(sys, 300, 100, 1e-6, 9, 3);
  EXPECT_EQ(a.fraction, b.fraction);
  EXPECT_EQ(a.midpoints, b.midpoints);
}

}  // namespace
}  // namespace impulse
