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
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "impulse/distribution.hpp"
#include "impulse/errors.hpp"

namespace impulse {
namespace {

using D = ImpulseTimeDistribution;

TEST(DistributionTest, Mean) {
  EXPECT_DOUBLE_EQ(mean(D::bernoulli(0.5)), 0.5);
  EXPECT_DOUBLE_EQ(mean(D::degenerate()), 0.0);
  EXPECT_DOUBLE_EQ(mean(D::geometric(0.5)), 1.0);
  EXPECT_NEAR(mean(D::finite({0.3, 0.3, 0.4})), 1.1, 1e-15);
}

TEST(DistributionTest, InvalidLawsRejected) {
  EXPECT_THROW(D::finite({0.5, 0.4}), InvalidArgument);
  EXPECT_THROW(D::finite({-0.1, 1.1}), InvalidArgument);
  EXPECT_THROW(D::geometric(1.0), InvalidArgument);
  EXPECT_THROW(D::custom({0.5}, 0.5, std::numeric_limits<double>::infinity()), InvalidArgument);
}

TEST(DistributionTest, TransitionProb) {
  const auto d = D::geometric(0.5);
  EXPECT_DOUBLE_EQ(transition_prob(d, 0, 3), d.pmf(3));
  EXPECT_DOUBLE_EQ(transition_prob(d, 5, 4), 1.0);
  EXPECT_DOUBLE_EQ(transition_prob(d, 5, 3), 0.0);
}

TEST(DistributionTest, Stationary) {
  const auto b = stationary(D::bernoulli(0.5), 2);
  ASSERT_EQ(b.truncation(), 2u);
  EXPECT_NEAR(b.weights[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(b.weights[1], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(b.tail_mass, 0.0, 1e-15);

  const auto one = stationary(D::degenerate(), 1);
  EXPECT_DOUBLE_EQ(one.weights[0], 1.0);

  const double p = 0.7;
  const auto g = stationary(D::geometric(p), 30);
  for (std::size_t i = 0; i < 30; ++i) EXPECT_NEAR(g.weights[i], (1 - p) * std::pow(p, i), 1e-14);
  EXPECT_NEAR(g.tail_mass, std::pow(p, 30), 1e-12);
}

TEST(DistributionTest, ReversedProb) {
  const auto b = D::bernoulli(0.5);
  EXPECT_NEAR(reversed_prob(b, 1, 0), 1.0, 1e-15);
  EXPECT_NEAR(reversed_prob(b, 0, 0), 0.5, 1e-15);
  EXPECT_NEAR(reversed_prob(b, 0, 1), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(reversed_prob(b, 1, 2), 0.0);
  EXPECT_THROW(reversed_prob(b, 2, 0), UndefinedState);
}

TEST(DistributionTest, CylinderProbabilities) {
  const auto g = D::geometric(0.5);
  EXPECT_NEAR(cylinder_prob_forward(g, Cylinder({2, 1, 0})), 0.125, 1e-15);
  EXPECT_DOUBLE_EQ(cylinder_prob_forward(g, Cylinder({1, 1})), 0.0);
  for (State k = 0; k < 6; ++k) {
    EXPECT_NEAR(cylinder_prob_forward(g, Cylinder({0, k})), g.stationary_weight(0) * g.pmf(k), 1e-15);
  }
  EXPECT_NEAR(cylinder_prob_reversed(D::bernoulli(0.5), Cylinder({0, 0})), 1.0 / 3.0, 1e-15);
}

TEST(DistributionTest, DefaultTruncation) {
  EXPECT_EQ(D::bernoulli(0.5).default_truncation(), 2u);
  EXPECT_EQ(D::degenerate().default_truncation(), 1u);
  EXPECT_GE(D::geometric(0.5).default_truncation(), 64u);
  EXPECT_LT(D::geometric(0.99).survival(D::geometric(0.99).default_truncation()), 1e-9 * 1.0001);
}

TEST(DistributionTest, CustomTail) {
  const auto c = D::custom({0.5, 0.25}, 0.25, 0.25 * 4.0);
  EXPECT_NEAR(c.mean(), 0.25 + 1.0, 1e-15);
  EXPECT_NEAR(c.survival(2), 0.25, 1e-15);
  EXPECT_TRUE(c.unbounded_support());
}

std::vector<D> Laws() {
  return {D::bernoulli(0.5), D::geometric(0.5), D::geometric(0.85), D::finite({0.3, 0.3, 0.4}),
          D::finite({0.1, 0.0, 0.2, 0.0, 0.7}), D::custom({0.2, 0.3, 0.1}, 0.4, 0.4 * 5.0)};
}

TEST(DistributionPropertyTest, StationarityOfP) {
  for (const auto& d : Laws()) {
    const std::size_t K = std::min<std::size_t>(d.default_truncation(), 60);
    const auto m = stationary(d, K + 1);
    for (State j = 0; j < K; ++j) {
      double s = 0.0;
      for (State i = 0; i <= K; ++i) s += m.weights[i] * transition_prob(d, i, j);
      // inflow into j < K only comes from 0 and j+1, both inside the truncation
      EXPECT_NEAR(s, m.weights[j], 1e-12) << d.describe() << " j=" << j;
    }
  }
}

TEST(DistributionPropertyTest, QRowsAndStationarity) {
  for (const auto& d : Laws()) {
    const std::size_t K = std::min<std::size_t>(d.default_truncation(), 60);
    const auto m = stationary(d, K + 1);
    for (State i = 0; i < K; ++i) {
      if (m.weights[i] == 0.0) continue;
      double row = 0.0;
      for (State j = 0; j <= K; ++j) row += reversed_prob(d, i, j);
      EXPECT_NEAR(row, 1.0, 1e-12) << d.describe() << " i=" << i;
    }
    for (State j = 1; j < K; ++j) {
      // only i = j - 1 feeds j under Q
      const double in = m.weights[j - 1] > 0.0 ? m.weights[j - 1] * reversed_prob(d, j - 1, j) : 0.0;
      EXPECT_NEAR(in, m.weights[j], 1e-12);
    }
    double in0 = 0.0;
    for (State i = 0; i < K; ++i) {
      if (m.weights[i] > 0.0) in0 += m.weights[i] * reversed_prob(d, i, 0);
    }
    EXPECT_NEAR(in0, m.weights[0], 1e-9 + m.tail_mass);
  }
}

std::vector<State> RandomAdmissible(const D& d, std::mt19937_64& rng, std::size_t len) {
  RngStream s(rng());
  return sample_forward_path(d, s, len, StartLaw::kStationary);
}

TEST(DistributionPropertyTest, ReversalIdentity) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> len(1, 12);
  int checked = 0;
  for (const auto& d : Laws()) {
    for (int t = 0; t < 200; ++t) {
      const Cylinder c(RandomAdmissible(d, rng, len(rng)));
      EXPECT_NEAR(cylinder_prob_reversed(d, c.reversed()), cylinder_prob_forward(d, c), 1e-12);
      EXPECT_NEAR(cylinder_prob_reversed(d, c), cylinder_prob_forward(d, c.reversed()), 1e-12);
      ++checked;
    }
  }
  EXPECT_GE(checked, 1000);
}

TEST(DistributionPropertyTest, ForwardPathFrequencies) {
  const auto d = D::geometric(0.6);
  RngStream rng(99);
  const auto path = sample_forward_path(d, rng, 1000000);
  std::vector<double> freq(200, 0.0);
  for (State s : path) freq[std::min<State>(s, 199)] += 1.0;
  double tv = 0.0;
  for (std::size_t i = 0; i < 200; ++i) tv += std::abs(freq[i] / 1e6 - d.stationary_weight(i));
  EXPECT_LE(0.5 * tv, 0.01);
}

TEST(DistributionPropertyTest, ReversedPathsFollowQ) {
  const auto d = D::bernoulli(0.5);
  RngStream rng(7);
  const auto path = sample_reversed_path(d, rng, 200000);
  std::size_t from0 = 0, to00 = 0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    ASSERT_LT(path[i], 2u);
    if (path[i] == 1) {
      ASSERT_EQ(path[i + 1], 0u);
    }
    if (path[i] == 0) {
      ++from0;
      to00 += path[i + 1] == 0;
    }
  }
  EXPECT_NEAR(static_cast<double>(to00) / static_cast<double>(from0), 0.5, 0.01);
}

TEST(DistributionPropertyTest, SamplerMatchesPmf) {
  const auto d = D::finite({0.3, 0.3, 0.4});
  RngStream rng(3);
  std::vector<double> c(3, 0.0);
  for (int i = 0; i < 100000; ++i) c[sample_time(d, rng)] += 1.0;
  for (State k = 0; k < 3; ++k) EXPECT_NEAR(c[k] / 1e5, d.pmf(k), 0.006);
}

}  // namespace
}  // namespace impulse
