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

#include "impulse/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "impulse/errors.hpp"

namespace impulse {
namespace {

constexpr double kSumTolerance = 1e-12;

void check_head(const std::vector<double>& probs) {
  if (probs.empty()) throw InvalidArgument("impulse-time law needs at least p_0");
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidArgument("probabilities must be finite and non-negative");
  }
  if (!(probs.front() > 0.0)) throw InvalidArgument("p_0 must be positive");
}

}  // namespace

ImpulseTimeDistribution ImpulseTimeDistribution::geometric(double ratio) {
  if (!(ratio >= 0.0 && ratio < 1.0)) throw InvalidArgument("geometric ratio must lie in [0, 1)");
  ImpulseTimeDistribution d;
  d.kind_ = Kind::kGeometric;
  d.ratio_ = ratio;
  d.mean_ = ratio / (1.0 - ratio);
  d.build_tables();
  return d;
}

ImpulseTimeDistribution ImpulseTimeDistribution::finite(std::vector<double> probs) {
  check_head(probs);
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(total - 1.0) > kSumTolerance) throw InvalidArgument("probabilities must sum to 1");
  while (probs.size() > 1 && probs.back() == 0.0) probs.pop_back();
  ImpulseTimeDistribution d;
  d.kind_ = Kind::kFinite;
  d.probs_ = std::move(probs);
  for (std::size_t n = 0; n < d.probs_.size(); ++n) d.mean_ += static_cast<double>(n) * d.probs_[n];
  d.build_tables();
  return d;
}

ImpulseTimeDistribution ImpulseTimeDistribution::bernoulli(double p) {
  if (!(p >= 0.0 && p < 1.0)) throw InvalidArgument("Bernoulli parameter must lie in [0, 1)");
  return finite({1.0 - p, p});
}

ImpulseTimeDistribution ImpulseTimeDistribution::degenerate() { return finite({1.0}); }

ImpulseTimeDistribution ImpulseTimeDistribution::custom(std::vector<double> head, double tail_mass,
                                                         double tail_mean) {
  check_head(head);
  if (!(tail_mass >= 0.0) || !std::isfinite(tail_mean)) throw InvalidArgument("tail mass and mean must be finite");
  const double total = std::accumulate(head.begin(), head.end(), 0.0) + tail_mass;
  if (std::abs(total - 1.0) > kSumTolerance) throw InvalidArgument("head plus tail mass must sum to 1");
  const double n = static_cast<double>(head.size());
  if (tail_mean < n * tail_mass * (1.0 - 1e-12)) {
    throw InvalidArgument("tail mean is smaller than the tail mass allows");
  }
  ImpulseTimeDistribution d;
  d.kind_ = Kind::kCustom;
  d.probs_ = std::move(head);
  d.tail_mass_ = tail_mass;
  d.tail_mean_ = tail_mean;
  for (std::size_t k = 0; k < d.probs_.size(); ++k) d.mean_ += static_cast<double>(k) * d.probs_[k];
  d.mean_ += tail_mean;
  d.build_tables();
  return d;
}

void ImpulseTimeDistribution::build_tables() {
  cumulative_.clear();
  double acc = 0.0;
  for (double p : probs_) cumulative_.push_back(acc += p);

  stationary_cumulative_.clear();
  if (kind_ == Kind::kGeometric) return;
  // m over the listed states; for custom laws the last entry lumps the tail.
  const std::size_t states = kind_ == Kind::kCustom ? probs_.size() + 1 : probs_.size();
  acc = 0.0;
  for (State i = 0; i < states; ++i) stationary_cumulative_.push_back(acc += stationary_weight(i));
  stationary_tail_ = std::max(0.0, 1.0 - acc);
}

double ImpulseTimeDistribution::pmf(State n) const {
  if (kind_ == Kind::kGeometric) return (1.0 - ratio_) * std::pow(ratio_, static_cast<double>(n));
  return n < probs_.size() ? probs_[n] : 0.0;
}

double ImpulseTimeDistribution::survival(State n) const {
  switch (kind_) {
    case Kind::kGeometric:
      return std::pow(ratio_, static_cast<double>(n));
    case Kind::kFinite: {
      double s = 0.0;
      for (std::size_t j = probs_.size(); j-- > n;) s += probs_[j];
      return s;
    }
    case Kind::kCustom: {
      if (n > probs_.size()) throw UndefinedState("custom law: survival beyond the listed head is not declared");
      double s = tail_mass_;
      for (std::size_t j = probs_.size(); j-- > n;) s += probs_[j];
      return s;
    }
  }
  return 0.0;
}

std::optional<State> ImpulseTimeDistribution::max_support() const {
  if (kind_ == Kind::kGeometric) return ratio_ > 0.0 ? std::nullopt : std::optional<State>(0);
  if (kind_ == Kind::kCustom && tail_mass_ > 0.0) return std::nullopt;
  return probs_.size() - 1;
}

std::size_t ImpulseTimeDistribution::default_truncation() const {
  switch (kind_) {
    case Kind::kGeometric: {
      if (ratio_ == 0.0) return 1;
      const double k = std::ceil(std::log(kTruncationTail) / std::log(ratio_));
      return std::max<std::size_t>(64, static_cast<std::size_t>(std::min(k, 1e6)));
    }
    case Kind::kFinite:
      return probs_.size();
    case Kind::kCustom:
      return probs_.size();
  }
  return 1;
}

State ImpulseTimeDistribution::sample(RngStream& rng) const {
  if (kind_ == Kind::kGeometric) {
    if (ratio_ == 0.0) return 0;
    const double k = std::floor(std::log(rng.uniform_positive()) / std::log(ratio_));
    return static_cast<State>(std::min(k, 1e12));
  }
  const double u = rng.uniform();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) {
    // Tail draw for custom laws (lumped state) or rounding at the top of a finite table.
    return kind_ == Kind::kCustom && tail_mass_ > 0.0 ? probs_.size() : *max_support();
  }
  return static_cast<State>(it - cumulative_.begin());
}

State ImpulseTimeDistribution::sample_stationary(RngStream& rng) const {
  if (kind_ == Kind::kGeometric) return sample(rng);
  const double u = rng.uniform() * stationary_cumulative_.back();
  const auto it = std::upper_bound(stationary_cumulative_.begin(), stationary_cumulative_.end(), u);
  if (it == stationary_cumulative_.end()) return stationary_cumulative_.size() - 1;
  return static_cast<State>(it - stationary_cumulative_.begin());
}

std::string ImpulseTimeDistribution::describe() const {
  std::ostringstream os;
  os.precision(10);
  switch (kind_) {
    case Kind::kGeometric:
      os << "geometric(ratio=" << ratio_ << ")";
      break;
    case Kind::kFinite:
    case Kind::kCustom: {
      os << (kind_ == Kind::kFinite ? "finite[" : "custom[");
      for (std::size_t i = 0; i < probs_.size(); ++i) os << (i ? "," : "") << probs_[i];
      os << ']';
      if (kind_ == Kind::kCustom) os << "+tail(" << tail_mass_ << ")";
      break;
    }
  }
  return os.str();
}

Cylinder::Cylinder(std::vector<State> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw InvalidArgument("cylinder needs at least one symbol");
}

Cylinder Cylinder::reversed() const { return Cylinder({symbols_.rbegin(), symbols_.rend()}); }

double mean(const ImpulseTimeDistribution& dist) { return dist.mean(); }

double transition_prob(const ImpulseTimeDistribution& dist, State i, State j) {
  if (i == 0) return dist.pmf(j);
  return j + 1 == i ? 1.0 : 0.0;
}

StationaryStateDistribution stationary(const ImpulseTimeDistribution& dist, std::size_t truncation) {
  if (truncation < 1) throw InvalidArgument("truncation must be at least 1");
  StationaryStateDistribution m;
  m.weights.reserve(truncation);
  double total = 0.0;
  for (State i = 0; i < truncation; ++i) {
    m.weights.push_back(dist.stationary_weight(i));
    total += m.weights.back();
  }
  m.tail_mass = std::max(0.0, 1.0 - total);
  return m;
}

double reversed_prob(const ImpulseTimeDistribution& dist, State i, State j) {
  const double mi = dist.stationary_weight(i);
  if (!(mi > 0.0)) throw UndefinedState("reversed chain is undefined at a state with zero stationary weight");
  const double p = transition_prob(dist, j, i);
  if (p == 0.0) return 0.0;
  return dist.stationary_weight(j) * p / mi;
}

double cylinder_prob_forward(const ImpulseTimeDistribution& dist, const Cylinder& c) {
  double w = dist.stationary_weight(c[0]);
  for (std::size_t k = 0; k + 1 < c.size() && w > 0.0; ++k) w *= transition_prob(dist, c[k], c[k + 1]);
  return w;
}

double cylinder_prob_reversed(const ImpulseTimeDistribution& dist, const Cylinder& c) {
  double w = dist.stationary_weight(c[0]);
  for (std::size_t k = 0; k + 1 < c.size() && w > 0.0; ++k) w *= reversed_prob(dist, c[k], c[k + 1]);
  return w;
}

State sample_time(const ImpulseTimeDistribution& dist, RngStream& rng) { return dist.sample(rng); }

std::vector<State> sample_forward_path(const ImpulseTimeDistribution& dist, RngStream& rng, std::size_t len,
                                       StartLaw start) {
  if (len < 1) throw InvalidArgument("path length must be at least 1");
  std::vector<State> path;
  path.reserve(len);
  path.push_back(start == StartLaw::kStationary ? dist.sample_stationary(rng) : dist.sample(rng));
  while (path.size() < len) {
    const State k = path.back();
    path.push_back(k > 0 ? k - 1 : dist.sample(rng));
  }
  return path;
}

std::vector<State> sample_reversed_path(const ImpulseTimeDistribution& dist, RngStream& rng, std::size_t len) {
  if (len < 1) throw InvalidArgument("path length must be at least 1");
  std::vector<State> path;
  path.reserve(len);
  path.push_back(dist.sample_stationary(rng));
  while (path.size() < len) {
    const State i = path.back();
    const double up = dist.survival(i + 1) / dist.survival(i);
    path.push_back(rng.uniform() < up ? i + 1 : 0);
  }
  return path;
}

}  // namespace impulse
