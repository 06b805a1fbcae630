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

#ifndef IMPULSE_INTERVAL_H
#define IMPULSE_INTERVAL_H

#include <algorithm>
#include <cmath>
#include <ostream>
#include <span>
#include <vector>

#include "impulse/errors.hpp"

namespace impulse {

/// Tolerance used when clamping evaluation points onto a domain and when
/// comparing interval endpoints in certificate arithmetic.
inline constexpr double kEndpointSlack = 1e-12;

/// Minimum separation for two images to count as disjoint.
inline constexpr double kDisjointGap = 1e-9;

/// Closed interval [lo, hi]. A singleton has lo == hi.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval hull(double a, double b) { return {std::min(a, b), std::max(a, b)}; }
  static Interval point(double x) { return {x, x}; }

  double width() const { return hi - lo; }
  double midpoint() const { return lo + 0.5 * (hi - lo); }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

inline Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

/// Signed separation between two intervals: positive when they are disjoint
/// (the length of the gap), zero or negative when they touch or overlap.
inline double separation(const Interval& a, const Interval& b) {
  return std::max(a.lo - b.hi, b.lo - a.hi);
}

inline std::ostream& operator<<(std::ostream& os, const Interval& j) {
  return os << '[' << j.lo << ", " << j.hi << ']';
}

/// The compact interval every map and measure lives on.
class IntervalDomain {
 public:
  IntervalDomain(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
      throw InvalidArgument("domain requires finite lo < hi");
    }
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double width() const { return hi_ - lo_; }
  Interval interval() const { return {lo_, hi_}; }
  bool contains(double x) const { return lo_ <= x && x <= hi_; }

  /// Clamps x onto the domain if it lies within kEndpointSlack of it.
  /// Throws DomainError for larger excursions.
  double clamp(double x) const {
    if (!(x >= lo_ - kEndpointSlack && x <= hi_ + kEndpointSlack)) {
      throw DomainError("point outside domain");
    }
    return std::clamp(x, lo_, hi_);
  }

  friend bool operator==(const IntervalDomain&, const IntervalDomain&) = default;

 private:
  double lo_;
  double hi_;
};

/// Sorts and merges overlapping or abutting intervals.
inline std::vector<Interval> merge_intervals(std::vector<Interval> parts) {
  std::sort(parts.begin(), parts.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
  std::vector<Interval> merged;
  for (const auto& p : parts) {
    if (!merged.empty() && p.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, p.hi);
    } else {
      merged.push_back(p);
    }
  }
  return merged;
}

}  // namespace impulse

#endif  // IMPULSE_INTERVAL_H
