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

#ifndef IMPULSE_STABILITY_H
#define IMPULSE_STABILITY_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "impulse/system.hpp"

namespace impulse {

/// Average contraction of the two-map system under the stationary countdown
/// law: g (Lipschitz L0) runs a fraction 1/(1+E) of the time, f (L1) the rest.
struct ContractionReport {
  double L0 = 0.0;
  double L1 = 0.0;
  double E = 0.0;
  /// (log L0 + E log L1) / (1 + E).
  double expectation = 0.0;
  /// L0 * L1^E; below one exactly when the expectation is negative.
  double product = 0.0;
  bool satisfied = false;
  /// L0^{-E} and whether L1 lies below it. Kept for comparison with the
  /// textbook statement of the two-map threshold; it is not equivalent to
  /// a negative expectation, see forms_agree.
  double printed_threshold = 0.0;
  bool printed_form_holds = false;
  bool forms_agree = false;
};

/// L0, L1 >= 0, E >= 0. A zero constant (constant map) gives expectation
/// -infinity.
ContractionReport average_contraction(double L0, double L1, double E);

/// Which mean inter-impulse times E make the system contract on average.
struct MeanThreshold {
  enum class Kind {
    kAny,    // every E > 0
    kAbove,  // E > value
    kBelow,  // E < value
    kNone,   // no E
  };
  Kind kind = Kind::kNone;
  double value = 0.0;
};

MeanThreshold mean_threshold(double L0, double L1);
std::string describe(const MeanThreshold& t);

/// Two admissible map sequences with the same final state whose images of
/// the domain are disjoint. Sequences list countdown states in the order
/// their maps act: image = f_{a_l} o ... o f_{a_1}(I).
struct SplittingCertificate {
  std::vector<State> seq_a;
  std::vector<State> seq_b;
  Interval image_a;
  Interval image_b;
  double gap = 0.0;
  /// Cylinder probabilities under the forward chain (required > 0).
  double prob_a = 0.0;
  double prob_b = 0.0;
  /// The same cylinders under the reversed chain, recorded only.
  double prob_reversed_a = 0.0;
  double prob_reversed_b = 0.0;
  /// Both maps strictly monotone.
  bool injective_maps = false;
  std::string route;
};

/// Breadth-first search over f/g words of length <= max_len (<= 64) that the
/// countdown chain can produce. Shortest words first; within a length, g
/// before f. Returns nullopt when nothing is found within the bounds, which
/// proves nothing. Throws UnsupportedMap unless both maps are exact and
/// monotone.
std::optional<SplittingCertificate> find_splitting(const ImpulseSystem& sys, std::size_t max_len);

struct FixedPointSplitting {
  std::optional<SplittingCertificate> certificate;
  /// Limit intervals of f^n(I) and g^n(I).
  std::optional<Interval> limit_f;
  std::optional<Interval> limit_g;
  /// n with g(f^n(I)) and g^n(I) separated.
  std::size_t n = 0;
  std::string diagnostic;
};

/// Certificate from the limit sets A = lim f^n(I), B = lim g^n(I): when g(A)
/// and B are separated, some n makes g(f^n(I)) and g^n(I) disjoint, and the
/// sequences are (0 x n) against (n, n-1, ..., 1, 0).
FixedPointSplitting fixed_point_splitting(const ImpulseSystem& sys);

struct CertificateCheck {
  bool ok = false;
  std::vector<std::string> problems;
};

/// Recomputes images, final states, probabilities and the gap from scratch.
CertificateCheck validate_certificate(const ImpulseSystem& sys, const SplittingCertificate& cert);

/// Plain-text key=value report with endpoints printed to 17 digits.
std::string to_text(const SplittingCertificate& cert);
/// Inverse of to_text. Throws InvalidArgument on malformed input.
SplittingCertificate certificate_from_text(const std::string& text);

struct SynchronizationResult {
  std::size_t paths = 0;
  /// Fraction of reversed paths whose composed image has diameter <= tol.
  double fraction = 0.0;
  double mean_diameter = 0.0;
  /// Mean over paths of (1/n) sum_k log L_{xi_k}; absent unless both maps
  /// declare a Lipschitz constant.
  std::optional<double> mean_log_lipschitz;
  /// Midpoint of every collapsed image, in path order.
  std::vector<double> midpoints;
};

/// Samples n_paths reversed-chain prefixes of length path_len from stream
/// (seed, i) and measures the diameter of f_{xi_0} o ... o f_{xi_{n-1}}(I).
SynchronizationResult synchronization_test(const ImpulseSystem& sys, std::size_t n_paths, std::size_t path_len,
                                           double tol, std::uint64_t seed, std::size_t threads = 1);

}  // namespace impulse

#endif  // IMPULSE_STABILITY_H
