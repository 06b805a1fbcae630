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

#include "impulse/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "parallel.hpp"

namespace impulse {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxSearchLen = 64;
constexpr std::size_t kNodeBudget = std::size_t{1} << 18;
constexpr std::size_t kMaxGroupState = 64;
constexpr std::size_t kFixedPointSteps = 100000;
constexpr double kLimitTol = 1e-12;

double safe_log(double L) { return L == 0.0 ? -kInf : std::log(L); }

// Custom laws leave survival beyond their head undeclared; treat that as
// "not known to be positive".
double known_survival(const ImpulseTimeDistribution& t, State n) {
  try {
    return t.survival(n);
  } catch (const UndefinedState&) {
    return 0.0;
  }
}

void require_certifiable(const ImpulseSystem& sys) {
  for (const IntervalMap* m : {&sys.f(), &sys.g()}) {
    if (!m->exact()) throw UnsupportedMap("splitting certificates need exact interval images");
    if (!m->monotone()) throw UnsupportedMap("splitting certificates need monotone maps");
  }
}

struct Node {
  Interval image;
  std::size_t parent;  // kRoot for length-1 words
  bool g;              // last symbol is g
  bool has_g;
  std::size_t run;  // trailing run of f's
};

constexpr std::size_t kRoot = std::numeric_limits<std::size_t>::max();

struct Group {
  std::size_t min_hi = kRoot;
  std::size_t max_lo = kRoot;
};

std::vector<bool> word_of(const std::vector<Node>& nodes, std::size_t idx) {
  std::vector<bool> word;  // true = g
  for (; idx != kRoot; idx = nodes[idx].parent) word.push_back(nodes[idx].g);
  std::reverse(word.begin(), word.end());
  return word;
}

// Countdown states realizing a word whose final state is s (0 when the word
// ends in g).
std::vector<State> concretize(const std::vector<bool>& word, State s) {
  std::vector<State> states;
  std::size_t i = 0;
  while (i < word.size()) {
    if (word[i]) {
      states.push_back(0);
      ++i;
      continue;
    }
    std::size_t L = 0;
    while (i + L < word.size() && !word[i + L]) ++L;
    const bool trailing = i + L == word.size();
    const State top = trailing ? s + L - 1 : L;
    for (std::size_t k = 0; k < L; ++k) states.push_back(top - k);
    i += L;
  }
  return states;
}

SplittingCertificate make_certificate(const ImpulseSystem& sys, std::vector<State> a, std::vector<State> b,
                                      std::string route) {
  SplittingCertificate c;
  const auto I = sys.domain().interval();
  c.image_a = sys.apply_image(a, I);
  c.image_b = sys.apply_image(b, I);
  c.gap = separation(c.image_a, c.image_b);
  const auto& t = sys.times();
  c.prob_a = cylinder_prob_forward(t, Cylinder(a));
  c.prob_b = cylinder_prob_forward(t, Cylinder(b));
  c.prob_reversed_a = cylinder_prob_reversed(t, Cylinder(a));
  c.prob_reversed_b = cylinder_prob_reversed(t, Cylinder(b));
  c.injective_maps = sys.f().injective() && sys.g().injective();
  c.seq_a = std::move(a);
  c.seq_b = std::move(b);
  c.route = std::move(route);
  return c;
}

std::string join(const std::vector<State>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ContractionReport average_contraction(double L0, double L1, double E) {
  if (!(L0 >= 0.0) || !(L1 >= 0.0) || !(E >= 0.0) || !std::isfinite(L0) || !std::isfinite(L1) ||
      !std::isfinite(E)) {
    throw InvalidArgument("average_contraction needs finite L0, L1 >= 0 and E >= 0");
  }
  ContractionReport r{.L0 = L0, .L1 = L1, .E = E};
  const double weighted_f = E == 0.0 ? 0.0 : E * safe_log(L1);
  r.expectation = (safe_log(L0) + weighted_f) / (1.0 + E);
  r.product = L0 * std::pow(L1, E);
  r.satisfied = r.expectation < 0.0;
  r.printed_threshold = L0 == 0.0 ? (E == 0.0 ? 1.0 : kInf) : std::pow(L0, -E);
  r.printed_form_holds = L1 < r.printed_threshold;
  r.forms_agree = r.satisfied == r.printed_form_holds;
  return r;
}

MeanThreshold mean_threshold(double L0, double L1) {
  if (!(L0 >= 0.0) || !(L1 >= 0.0) || !std::isfinite(L0) || !std::isfinite(L1)) {
    throw InvalidArgument("mean_threshold needs finite L0, L1 >= 0");
  }
  // A constant map contracts everything it touches.
  if (L0 == 0.0 || L1 == 0.0) return {MeanThreshold::Kind::kAny, 0.0};
  const double a = std::log(L0);
  const double b = std::log(L1);
  // Contraction on average means a + E b < 0.
  if (b < 0.0) {
    if (a <= 0.0) return {MeanThreshold::Kind::kAny, 0.0};
    return {MeanThreshold::Kind::kAbove, a / -b};
  }
  if (b == 0.0) return {a < 0.0 ? MeanThreshold::Kind::kAny : MeanThreshold::Kind::kNone, 0.0};
  if (a >= 0.0) return {MeanThreshold::Kind::kNone, 0.0};
  return {MeanThreshold::Kind::kBelow, -a / b};
}

std::string describe(const MeanThreshold& t) {
  switch (t.kind) {
    case MeanThreshold::Kind::kAny:
      return "satisfied for every E > 0";
    case MeanThreshold::Kind::kAbove:
      return "satisfied for E > " + fmt17(t.value);
    case MeanThreshold::Kind::kBelow:
      return "satisfied for E < " + fmt17(t.value);
    case MeanThreshold::Kind::kNone:
      return "not satisfied for any E";
  }
  return {};
}

std::optional<SplittingCertificate> find_splitting(const ImpulseSystem& sys, std::size_t max_len) {
  if (max_len < 1 || max_len > kMaxSearchLen) throw InvalidArgument("max_len must lie in [1, 64]");
  require_certifiable(sys);
  const auto& t = sys.times();
  const auto I = sys.domain().interval();

  // Final states a word ending in f can take, capped at kMaxGroupState.
  auto f_groups = [&](const Node& n) {
    std::vector<State> out;
    for (State s = 1; s <= kMaxGroupState; ++s) {
      if (n.has_g ? t.pmf(s + n.run - 1) > 0.0 : known_survival(t, s + n.run - 1) > 0.0) out.push_back(s);
    }
    return out;
  };

  std::vector<Node> nodes;
  std::set<std::tuple<double, double, bool, std::size_t>> seen;
  std::map<State, Group> groups;
  std::optional<std::pair<std::size_t, std::size_t>> hit;
  State hit_state = 0;

  auto consider = [&](std::size_t idx) {
    const Node& n = nodes[idx];
    std::vector<State> finals = n.g ? std::vector<State>{0} : f_groups(n);
    for (State s : finals) {
      Group& grp = groups[s];
      if (grp.max_lo != kRoot && nodes[grp.max_lo].image.lo - n.image.hi > kDisjointGap) {
        hit = {grp.max_lo, idx};
        hit_state = s;
        return;
      }
      if (grp.min_hi != kRoot && n.image.lo - nodes[grp.min_hi].image.hi > kDisjointGap) {
        hit = {grp.min_hi, idx};
        hit_state = s;
        return;
      }
      if (grp.min_hi == kRoot || n.image.hi < nodes[grp.min_hi].image.hi) grp.min_hi = idx;
      if (grp.max_lo == kRoot || n.image.lo > nodes[grp.max_lo].image.lo) grp.max_lo = idx;
    }
  };

  auto add = [&](Node n) -> bool {
    if (!seen.insert({n.image.lo, n.image.hi, n.has_g, n.run}).second) return false;
    nodes.push_back(n);
    consider(nodes.size() - 1);
    return true;
  };

  std::vector<std::size_t> level;
  if (add({image(sys.g(), I), kRoot, true, true, 0})) level.push_back(nodes.size() - 1);
  if (!hit && known_survival(t, 1) > 0.0 && add({image(sys.f(), I), kRoot, false, false, 1})) {
    level.push_back(nodes.size() - 1);
  }

  for (std::size_t len = 2; len <= max_len && !hit && !level.empty(); ++len) {
    std::vector<std::size_t> next;
    for (std::size_t idx : level) {
      if (hit || nodes.size() >= kNodeBudget) break;
      const Node parent = nodes[idx];
      const bool can_g = parent.run == 0 ? t.pmf(0) > 0.0
                                         : (parent.has_g ? t.pmf(parent.run) > 0.0 : true);
      if (can_g && add({image(sys.g(), parent.image), idx, true, true, 0})) next.push_back(nodes.size() - 1);
      if (hit) break;
      if (known_survival(t, parent.run + 1) > 0.0 &&
          add({image(sys.f(), parent.image), idx, false, parent.has_g, parent.run + 1})) {
        next.push_back(nodes.size() - 1);
      }
    }
    level = std::move(next);
  }
  if (!hit) return std::nullopt;

  auto a = concretize(word_of(nodes, hit->first), hit_state);
  auto b = concretize(word_of(nodes, hit->second), hit_state);
  return make_certificate(sys, std::move(a), std::move(b), "search");
}

FixedPointSplitting fixed_point_splitting(const ImpulseSystem& sys) {
  require_certifiable(sys);
  FixedPointSplitting out;
  const auto I = sys.domain().interval();

  auto limit_of = [&](const IntervalMap& m) -> std::optional<Interval> {
    Interval j = I;
    for (std::size_t k = 0; k < kFixedPointSteps; ++k) {
      const Interval next = image(m, j);
      if (std::abs(next.lo - j.lo) < kLimitTol && std::abs(next.hi - j.hi) < kLimitTol) return next;
      j = next;
    }
    return std::nullopt;
  };

  out.limit_f = limit_of(sys.f());
  out.limit_g = limit_of(sys.g());
  if (!out.limit_f || !out.limit_g) {
    out.diagnostic = "interval orbit did not settle within 100000 steps";
    return out;
  }
  const Interval gA = image(sys.g(), *out.limit_f);
  if (!(separation(gA, *out.limit_g) > kDisjointGap)) {
    out.diagnostic = "g(lim f^n I) meets lim g^n I; no certificate from this construction";
    return out;
  }
  const auto& t = sys.times();
  if (!(t.pmf(0) > 0.0)) {
    out.diagnostic = "p_0 = 0: repeated impulses are not admissible";
    return out;
  }

  Interval fn = I;
  Interval gn = I;
  for (std::size_t n = 1; n <= kFixedPointSteps; ++n) {
    if (!(known_survival(t, n) > 0.0)) {
      out.diagnostic = "impulse times cannot reach the required run of f";
      return out;
    }
    fn = image(sys.f(), fn);
    gn = image(sys.g(), gn);
    if (separation(image(sys.g(), fn), gn) > kDisjointGap) {
      std::vector<State> a(n, 0);
      std::vector<State> b;
      for (State k = n; k >= 1; --k) b.push_back(k);
      b.push_back(0);
      out.n = n;
      out.certificate = make_certificate(sys, std::move(a), std::move(b), "fixed-point");
      out.diagnostic = "separated at n = " + std::to_string(n);
      return out;
    }
  }
  out.diagnostic = "no separating n within 100000 steps";
  return out;
}

CertificateCheck validate_certificate(const ImpulseSystem& sys, const SplittingCertificate& cert) {
  CertificateCheck check;
  auto fail = [&](std::string why) { check.problems.push_back(std::move(why)); };
  try {
    require_certifiable(sys);
  } catch (const UnsupportedMap& e) {
    fail(e.what());
    return check;
  }
  if (cert.seq_a.empty() || cert.seq_b.empty()) {
    fail("empty sequence");
    return check;
  }
  if (cert.seq_a.back() != cert.seq_b.back()) fail("sequences end in different states");
  const auto& t = sys.times();
  const double pa = cylinder_prob_forward(t, Cylinder(cert.seq_a));
  const double pb = cylinder_prob_forward(t, Cylinder(cert.seq_b));
  if (!(pa > 0.0)) fail("sequence a is not admissible");
  if (!(pb > 0.0)) fail("sequence b is not admissible");
  const auto I = sys.domain().interval();
  const Interval ia = sys.apply_image(cert.seq_a, I);
  const Interval ib = sys.apply_image(cert.seq_b, I);
  const double gap = separation(ia, ib);
  if (!(gap > kDisjointGap)) fail("images are not separated by more than 1e-9");
  auto close = [](double x, double y) { return std::abs(x - y) <= kEndpointSlack; };
  if (!close(ia.lo, cert.image_a.lo) || !close(ia.hi, cert.image_a.hi)) fail("stored image_a does not match");
  if (!close(ib.lo, cert.image_b.lo) || !close(ib.hi, cert.image_b.hi)) fail("stored image_b does not match");
  if (!close(gap, cert.gap)) fail("stored gap does not match");
  check.ok = check.problems.empty();
  return check;
}

std::string to_text(const SplittingCertificate& c) {
  std::ostringstream os;
  os << "route=" << c.route << '\n'
     << "seq_a=" << join(c.seq_a) << '\n'
     << "seq_b=" << join(c.seq_b) << '\n'
     << "image_a=" << fmt17(c.image_a.lo) << ',' << fmt17(c.image_a.hi) << '\n'
     << "image_b=" << fmt17(c.image_b.lo) << ',' << fmt17(c.image_b.hi) << '\n'
     << "gap=" << fmt17(c.gap) << '\n'
     << "prob_a=" << fmt17(c.prob_a) << '\n'
     << "prob_b=" << fmt17(c.prob_b) << '\n'
     << "prob_reversed_a=" << fmt17(c.prob_reversed_a) << '\n'
     << "prob_reversed_b=" << fmt17(c.prob_reversed_b) << '\n'
     << "injective_maps=" << (c.injective_maps ? 1 : 0) << '\n';
  return os.str();
}

SplittingCertificate certificate_from_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidArgument("certificate line without '=': " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto get = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw InvalidArgument("certificate is missing " + key);
    return it->second;
  };
  auto number = [](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("bad number in certificate: " + s);
    }
    if (used != s.size()) throw InvalidArgument("bad number in certificate: " + s);
    return v;
  };
  auto states = [](const std::string& s) {
    std::vector<State> out;
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
        throw InvalidArgument("bad state in certificate: " + tok);
      }
      out.push_back(std::stoull(tok));
    }
    if (out.empty()) throw InvalidArgument("empty sequence in certificate");
    return out;
  };
  auto interval = [&](const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw InvalidArgument("bad interval in certificate: " + s);
    return Interval{number(s.substr(0, comma)), number(s.substr(comma + 1))};
  };

  SplittingCertificate c;
  c.route = kv.count("route") ? kv["route"] : "";
  c.seq_a = states(get("seq_a"));
  c.seq_b = states(get("seq_b"));
  c.image_a = interval(get("image_a"));
  c.image_b = interval(get("image_b"));
  c.gap = number(get("gap"));
  c.prob_a = number(get("prob_a"));
  c.prob_b = number(get("prob_b"));
  if (kv.count("prob_reversed_a")) c.prob_reversed_a = number(kv["prob_reversed_a"]);
  if (kv.count("prob_reversed_b")) c.prob_reversed_b = number(kv["prob_reversed_b"]);
  if (kv.count("injective_maps")) c.injective_maps = kv["injective_maps"] == "1";
  return c;
}

SynchronizationResult synchronization_test(const ImpulseSystem& sys, std::size_t n_paths, std::size_t path_len,
                                           double tol, std::uint64_t seed, std::size_t threads) {
  if (path_len < 1) throw InvalidArgument("path_len must be at least 1");
  if (n_paths < 1) throw InvalidArgument("n_paths must be at least 1");
  if (!sys.f().exact() || !sys.g().exact()) throw UnsupportedMap("synchronization test needs exact images");
  const auto I = sys.domain().interval();
  std::vector<double> diam(n_paths);
  std::vector<double> mids(n_paths);
  std::vector<double> logs(n_paths);
  const auto L0 = sys.g().lipschitz();
  const auto L1 = sys.f().lipschitz();
  const double log0 = L0 ? safe_log(*L0) : 0.0;
  const double log1 = L1 ? safe_log(*L1) : 0.0;
  detail::parallel_for(n_paths, threads, [&](std::size_t i) {
    RngStream rng(seed, i);
    const auto xi = sample_reversed_path(sys.times(), rng, path_len);
    const Interval j = sys.compose_image(xi, I);
    diam[i] = j.width();
    mids[i] = j.midpoint();
    double acc = 0.0;
    for (State s : xi) acc += s == 0 ? log0 : log1;
    logs[i] = acc / static_cast<double>(path_len);
  });
  SynchronizationResult r;
  r.paths = n_paths;
  std::size_t hits = 0;
  double dsum = 0.0;
  double lsum = 0.0;
  for (std::size_t i = 0; i < n_paths; ++i) {
    if (diam[i] <= tol) ++hits;
    dsum += diam[i];
    lsum += logs[i];
  }
  r.fraction = static_cast<double>(hits) / static_cast<double>(n_paths);
  r.mean_diameter = dsum / static_cast<double>(n_paths);
  if (L0 && L1) r.mean_log_lipschitz = lsum / static_cast<double>(n_paths);
  r.midpoints = std::move(mids);
  return r;
}

}  // namespace impulse
