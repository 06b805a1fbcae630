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

#include "impulse_tools/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace impulse::tools {
namespace {

using nlohmann::json;

class Parser {
 public:
  Parser(const std::string& text, std::string origin) : text_(text), origin_(std::move(origin)) {}

  [[noreturn]] void fail(const std::string& key, const std::string& why) const {
    std::string where = origin_;
    if (const auto line = locate(key)) where += ":" + std::to_string(*line);
    throw ConfigError(where + ": " + key + ": " + why);
  }

  const json& object(const json& parent, const std::string& key, std::set<std::string> allowed) const {
    const json& node = parent.at(key);
    if (!node.is_object()) fail(key, "expected an object");
    for (const auto& [k, _] : node.items()) {
      if (!allowed.count(k)) fail(k, "unknown key in '" + key + "'");
    }
    return node;
  }

  double number(const json& node, const std::string& key, std::optional<double> fallback = std::nullopt) const {
    if (!node.contains(key)) {
      if (fallback) return *fallback;
      fail(key, "required number is missing");
    }
    const auto& v = node.at(key);
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }

  std::size_t count(const json& node, const std::string& key, std::size_t fallback) const {
    if (!node.contains(key)) return fallback;
    const auto& v = node.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      fail(key, "expected a non-negative integer");
    }
    return v.get<std::size_t>();
  }

  std::vector<double> numbers(const json& node, const std::string& key) const {
    if (!node.contains(key) || !node.at(key).is_array()) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : node.at(key)) {
      if (!v.is_number()) fail(key, "expected an array of numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }

 private:
  // Line of the first occurrence of "key" in the source text.
  std::optional<std::size_t> locate(const std::string& key) const {
    const auto pos = text_.find('"' + key + '"');
    if (pos == std::string::npos) return std::nullopt;
    std::size_t line = 1;
    for (std::size_t i = 0; i < pos; ++i) line += text_[i] == '\n';
    return line;
  }

  const std::string& text_;
  std::string origin_;
};

IntervalMap build_map(const json& node, const IntervalDomain& d, const Parser& p, const std::string& key) {
  if (!node.is_object() || !node.contains("type") || !node.at("type").is_string()) {
    p.fail(key, "map needs a string 'type'");
  }
  const std::string type = node.at("type");
  std::optional<double> lip;
  if (node.contains("lipschitz")) lip = p.number(node, "lipschitz");
  try {
    if (type == "affine") return IntervalMap::affine(d, p.number(node, "slope"), p.number(node, "intercept", 0.0), lip);
    if (type == "identity") return IntervalMap::identity(d);
    if (type == "constant") return IntervalMap::constant(d, p.number(node, "value"));
    if (type == "logistic") {
      if (!(d == IntervalDomain(0.0, 1.0))) p.fail(key, "logistic maps live on [0, 1]");
      return IntervalMap::logistic(p.number(node, "a"), lip);
    }
    if (type == "power") return IntervalMap::power(d, p.number(node, "exponent"), lip);
    if (type == "piecewise_linear") {
      if (!node.contains("points") || !node.at("points").is_array()) p.fail(key, "piecewise_linear needs 'points'");
      std::vector<std::pair<double, double>> table;
      for (const auto& pt : node.at("points")) {
        if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
          p.fail("points", "each point must be [x, y]");
        }
        table.push_back({pt[0].get<double>(), pt[1].get<double>()});
      }
      return IntervalMap::piecewise_linear(d, table, lip);
    }
  } catch (const InvalidArgument& e) {
    p.fail(key, e.what());
  } catch (const DomainError& e) {
    p.fail(key, e.what());
  }
  p.fail(key, "unknown map type '" + type + "'");
}

ImpulseTimeDistribution build_times(const json& node, const Parser& p) {
  if (!node.is_object() || !node.contains("type") || !node.at("type").is_string()) {
    p.fail("times", "needs a string 'type'");
  }
  const std::string type = node.at("type");
  try {
    if (type == "geometric") return ImpulseTimeDistribution::geometric(p.number(node, "ratio"));
    if (type == "finite") return ImpulseTimeDistribution::finite(p.numbers(node, "probs"));
    if (type == "bernoulli") return ImpulseTimeDistribution::bernoulli(p.number(node, "p"));
    if (type == "degenerate") return ImpulseTimeDistribution::degenerate();
    if (type == "custom") {
      return ImpulseTimeDistribution::custom(p.numbers(node, "head"), p.number(node, "tail_mass"),
                                             p.number(node, "tail_mean"));
    }
  } catch (const InvalidArgument& e) {
    p.fail("times", e.what());
  }
  p.fail("times", "unknown distribution type '" + type + "'");
}

}  // namespace

ImpulseSystem ExperimentConfig::system() const {
  const std::string text = resolved.dump();
  const Parser p(text, "<resolved>");
  const IntervalDomain d(lo_, hi_);
  return ImpulseSystem(build_map(f_, d, p, "f"), build_map(g_, d, p, "g"), build_times(times_, p));
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  const Parser p(text, origin);
  if (!root.is_object()) throw ConfigError(origin + ": top level must be an object");
  const std::set<std::string> top{"domain", "f", "g", "times", "grid", "operator", "simulation",
                                  "stability", "stationary", "outputs", "description"};
  for (const auto& [k, _] : root.items()) {
    if (!top.count(k)) p.fail(k, "unknown top-level key");
  }
  for (const char* k : {"f", "g", "times"}) {
    if (!root.contains(k)) throw ConfigError(origin + ": missing required key '" + k + "'");
  }

  ExperimentConfig cfg;
  if (root.contains("domain")) {
    const auto& d = root.at("domain");
    if (!d.is_array() || d.size() != 2 || !d[0].is_number() || !d[1].is_number()) {
      p.fail("domain", "expected [lo, hi]");
    }
    cfg.lo_ = d[0].get<double>();
    cfg.hi_ = d[1].get<double>();
    if (!(cfg.lo_ < cfg.hi_)) p.fail("domain", "needs lo < hi");
  }
  cfg.f_ = root.at("f");
  cfg.g_ = root.at("g");
  cfg.times_ = root.at("times");
  const IntervalDomain domain(cfg.lo_, cfg.hi_);
  const auto f = build_map(cfg.f_, domain, p, "f");
  const auto g = build_map(cfg.g_, domain, p, "g");
  const auto times = build_times(cfg.times_, p);

  const json empty = json::object();
  auto section = [&](const char* key, std::set<std::string> allowed) -> const json& {
    return root.contains(key) ? p.object(root, key, std::move(allowed)) : empty;
  };

  const auto& grid = section("grid", {"bins", "states"});
  cfg.bins = p.count(grid, "bins", 1024);
  cfg.states = p.count(grid, "states", times.default_truncation());
  if (cfg.bins < 2) p.fail("bins", "needs at least 2 bins");
  if (cfg.states < 1) p.fail("states", "needs at least 1 state");

  const auto& op = section("operator", {"max_iter", "tol", "start"});
  cfg.max_iter = p.count(op, "max_iter", 200);
  cfg.tol = p.number(op, "tol", 1e-12);
  if (!(cfg.tol >= 0.0)) p.fail("tol", "must be non-negative");
  json start_json = "uniform";
  if (op.contains("start")) {
    const auto& s = op.at("start");
    if (s == "uniform") {
      cfg.start.kind = OperatorStart::Kind::kUniform;
    } else if (s == "stationary_uniform") {
      cfg.start.kind = OperatorStart::Kind::kStationaryUniform;
    } else if (s.is_object()) {
      cfg.start.kind = OperatorStart::Kind::kPoint;
      cfg.start.state = p.count(s, "state", 0);
      cfg.start.x = p.number(s, "x");
      if (cfg.start.state >= cfg.states) p.fail("state", "start state beyond the truncation");
      if (!domain.contains(cfg.start.x)) p.fail("x", "start point outside the domain");
    } else {
      p.fail("start", "expected \"uniform\", \"stationary_uniform\" or {\"state\", \"x\"}");
    }
    start_json = s;
  }

  const auto& sim = section("simulation", {"steps", "count", "seed", "x0", "start"});
  cfg.steps = p.count(sim, "steps", 200);
  cfg.count = p.count(sim, "count", 1000);
  cfg.seed = p.count(sim, "seed", 1);
  if (cfg.count < 1) p.fail("count", "needs at least one trajectory");
  json x0_json = "uniform";
  if (sim.contains("x0")) {
    const auto& x0 = sim.at("x0");
    if (x0.is_number()) {
      if (!domain.contains(x0.get<double>())) p.fail("x0", "outside the domain");
      cfg.init = PointStart{x0.get<double>()};
    } else if (x0 != "uniform") {
      p.fail("x0", "expected a number or \"uniform\"");
    }
    x0_json = x0;
  }
  std::string law = "impulse_times";
  if (sim.contains("start")) {
    if (sim.at("start") == "stationary") {
      cfg.start_law = StartLaw::kStationary;
      law = "stationary";
    } else if (sim.at("start") != "impulse_times") {
      p.fail("start", "expected \"impulse_times\" or \"stationary\"");
    }
  }

  const auto& st = section("stability", {"max_len", "paths", "path_len", "tol", "L0", "L1"});
  cfg.max_len = p.count(st, "max_len", 32);
  cfg.paths = p.count(st, "paths", 1000);
  cfg.path_len = p.count(st, "path_len", 200);
  cfg.sync_tol = p.number(st, "tol", 1e-6);
  if (cfg.max_len < 1 || cfg.max_len > 64) p.fail("max_len", "must lie in [1, 64]");
  if (cfg.paths < 1 || cfg.path_len < 1) p.fail("paths", "paths and path_len must be positive");
  if (st.contains("L0")) cfg.L0 = p.number(st, "L0");
  if (st.contains("L1")) cfg.L1 = p.number(st, "L1");
  if (!cfg.L0) cfg.L0 = g.lipschitz();
  if (!cfg.L1) cfg.L1 = f.lipschitz();

  const auto& sta = section("stationary", {"reference_cdf"});
  if (sta.contains("reference_cdf")) {
    if (!sta.at("reference_cdf").is_boolean()) p.fail("reference_cdf", "expected true or false");
    cfg.reference_cdf = sta.at("reference_cdf").get<bool>();
  }

  const auto& outs = section("outputs", {"directory"});
  if (outs.contains("directory")) {
    if (!outs.at("directory").is_string()) p.fail("directory", "expected a string");
    cfg.out_dir = outs.at("directory").get<std::string>();
  }

  json stability = {{"max_len", cfg.max_len}, {"paths", cfg.paths}, {"path_len", cfg.path_len},
                    {"tol", cfg.sync_tol}};
  stability["L0"] = cfg.L0 ? json(*cfg.L0) : json(nullptr);
  stability["L1"] = cfg.L1 ? json(*cfg.L1) : json(nullptr);
  cfg.resolved = {
      {"domain", {cfg.lo_, cfg.hi_}},
      {"f", cfg.f_},
      {"g", cfg.g_},
      {"times", cfg.times_},
      {"grid", {{"bins", cfg.bins}, {"states", cfg.states}}},
      {"operator", {{"max_iter", cfg.max_iter}, {"tol", cfg.tol}, {"start", start_json}}},
      {"simulation", {{"steps", cfg.steps}, {"count", cfg.count}, {"seed", cfg.seed}, {"x0", x0_json},
                      {"start", law}}},
      {"stability", stability},
      {"stationary", {{"reference_cdf", cfg.reference_cdf}}},
      {"outputs", {{"directory", cfg.out_dir}}},
  };
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : cfg.resolved.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace impulse::tools
