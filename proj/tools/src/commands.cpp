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

#include "impulse_tools/commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"

#include "impulse/operator.hpp"
#include "impulse/simulate.hpp"
#include "impulse/stability.hpp"
#include "impulse/stationary.hpp"
#include "impulse_tools/acceptance.hpp"
#include "impulse_tools/config.hpp"

namespace impulse::tools {
namespace {

namespace fs = std::filesystem;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
  std::optional<std::string> out;
};

struct Context {
  ExperimentConfig cfg;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  fs::path out_dir;
  std::string hash;
};

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t resolve_seed(const Globals& g, std::uint64_t fallback) {
  if (g.seed) return *g.seed;
  if (const char* env = std::getenv("IMPULSE_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
    throw ConfigError("IMPULSE_SEED is not an unsigned integer: " + std::string(env));
  }
  return fallback;
}

Context make_context(const Globals& g) {
  if (g.config.empty()) throw ConfigError("--config is required for this command");
  Context ctx{load_config(g.config), 0, std::max<std::size_t>(1, g.threads), {}, {}};
  ctx.seed = resolve_seed(g, ctx.cfg.seed);
  ctx.out_dir = g.out ? fs::path(*g.out) : fs::path(ctx.cfg.out_dir);
  ctx.hash = config_hash(ctx.cfg);
  fs::create_directories(ctx.out_dir);
  std::ofstream manifest(ctx.out_dir / "manifest.json");
  nlohmann::json m = {{"config_hash", ctx.hash}, {"seed", ctx.seed}, {"config", ctx.cfg.resolved}};
  manifest << m.dump(2) << '\n';
  return ctx;
}

std::ofstream open_csv(const Context& ctx, const std::string& name, const std::string& command,
                       const std::string& header) {
  std::ofstream os(ctx.out_dir / name);
  if (!os) throw std::runtime_error("cannot write " + (ctx.out_dir / name).string());
  os << "# config_hash=" << ctx.hash << " seed=" << ctx.seed << " command=" << command << '\n' << header << '\n';
  return os;
}

ProductMeasure initial_measure(const ExperimentConfig& cfg, const ImpulseSystem& sys) {
  const GridSpec grid(sys.domain(), cfg.bins);
  switch (cfg.start.kind) {
    case OperatorStart::Kind::kStationaryUniform:
      return stationary_times_uniform(sys.times(), grid, cfg.states);
    case OperatorStart::Kind::kPoint: {
      const std::array<MassSpec, 1> parts{PointMass{cfg.start.state, cfg.start.x, 1.0}};
      return discretize(parts, grid, cfg.states);
    }
    case OperatorStart::Kind::kUniform:
      break;
  }
  const std::array<MassSpec, 1> parts{UniformMass{0, sys.domain().interval(), 1.0}};
  return discretize(parts, grid, cfg.states);
}

int cmd_simulate(const Context& ctx, std::ostream& out) {
  const auto sys = ctx.cfg.system();
  EnsembleOptions opts{ctx.cfg.steps, ctx.cfg.count, ctx.seed, ctx.threads, ctx.cfg.start_law};
  const auto ecdf = simulate_ensemble(sys, ctx.cfg.init, opts);
  auto os = open_csv(ctx, "ecdf.csv", "simulate", "x,F_hat");
  const auto xs = ecdf.sorted();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i + 1 < xs.size() && xs[i + 1] == xs[i]) continue;
    os << g17(xs[i]) << ',' << g17(static_cast<double>(i + 1) / static_cast<double>(xs.size())) << '\n';
  }
  const double x0 = std::holds_alternative<PointStart>(ctx.cfg.init) ? std::get<PointStart>(ctx.cfg.init).x
                                                                        : sys.domain().interval().midpoint();
  const auto traj = simulate_trajectory(sys, x0, ctx.cfg.steps, ctx.seed, 0, ctx.cfg.start_law);
  auto ts = open_csv(ctx, "trajectory.csv", "simulate", "n,F_n,X_n");
  for (std::size_t n = 0; n < traj.points.size(); ++n) {
    ts << n << ',' << traj.points[n].countdown << ',' << g17(traj.points[n].x) << '\n';
  }
  out << "simulated " << ecdf.size() << " trajectories of " << ctx.cfg.steps << " steps\n";
  if (ctx.cfg.reference_cdf) out << "KS distance to reference CDF: " << ks_distance(ecdf, example_cdf<double>) << '\n';
  return kExitOk;
}

void write_measure(std::ofstream& os, const ProductMeasure& mu) {
  for (State j = 0; j < mu.states(); ++j) {
    for (std::size_t b = 0; b < mu.bins(); ++b) {
      if (mu.at(j, b) == 0.0) continue;
      os << j << ',' << g17(mu.grid().edge(b)) << ',' << g17(mu.grid().edge(b + 1)) << ',' << g17(mu.at(j, b))
         << '\n';
    }
  }
}

int cmd_evolve(const Context& ctx, std::ostream& out) {
  const auto sys = ctx.cfg.system();
  const auto r = iterate_to_convergence(sys, initial_measure(ctx.cfg, sys), ctx.cfg.max_iter, ctx.cfg.tol);
  auto ds = open_csv(ctx, "diagnostics.csv", "evolve", "n,tv_state,sup_cdf_delta,tail_mass");
  for (const auto& d : r.diagnostics) {
    ds << d.n << ',' << g17(d.tv_state) << ',' << g17(d.sup_cdf_delta) << ',' << g17(d.tail_mass) << '\n';
  }
  auto ms = open_csv(ctx, "measure.csv", "evolve", "state,bin_lo,bin_hi,mass");
  write_measure(ms, r.measure);
  out << (r.converged ? "converged" : "not converged") << " after " << r.iterations << " iterations";
  if (!r.diagnostics.empty()) out << ", TV(state, m) = " << r.diagnostics.back().tv_state;
  if (ctx.cfg.reference_cdf) {
    out << ", sup-CDF to reference = " << sup_cdf_distance(space_marginal(r.measure), example_cdf<double>);
  }
  out << '\n';
  return r.converged ? kExitOk : kExitNonconverged;
}

std::string contraction_text(const ContractionReport& r) {
  std::ostringstream os;
  os << "L0=" << g17(r.L0) << "\nL1=" << g17(r.L1) << "\nE=" << g17(r.E) << "\nexpectation=" << g17(r.expectation)
     << "\nproduct=" << g17(r.product) << "\nsatisfied=" << (r.satisfied ? 1 : 0)
     << "\nprinted_threshold=" << g17(r.printed_threshold)
     << "\nprinted_form_holds=" << (r.printed_form_holds ? 1 : 0) << "\nforms_agree=" << (r.forms_agree ? 1 : 0)
     << "\nthreshold=" << describe(mean_threshold(r.L0, r.L1))
     << "\nprinted_form_threshold=" << describe(mean_threshold(r.L1, r.L0)) << '\n';
  return os.str();
}

int cmd_check_contraction(const Globals& g, std::optional<double> L0, std::optional<double> L1,
                          std::optional<double> E, std::ostream& out) {
  std::optional<Context> ctx;
  if (!g.config.empty()) {
    ctx = make_context(g);
    if (!L0) L0 = ctx->cfg.L0;
    if (!L1) L1 = ctx->cfg.L1;
    if (!E) E = ctx->cfg.system().times().mean();
    if (!L0) throw ConfigError("g has no finite Lipschitz constant; declare stability.L0 or pass --L0");
    if (!L1) throw ConfigError("f has no finite Lipschitz constant; declare stability.L1 or pass --L1");
  }
  if (!L0 || !L1 || !E) throw ConfigError("check-contraction needs L0, L1 and E (flags or --config)");
  const auto text = contraction_text(average_contraction(*L0, *L1, *E));
  out << text;
  if (ctx) {
    std::ofstream os(ctx->out_dir / "contraction.txt");
    os << "# config_hash=" << ctx->hash << " seed=" << ctx->seed << '\n' << text;
  }
  return kExitOk;
}

void write_certificate(const Context& ctx, const std::string& name, const SplittingCertificate& c) {
  std::ofstream os(ctx.out_dir / name);
  os << "# config_hash=" << ctx.hash << " seed=" << ctx.seed << '\n' << to_text(c);
}

int cmd_find_splitting(const Context& ctx, const std::string& route, std::ostream& out) {
  const auto sys = ctx.cfg.system();
  bool found = false;
  if (route == "search" || route == "both") {
    if (const auto c = find_splitting(sys, ctx.cfg.max_len)) {
      write_certificate(ctx, "certificate_search.txt", *c);
      out << "search certificate:\n" << to_text(*c);
      found = true;
    } else {
      out << "search: no certificate within max_len " << ctx.cfg.max_len << '\n';
    }
  }
  if (route == "fixed-point" || route == "both") {
    const auto r = fixed_point_splitting(sys);
    if (r.certificate) {
      write_certificate(ctx, "certificate_fixed_point.txt", *r.certificate);
      out << "fixed-point certificate (" << r.diagnostic << "):\n" << to_text(*r.certificate);
      found = true;
    } else {
      out << "fixed-point: " << r.diagnostic << '\n';
    }
  }
  return found ? kExitOk : kExitNoCertificate;
}

int cmd_validate(const Context& ctx, const std::string& path, std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open certificate");
  std::ostringstream ss;
  ss << in.rdbuf();
  SplittingCertificate cert;
  try {
    cert = certificate_from_text(ss.str());
  } catch (const InvalidArgument& e) {
    throw ConfigError(path + ": " + e.what());
  }
  const auto check = validate_certificate(ctx.cfg.system(), cert);
  out << (check.ok ? "certificate valid" : "certificate INVALID") << '\n';
  for (const auto& p : check.problems) out << "  " << p << '\n';
  return check.ok ? kExitOk : kExitNoCertificate;
}

int cmd_stationary(const Context& ctx, std::ostream& out) {
  const auto sys = ctx.cfg.system();
  const CollapsedIFS cifs(sys);
  const auto nu_tilde = collapsed_stationary(cifs, ctx.cfg.bins, std::max<std::size_t>(ctx.cfg.max_iter, 1000),
                                             std::max(ctx.cfg.tol, 1e-14));
  const GridSpec grid(sys.domain(), ctx.cfg.bins);
  const auto ld = lift_stationary(sys, nu_tilde, grid, ctx.cfg.states);
  const double residual = fixed_point_residual(sys, ld);
  const auto op = iterate_to_convergence(sys, initial_measure(ctx.cfg, sys), ctx.cfg.max_iter, ctx.cfg.tol);
  const auto op_nu = space_marginal(op.measure);
  EnsembleOptions opts{ctx.cfg.steps, ctx.cfg.count, ctx.seed, ctx.threads, ctx.cfg.start_law};
  const auto ecdf = simulate_ensemble(sys, ctx.cfg.init, opts);

  auto os = open_csv(ctx, "comparison.csv", "stationary", "a,F_closed,F_lift,F_operator,F_empirical");
  for (std::size_t b = 0; b <= grid.bins(); ++b) {
    const double a = grid.edge(b);
    os << g17(a) << ',' << (ctx.cfg.reference_cdf ? g17(example_cdf(a)) : std::string()) << ','
       << g17(ld.nu.cdf(a)) << ',' << g17(op_nu.cdf(a)) << ',' << g17(ecdf(a)) << '\n';
  }
  auto ms = open_csv(ctx, "mu_star.csv", "stationary", "state,bin_lo,bin_hi,mass");
  write_measure(ms, ld.mu_star);

  out << "collapsed law: " << (nu_tilde.converged ? "converged" : "not converged") << " after "
      << nu_tilde.iterations << " iterations, residual " << nu_tilde.residual << '\n'
      << "lifted fixed-point residual: " << residual << '\n'
      << "sup-CDF lift vs operator: " << sup_cdf_distance(ld.nu, op_nu) << '\n';
  if (ctx.cfg.reference_cdf) {
    out << "sup-CDF lift vs reference: " << sup_cdf_distance(ld.nu, example_cdf<double>) << '\n';
  }
  return nu_tilde.converged && op.converged ? kExitOk : kExitNonconverged;
}

int cmd_sync(const Context& ctx, std::ostream& out) {
  const auto sys = ctx.cfg.system();
  const auto r = synchronization_test(sys, ctx.cfg.paths, ctx.cfg.path_len, ctx.cfg.sync_tol, ctx.seed, ctx.threads);
  auto os = open_csv(ctx, "sync.csv", "sync-test", "path,midpoint");
  for (std::size_t i = 0; i < r.midpoints.size(); ++i) os << i << ',' << g17(r.midpoints[i]) << '\n';
  out << "synchronized fraction: " << r.fraction << " (" << r.paths << " paths, length " << ctx.cfg.path_len
      << ", tol " << ctx.cfg.sync_tol << ")\nmean diameter: " << r.mean_diameter << '\n';
  if (r.mean_log_lipschitz) out << "mean (1/n) sum log L: " << *r.mean_log_lipschitz << '\n';
  return kExitOk;
}

int cmd_reproduce(const Globals& g, const std::vector<int>& ids, std::ostream& out) {
  AcceptanceOptions opts;
  opts.seed = resolve_seed(g, opts.seed);
  opts.threads = std::max<std::size_t>(1, g.threads);
  std::vector<CriterionResult> results;
  auto report = [&](const CriterionResult& r) {
    out << format_line(r) << '\n' << std::flush;
    results.push_back(r);
  };
  if (ids.empty()) {
    run_acceptance(opts, report);
  } else {
    for (int id : ids) report(run_criterion(id, opts));
  }
  if (g.out) {
    fs::create_directories(*g.out);
    std::ofstream os(fs::path(*g.out) / "acceptance.csv");
    os << "# seed=" << opts.seed << '\n' << "id,passed,seconds,limit_seconds,name,detail\n";
    for (const auto& r : results) {
      os << r.id << ',' << (r.passed ? 1 : 0) << ',' << r.seconds << ',' << r.limit_seconds << ",\"" << r.name
         << "\",\"" << r.detail << "\"\n";
    }
  }
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.passed;
  out << passed << "/" << results.size() << " criteria passed\n";
  return passed == results.size() ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic impulse systems on an interval: simulation, operators, certificates"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON experiment config");
  app.add_option("--seed", g.seed, "Master seed (overrides IMPULSE_SEED and the config)");
  app.add_option("--threads", g.threads, "Worker threads; results do not depend on it")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output directory (overrides outputs.directory)");

  auto* simulate = app.add_subcommand("simulate", "Ensemble ECDF and one trajectory as CSV");
  auto* evolve = app.add_subcommand("evolve", "Iterate the discretized operator; diagnostics as CSV");
  auto* contraction = app.add_subcommand("check-contraction", "Average-contraction report");
  std::optional<double> L0, L1, E;
  contraction->add_option("--L0", L0, "Lipschitz constant of g");
  contraction->add_option("--L1", L1, "Lipschitz constant of f");
  contraction->add_option("--mean", E, "Mean time between impulses");
  auto* splitting = app.add_subcommand("find-splitting", "Search for splitting certificates");
  std::string route = "both";
  splitting->add_option("--route", route, "search, fixed-point or both")
      ->check(CLI::IsMember({"search", "fixed-point", "both"}));
  auto* validate = app.add_subcommand("validate-certificate", "Re-check a certificate report");
  std::string cert_path;
  validate->add_option("--certificate", cert_path, "Certificate report")->required();
  auto* stationary_cmd = app.add_subcommand("stationary", "Lifted stationary law and CDF comparison table");
  auto* sync = app.add_subcommand("sync-test", "Monte-Carlo synchronization of reversed paths");
  auto* reproduce = app.add_subcommand("reproduce", "Run the acceptance suite");
  std::vector<int> ids;
  reproduce->add_option("--criterion", ids, "Run only these criteria (1-12)")->check(CLI::Range(1, kCriteria));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*reproduce) return cmd_reproduce(g, ids, out);
    if (*contraction) return cmd_check_contraction(g, L0, L1, E, out);
    const Context ctx = make_context(g);
    if (*simulate) return cmd_simulate(ctx, out);
    if (*evolve) return cmd_evolve(ctx, out);
    if (*splitting) return cmd_find_splitting(ctx, route, out);
    if (*validate) return cmd_validate(ctx, cert_path, out);
    if (*stationary_cmd) return cmd_stationary(ctx, out);
    if (*sync) return cmd_sync(ctx, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace impulse::tools
