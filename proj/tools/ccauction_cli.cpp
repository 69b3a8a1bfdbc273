// Command-line front end: closed forms, fixed-point solves, verification and
// desk-scale experiments, emitted as CSV or JSON.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>

#include "ccauction/distributions.hpp"
#include "ccauction/experiments.hpp"
#include "ccauction/fixed_point.hpp"
#include "ccauction/json_io.hpp"
#include "ccauction/parallel.hpp"
#include "ccauction/simulate.hpp"
#include "ccauction/verification.hpp"

using namespace ccauction;
using nlohmann::json;

namespace {

struct Options {
  int n = 64;
  int m = 2;
  std::optional<double> lambda;
  std::optional<double> T;
  std::optional<std::uint64_t> samples;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out;
  std::string format = "json";
  std::string cache;
  std::string grid;
  std::string dist = "ert";
  std::uint64_t types = 10000;
  std::uint64_t profiles = 1000000;
};

// Non-zero exit without an extra message: the report already says what failed.
struct CheckFailed {};

AuctionParams resolve_params(const Options& o) {
  if (o.T) return AuctionParams::with_T(o.n, o.m, *o.T);
  return AuctionParams::from_lambda(o.n, o.m, o.lambda.value_or(1.5));
}

SolverConfig solver_config(const Options& o) {
  SolverConfig cfg;
  cfg.samples = o.samples.value_or(cfg.samples);
  cfg.seed = Seed{o.seed, 0};
  return cfg;
}

std::optional<SolutionCache> open_cache(const Options& o) {
  if (o.cache.empty()) return std::nullopt;
  return SolutionCache(o.cache);
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw std::runtime_error("cannot open " + o.out);
  f << text;
}

void emit_json(const Options& o, json doc) {
  doc["schema_version"] = kSchemaVersion;
  emit(o, doc.dump(2) + "\n");
}

std::string csv_line(std::initializer_list<std::string> cells) {
  std::string s;
  for (const auto& c : cells) s += (s.empty() ? "" : ",") + c;
  return s + "\n";
}

std::string fmt(double x) { return format_double(x); }

void print_config(const std::string& command, const Options& o) {
  json cfg{{"command", command}, {"n", o.n}, {"m", o.m}, {"seed", o.seed}, {"format", o.format}};
  if (o.lambda) cfg["lambda"] = *o.lambda;
  if (o.T) cfg["T"] = *o.T;
  if (o.samples) cfg["samples"] = *o.samples;
  if (!o.grid.empty()) cfg["grid"] = o.grid;
  if (!o.cache.empty()) cfg["cache"] = o.cache;
  cfg["threads"] = thread_count();
  std::cerr << "config " << cfg.dump() << '\n';
}

void run_srev(const Options& o) {
  const auto p = resolve_params(o);
  const double v = cf::srev(p.n, p.m, p.T);
  if (o.format == "csv") emit(o, "n,m,T,srev\n" + csv_line({std::to_string(p.n), std::to_string(p.m), fmt(p.T), fmt(v)}));
  else emit_json(o, {{"n", p.n}, {"m", p.m}, {"T", p.T}, {"srev", v}});
}

void run_solve(const Options& o) {
  const auto p = resolve_params(o);
  const auto cache = open_cache(o);
  const auto s = solve_cached(p, solver_config(o), cache ? &*cache : nullptr);
  if (o.format == "csv") {
    emit(o, "n,m,T,a,b,a0,b0,iterations,residual\n" +
                csv_line({std::to_string(p.n), std::to_string(p.m), fmt(p.T), fmt(s.rates.a), fmt(s.rates.b),
                          fmt(s.a0), fmt(s.b0), std::to_string(s.iterations), fmt(s.residual)}));
  } else {
    emit_json(o, {{"n", p.n}, {"m", p.m}, {"T", p.T}, {"solution", s}});
  }
}

void run_verify(const Options& o) {
  const auto p = resolve_params(o);
  const auto cache = open_cache(o);
  const auto cfg = solver_config(o);
  const auto s = solve_cached(p, cfg, cache ? &*cache : nullptr);
  const auto v = validate(s, p, SimConfig{o.profiles, Seed{o.seed, 1}}, cfg);
  const auto bic = menu_bic_check(s.rates.a, s.rates.b, p, o.types, Seed{o.seed, 2});
  json doc{{"n", p.n}, {"m", p.m}, {"T", p.T}, {"validation", v}, {"menu_bic", bic}};
  bool ok = v.pass() && bic.pass();
  if (p.m >= 2) {
    const auto naive = find_naive_deviation(p);
    const auto lna = find_lna_deviation(p, s.a0, s.b0);
    doc["naive_deviation"] = naive;
    doc["lna_deviation"] = lna;
    ok = ok && naive.gain > 0.0 && lna.gain > 0.0;
  }
  doc["pass"] = ok;
  if (o.format == "csv") {
    emit(o, "n,m,T,validation,menu_bic,pass\n" +
                csv_line({std::to_string(p.n), std::to_string(p.m), fmt(p.T), v.pass() ? "1" : "0",
                          bic.pass() ? "1" : "0", ok ? "1" : "0"}));
  } else {
    emit_json(o, doc);
  }
  if (!ok) throw CheckFailed{};
}

void run_ccx(const Options& o) {
  const auto p = resolve_params(o);
  const auto cache = open_cache(o);
  const auto row = competition_complexity(p, solve_cached(p, solver_config(o), cache ? &*cache : nullptr));
  if (o.format == "csv") emit(o, sweep_csv({row}));
  else emit_json(o, {{"row", row}});
}

void run_sweep(const Options& o) {
  if (o.grid.empty()) throw std::invalid_argument("sweep: --grid is required");
  const auto cache = open_cache(o);
  const auto st = scaling_study(parse_grid(o.grid, o.lambda.value_or(1.5)), solver_config(o), cache ? &*cache : nullptr);
  if (o.format == "csv") {
    emit(o, sweep_csv(st.rows));
    return;
  }
  json skipped = json::array();
  for (const auto& g : st.skipped) skipped.push_back({{"n", g.n}, {"m", g.m}, {"lambda", g.lambda}});
  emit_json(o, {{"rows", st.rows}, {"fit", st.fit}, {"skipped", skipped}});
}

void run_bundle(const Options& o) {
  const auto grid = parse_grid(o.grid.empty() ? "m=2,4,8:n=8,16,32" : o.grid);
  const auto st = grand_bundle_study(grid, o.samples.value_or(1 << 18), Seed{o.seed, 0});
  bool ok = true;
  for (const auto& r : st.rows) ok = ok && r.second_fav_in_bounds;
  if (o.format == "csv") {
    std::string s = "n,m,revenue,revenue_se,proxy,proxy_se,second_favorite,second_favorite_se,lower,upper,in_bounds\n";
    for (const auto& r : st.rows)
      s += csv_line({std::to_string(r.n), std::to_string(r.m), fmt(r.revenue.mean), fmt(r.revenue.std_error),
                     fmt(r.proxy.mean), fmt(r.proxy.std_error), fmt(r.second_fav.mean), fmt(r.second_fav.std_error),
                     fmt(r.lower), fmt(r.upper), r.second_fav_in_bounds ? "1" : "0"});
    emit(o, s);
  } else {
    emit_json(o, {{"rows", st.rows}, {"fit", st.fit}});
  }
  if (!ok) throw CheckFailed{};
}

void run_kfa(const Options& o) {
  const auto st = kfa_study(o.n, o.m, o.samples.value_or(1 << 17), Seed{o.seed, 0});
  const auto bic = kf_bic_check(o.n, o.m, 64, 4096, Seed{o.seed, 1});
  const bool ok = st.excess >= st.excess_lower_bound - 3.0 * st.low_revenue.std_error && bic.pass();
  if (o.format == "csv") {
    emit(o, "n,m,high_revenue,low_revenue,low_revenue_se,total,excess,excess_lower_bound,ratio,kf_bic\n" +
                csv_line({std::to_string(st.n), std::to_string(st.m), fmt(st.high_revenue), fmt(st.low_revenue.mean),
                          fmt(st.low_revenue.std_error), fmt(st.total), fmt(st.excess), fmt(st.excess_lower_bound),
                          fmt(st.ratio), bic.pass() ? "1" : "0"}));
  } else {
    emit_json(o, {{"study", st}, {"kf_bic", bic}, {"pass", ok}});
  }
  if (!ok) throw CheckFailed{};
}

void run_benchmark(const Options& o) {
  const std::uint64_t samples = o.samples.value_or(1 << 16);
  if (o.dist == "er") {
    const auto b = cdw_benchmark(DistSpec::equal_revenue(), o.n, o.m, samples, Seed{o.seed, 0});
    if (o.format == "csv")
      emit(o, "n,m,benchmark,benchmark_se\n" + csv_line({std::to_string(o.n), std::to_string(o.m), fmt(b.mean), fmt(b.std_error)}));
    else emit_json(o, {{"n", o.n}, {"m", o.m}, {"dist", "er"}, {"benchmark", b}});
    return;
  }
  const auto p = resolve_params(o);
  const auto bench = cdw_benchmark(DistSpec::truncated(p.T), p.n, p.m, samples, Seed{o.seed, 0});
  const auto cache = open_cache(o);
  const auto s = solve_cached(p, solver_config(o), cache ? &*cache : nullptr);
  const auto rev = simulate_mechanisms(p, s.a0, s.b0, &s.rates, SimConfig{samples, Seed{o.seed, 1}});
  json mech{{"srev", rev.srev}, {"naive", rev.naive}, {"less_naive", rev.less_naive}, {"nsn", *rev.nsn}};
  bool ok = true;
  for (const auto& e : {rev.srev, rev.naive, rev.less_naive, *rev.nsn})
    ok = ok && bench.mean + 3.0 * std::hypot(bench.std_error, e.std_error) >= e.mean;
  if (o.format == "csv") {
    std::string out = "mechanism,revenue,revenue_se,benchmark,benchmark_se\n";
    for (const auto& [name, e] : {std::pair{"srev", rev.srev}, std::pair{"naive", rev.naive},
                                  std::pair{"less_naive", rev.less_naive}, std::pair{"nsn", *rev.nsn}})
      out += csv_line({name, fmt(e.mean), fmt(e.std_error), fmt(bench.mean), fmt(bench.std_error)});
    emit(o, out);
  } else {
    emit_json(o, {{"n", p.n}, {"m", p.m}, {"T", p.T}, {"benchmark", bench}, {"mechanisms", mech}, {"pass", ok}});
  }
  if (!ok) throw CheckFailed{};
}

void run_marginals(const Options& o) {
  const auto samples = static_cast<std::int64_t>(o.samples.value_or(1000000));
  auto ms = dist::sample_marginals(o.m, Seed{o.seed, 0}, samples);
  const int m = o.m;
  const double ks_fav = ks_statistic(ms.favorite, [m](double x) { return dist::favorite_marginal(m, x).cdf; });
  json doc{{"m", m}, {"samples", samples}, {"ks_favorite", ks_fav}, {"threshold", 0.005}};
  bool ok = ks_fav < 0.005;
  std::string ks_non = "";
  if (m >= 2) {
    const double ks = ks_statistic(ms.nonfavorite, [m](double x) { return dist::nonfavorite_marginal(m, x).cdf; });
    doc["ks_nonfavorite"] = ks;
    ks_non = fmt(ks);
    ok = ok && ks < 0.005;
  }
  doc["pass"] = ok;
  if (o.format == "csv")
    emit(o, "m,samples,ks_favorite,ks_nonfavorite\n" + csv_line({std::to_string(m), std::to_string(samples), fmt(ks_fav), ks_non}));
  else emit_json(o, doc);
  if (!ok) throw CheckFailed{};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Auction toolkit for truncated Equal-Revenue bidders"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;

  app.add_option("--n", o.n, "bidders")->check(CLI::PositiveNumber);
  app.add_option("--m", o.m, "items")->check(CLI::Range(1, 64));
  auto* lam = app.add_option("--lambda", o.lambda, "T = lambda sqrt(nm)");
  auto* t = app.add_option("--t", o.T, "truncation point T");
  lam->excludes(t);
  app.add_option("--samples", o.samples, "Monte Carlo samples");
  app.add_option("--seed", o.seed, "root seed");
  app.add_option("--threads", o.threads, "worker threads (0: runtime default)");
  app.add_option("--out", o.out, "output path (default stdout)");
  app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--cache", o.cache, "fixed-point solution cache directory");
  app.add_option("--grid", o.grid, "grid such as m=2:n=64,128,256,512");

  struct Sub {
    const char* name;
    const char* help;
    void (*run)(const Options&);
  };
  const Sub subs[] = {
      {"srev", "selling-separately revenue", run_srev},
      {"solve", "solve the menu fixed point", run_solve},
      {"verify", "validate a solution and check incentives", run_verify},
      {"ccx", "competition complexity at one point", run_ccx},
      {"sweep", "competition-complexity scaling over a grid", run_sweep},
      {"bundle", "grand-bundle revenue study", run_bundle},
      {"kfa", "Knows-Favorite Auction study", run_kfa},
      {"benchmark", "canonical-flow benchmark vs mechanisms", run_benchmark},
      {"marginals", "KS tests of the favorite/non-favorite marginals", run_marginals},
  };
  for (const auto& s : subs) {
    auto* sc = app.add_subcommand(s.name, s.help);
    if (std::string(s.name) == "verify") {
      sc->add_option("--types", o.types, "sampled types for the menu check");
      sc->add_option("--profiles", o.profiles, "profiles for the feasibility check");
    }
    if (std::string(s.name) == "benchmark")
      sc->add_option("--dist", o.dist, "er or ert")->check(CLI::IsMember({"er", "ert"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  set_thread_count(o.threads);
  for (const auto& s : subs) {
    if (!app.got_subcommand(s.name)) continue;
    print_config(s.name, o);
    std::cerr << "seed " << o.seed << '\n';
    try {
      s.run(o);
    } catch (const CheckFailed&) {
      return 1;
    } catch (const std::invalid_argument& e) {
      std::cerr << "usage error: " << e.what() << '\n';
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }
  return 0;
}
