#include "ccauction/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ccauction {
namespace {

double rel_change(double next, double cur) {
  if (cur == 0.0) return std::abs(next);
  return std::abs(next - cur) / std::abs(cur);
}

std::vector<QEstimate> estimate_all_q(double a, double b, const AuctionParams& params, const SolverConfig& cfg,
                                      Seed seed) {
  std::vector<QEstimate> q;
  for (int ell = 1; ell <= params.m - 1; ++ell)
    q.push_back(estimate_q_ell(ell, a, b, params, cfg.samples, seed, cfg.exec));
  return q;
}

std::vector<double> values_of(const std::vector<QEstimate>& q) {
  std::vector<double> v;
  for (const auto& e : q) v.push_back(e.value);
  return v;
}

void require_menu_regime(const AuctionParams& params) {
  if (!params.above_sqrt_mn()) throw std::invalid_argument("fixed point: needs T >= sqrt(mn)");
}

// Standard error of (a, b) induced by independent q errors, by finite differences.
std::pair<double, double> propagate(const std::vector<double>& q, const std::vector<double>& se,
                                    const AuctionParams& params, NoHighExponent e) {
  const auto base = cf::rates_map(q, params, e);
  double va = 0.0, vb = 0.0;
  for (std::size_t l = 0; l < q.size(); ++l) {
    if (se[l] <= 0.0) continue;
    auto bumped = q;
    bumped[l] = std::min(1.0, q[l] + se[l]);
    const auto r = cf::rates_map(bumped, params, e);
    va += (r.a - base.a) * (r.a - base.a);
    vb += (r.b - base.b) * (r.b - base.b);
  }
  return {std::sqrt(va), std::sqrt(vb)};
}

}  // namespace

QEstimate estimate_q_ell(int ell, double a, double b, const AuctionParams& params, std::uint64_t samples,
                         Seed seed, Exec exec) {
  if (ell < 1 || ell > params.m - 1) throw std::invalid_argument("estimate_q_ell: l must lie in [1, m-1]");
  const double lo = params.low_price(), T = params.T;
  if (!(lo < T)) throw std::invalid_argument("estimate_q_ell: empty band, mn/T >= T");
  if (lo < 1.0) throw std::invalid_argument("estimate_q_ell: mn/T below 1 (T > mn)");
  if (!(a > 0.0) || b < 0.0) throw std::invalid_argument("estimate_q_ell: needs a > 0 and b >= 0");
  if (samples == 0) throw std::invalid_argument("estimate_q_ell: needs samples >= 1");

  const double inv_lo = 1.0 / lo, inv_T = 1.0 / T;
  const double width = inv_lo - inv_T;
  const double slope = b / a;
  const Seed s = seed.child(static_cast<std::uint64_t>(ell));
  const auto mo = profile_reduce<Moments>(
      samples, exec, [] { return Moments{}; },
      [&](std::uint64_t i, Moments& acc) {
        Rng rng(s, i);
        double mx = lo, sum = 0.0;
        for (int k = 0; k < ell; ++k) {
          const double v = 1.0 / (inv_lo - rng.uniform() * width);
          mx = std::max(mx, v);
          sum += v;
        }
        const double y = std::max(mx, T - slope * (sum - ell * lo));
        acc.add(y >= T ? 0.0 : (1.0 / y - inv_T) / width);
      },
      4096);
  const double region = std::pow(params.band_mass(), ell + 1) * std::pow(params.below_band_mass(), params.m - ell - 1);
  return {region * mo.mean, region * mo.stderr_mean()};
}

FixedPointSolution solve(const AuctionParams& params, const SolverConfig& cfg) {
  require_menu_regime(params);
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("solve: tol must be positive");
  if (!(cfg.damping > 0.0 && cfg.damping <= 1.0)) throw std::invalid_argument("solve: damping must lie in (0, 1]");
  if (cfg.max_iter < 1) throw std::invalid_argument("solve: max_iter must be >= 1");

  FixedPointSolution sol;
  sol.seed = cfg.seed;
  sol.a0 = cf::a0(params.n, params.T);
  sol.b0 = cf::b0(params.n, params.m, params.T, cfg.exponent);

  if (params.m == 1) {
    sol.rates = cf::rates_map({}, params, cfg.exponent);
    sol.iterations = 1;
    sol.residual = 0.0;
    sol.residual_trace = {0.0};
    sol.converged = true;
    return sol;
  }

  double a = sol.a0, b = sol.b0;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const auto q = estimate_all_q(a, b, params, cfg, cfg.seed);
    const auto r = cf::rates_map(values_of(q), params, cfg.exponent);
    const double res = std::max(rel_change(r.a, a), rel_change(r.b, b));
    sol.residual_trace.push_back(res);
    if (res <= cfg.tol) {
      sol.rates = r;
      sol.iterations = it;
      sol.residual = res;
      for (const auto& e : q) sol.q_stderr.push_back(e.std_error);
      sol.converged = true;
      return sol;
    }
    a += cfg.damping * (r.a - a);
    b += cfg.damping * (r.b - b);
  }
  throw NonConvergence("solve: no convergence after " + std::to_string(cfg.max_iter) + " iterations (residual " +
                           std::to_string(sol.residual_trace.back()) + ")",
                       sol.residual_trace);
}

FeasibilityReport feasibility_check(double a, double b, const AuctionParams& params, const SimConfig& cfg) {
  const auto rr = simulate_realized_rates(params, a, b, cfg);
  FeasibilityReport f;
  f.target_a = a;
  f.target_b = b;
  f.realized_a = rr.high.ratio();
  f.realized_b = rr.low.ratio();
  f.stderr_a = rr.high.ratio_stderr();
  f.stderr_b = rr.low.ratio_stderr();
  auto z = [](double got, double want, double se) {
    if (se > 0.0) return (got - want) / se;
    return got == want ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), got - want);
  };
  // With no slots of a class observed there is nothing to test for it.
  f.z_a = rr.high.mean_x > 0.0 ? z(f.realized_a, a, f.stderr_a) : 0.0;
  f.z_b = rr.low.mean_x > 0.0 ? z(f.realized_b, b, f.stderr_b) : 0.0;
  f.profiles = cfg.profiles;
  f.supply_violations = rr.supply_violations;
  f.pass = std::abs(f.z_a) <= 3.0 && std::abs(f.z_b) <= 3.0 && f.supply_violations == 0;
  return f;
}

bool ValidationReport::pass() const noexcept {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return bounds.all_pass() && feasibility.pass;
}

ValidationReport validate(const FixedPointSolution& s, const AuctionParams& params, const SimConfig& feasibility_cfg,
                          const SolverConfig& solver_cfg) {
  require_menu_regime(params);
  ValidationReport rep;
  const auto& r = s.rates;
  rep.checks.push_back({"converged", s.converged, s.residual, solver_cfg.tol});
  rep.bounds = cf::bound_suite(r, params);

  if (params.m > 1) {
    const Seed fresh = s.seed.child(0xfe55);
    const auto q = estimate_all_q(r.a, r.b, params, solver_cfg, fresh);
    const auto next = cf::rates_map(values_of(q), params, solver_cfg.exponent);
    std::vector<double> se;
    for (std::size_t l = 0; l < q.size(); ++l) {
      const double own = l < s.q_stderr.size() ? s.q_stderr[l] : 0.0;
      se.push_back(std::hypot(own, q[l].std_error));
    }
    const auto [pa, pb] = propagate(r.q, se, params, solver_cfg.exponent);
    const double da = std::abs(next.a - r.a), db = std::abs(next.b - r.b);
    const double la = solver_cfg.tol * r.a + 3.0 * pa, lb = solver_cfg.tol * r.b + 3.0 * pb;
    rep.checks.push_back({"fresh_seed_residual_a", da <= la, da, la});
    rep.checks.push_back({"fresh_seed_residual_b", db <= lb, db, lb});
  }
  rep.feasibility = feasibility_check(r.a, r.b, params, feasibility_cfg);
  return rep;
}

}  // namespace ccauction
