#include "ccauction/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ccauction/simulate.hpp"

namespace ccauction {
namespace {

struct BicAcc {
  std::uint64_t types = 0, mismatches = 0, cross = 0, participation = 0;
  double worst = 0.0;
  void merge(const BicAcc& o) {
    types += o.types;
    mismatches += o.mismatches;
    cross += o.cross;
    participation += o.participation;
    worst = std::max(worst, o.worst);
  }
};

double band_draw(const AuctionParams& params, Rng& rng) {
  const double inv_lo = 1.0 / params.low_price(), inv_T = 1.0 / params.T;
  return 1.0 / (inv_lo - rng.uniform() * (inv_lo - inv_T));
}

}  // namespace

double best_menu_utility_exhaustive(std::span<const double> v, double a, double b, const AuctionParams& params) {
  const int m = static_cast<int>(v.size());
  if (m > 16) throw std::invalid_argument("best_menu_utility_exhaustive: m must be <= 16");
  std::uint64_t combos = 1;
  for (int j = 0; j < m; ++j) combos *= 3;
  double best = 0.0;  // null option
  for (std::uint64_t code = 0; code < combos; ++code) {
    ItemSet H = 0, L = 0;
    std::uint64_t c = code;
    for (int j = 0; j < m; ++j, c /= 3) {
      if (c % 3 == 1) H |= ItemSet{1} << j;
      else if (c % 3 == 2) L |= ItemSet{1} << j;
    }
    if (H == 0) continue;
    best = std::max(best, menu_utility(v, make_option(H, L, a, b, params), a, b));
  }
  return best;
}

std::vector<double> sample_menu_type(const AuctionParams& params, Rng& rng) {
  const auto dist = DistSpec::truncated(params.T);
  std::vector<double> v(static_cast<std::size_t>(params.m));
  if (rng.below(4) == 0) {
    for (auto& x : v) x = dist.draw(rng);
    return v;
  }
  const double T = params.T, lo = params.low_price();
  for (auto& x : v) {
    switch (rng.below(5)) {
      case 0: x = T; break;
      case 1: x = T * (1.0 - std::pow(10.0, -1.0 - static_cast<double>(rng.below(12)))); break;
      case 2: x = band_draw(params, rng); break;
      case 3: x = 1.0 + rng.uniform() * (lo - 1.0); break;
      default: x = dist.draw(rng); break;
    }
  }
  return v;
}

MenuBicReport menu_bic_check(double a, double b, const AuctionParams& params, std::uint64_t types, Seed seed,
                             int partners) {
  MenuBicReport rep;
  rep.types = types;
  rep.tolerance = 1e-9 * params.T;
  rep.enumerated = params.m <= 6;
  if (types == 0) return rep;
  const Seed type_seed = seed.child(1), pair_seed = seed.child(2);

  std::vector<std::vector<double>> v(types);
  std::vector<MenuOption> opt(types);
  const ChunkPlan plan{types, 1024};
  map_chunks<int>(plan, [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t i = lo; i < hi; ++i) {
      Rng rng(type_seed, i);
      v[i] = sample_menu_type(params, rng);
      opt[i] = nsn_preferred_option(v[i], a, b, params);
    }
    return 0;
  });

  const double tol = rep.tolerance;
  const auto acc = profile_reduce<BicAcc>(
      types, Exec::Parallel, [] { return BicAcc{}; },
      [&](std::uint64_t i, BicAcc& acc) {
        ++acc.types;
        const double u = menu_utility(v[i], opt[i], a, b);
        if (u < -tol) {
          ++acc.participation;
          acc.worst = std::max(acc.worst, -u);
        }
        if (rep.enumerated) {
          const double best = best_menu_utility_exhaustive(v[i], a, b, params);
          if (best - u > tol) {
            ++acc.mismatches;
            acc.worst = std::max(acc.worst, best - u);
          }
        }
        Rng rng(pair_seed, i);
        for (int k = 0; k < partners; ++k) {
          const auto other = rng.below(types);
          const double u_other = menu_utility(v[i], opt[other], a, b);
          if (u_other - u > tol) {
            ++acc.cross;
            acc.worst = std::max(acc.worst, u_other - u);
          }
        }
      },
      256);
  rep.enumeration_mismatches = acc.mismatches;
  rep.cross_type_violations = acc.cross;
  rep.participation_violations = acc.participation;
  rep.worst_shortfall = acc.worst;
  return rep;
}

double naive_interim_utility(std::span<const double> v, std::span<const double> r, const AuctionParams& params,
                             double a0, double b0) {
  const double T = params.T, lo = params.low_price();
  const int m = static_cast<int>(r.size());
  int t_reports = 0;
  for (double x : r) t_reports += x == T;
  double u = 0.0;
  for (int j = 0; j < m; ++j) {
    const auto sj = static_cast<std::size_t>(j);
    if (r[sj] == T) u += a0 * (v[sj] - T);
    else if (r[sj] >= lo && t_reports > 0) u += b0 * (v[sj] - lo);
  }
  return u;
}

double lna_interim_utility(std::span<const double> v, std::span<const double> r, const AuctionParams& params,
                           double a0, double b0) {
  int t_reports = 0;
  for (double x : r) t_reports += x == params.T;
  const double subsidy = b0 / a0 * (params.T - params.low_price());
  // Each T report after the first wins w.p. a0 and is subsidized when it wins.
  return naive_interim_utility(v, r, params, a0, b0) + std::max(0, t_reports - 1) * a0 * subsidy;
}

DeviationWitness lna_deviation_at(const AuctionParams& params, double a0, double b0, double eps) {
  if (params.m < 2) throw std::invalid_argument("lna deviation: needs m >= 2");
  DeviationWitness w;
  w.true_type.assign(static_cast<std::size_t>(params.m), 1.0);
  w.true_type[0] = params.T - eps;
  w.true_type[1] = 0.5 * (params.low_price() + params.T);
  w.misreport = w.true_type;
  w.misreport[0] = params.T;
  w.truthful_utility = lna_interim_utility(w.true_type, w.true_type, params, a0, b0);
  w.deviating_utility = lna_interim_utility(w.true_type, w.misreport, params, a0, b0);
  w.gain = w.deviating_utility - w.truthful_utility;
  return w;
}

DeviationWitness find_lna_deviation(const AuctionParams& params, double a0, double b0) {
  if (params.m < 2) throw std::invalid_argument("find_lna_deviation: needs m >= 2");
  const double T = params.T;
  const double step = std::pow(10.0, -0.25);
  for (double eps = T / 2; eps >= 1e-15 * T; eps *= step) {
    if (T - eps == T) continue;
    auto w = lna_deviation_at(params, a0, b0, eps);
    if (w.gain > 0.0) return w;
  }
  throw std::runtime_error("find_lna_deviation: no profitable eps down to 1e-15 T");
}

DeviationWitness find_naive_deviation(const AuctionParams& params) {
  if (params.m < 2) throw std::invalid_argument("find_naive_deviation: needs m >= 2");
  const double a0 = cf::a0(params.n, params.T), b0 = cf::b0(params.n, params.m, params.T);
  DeviationWitness w;
  w.true_type.assign(static_cast<std::size_t>(params.m), params.T);
  w.misreport = w.true_type;
  w.misreport[0] = params.low_price();
  w.truthful_utility = naive_interim_utility(w.true_type, w.true_type, params, a0, b0);
  w.deviating_utility = naive_interim_utility(w.true_type, w.misreport, params, a0, b0);
  w.gain = w.deviating_utility - w.truthful_utility;
  return w;
}

namespace {

// Per opponent profile and item: how many opponents sit in the high branch
// (favorite j, log v >= nm) and in the low branch (other favorite, v >= L).
struct KfaOpponents {
  int m = 0;
  std::uint64_t count = 0;
  std::vector<int> high, low;
};

KfaOpponents draw_kfa_opponents(int n, int m, std::uint64_t count, Seed seed) {
  KfaOpponents o{m, count, std::vector<int>(count * m, 0), std::vector<int>(count * m, 0)};
  if (n < 2) return o;
  const double nm = static_cast<double>(n) * m, L = std::sqrt(nm);
  const auto dist = DistSpec::equal_revenue();
  const ChunkPlan plan{count, 256};
  map_chunks<int>(plan, [&](std::uint64_t, std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t k = b; k < e; ++k) {
      const auto p = ValuationProfile::draw(n - 1, m, dist, seed, k);
      for (int i = 0; i < n - 1; ++i) {
        if (!has_distinct_values(p.row(i))) continue;
        const int f = favorite_item(p.row(i));
        for (int j = 0; j < m; ++j) {
          if (j == f && std::log(p(i, j)) >= nm) ++o.high[k * m + j];
          else if (j != f && p(i, j) >= L) ++o.low[k * m + j];
        }
      }
    }
    return 0;
  });
  return o;
}

// Utility of true type v reporting r, against opponent profile k.
double kfa_utility(std::span<const double> v, std::span<const double> r, const KfaOpponents& o, std::uint64_t k,
                   double nm) {
  if (!has_distinct_values(r)) return 0.0;
  const double L = std::sqrt(nm);
  const int f = favorite_item(r);
  double u = 0.0;
  for (int j = 0; j < o.m; ++j) {
    const auto sj = static_cast<std::size_t>(j);
    const int h = o.high[k * o.m + j], l = o.low[k * o.m + j];
    if (j == f) {
      if (std::log(r[sj]) >= nm) u += (v[sj] - std::exp(nm)) / (1.0 + h);
    } else if (r[sj] >= L && h == 0) {
      u += (v[sj] - L) / (1.0 + l);
    }
  }
  return u;
}

double kfa_mean_utility(std::span<const double> v, std::span<const double> r, const KfaOpponents& o, double nm) {
  Moments u;
  for (std::uint64_t k = 0; k < o.count; ++k) u.add(kfa_utility(v, r, o, k, nm));
  return u.mean;
}

Moments kfa_gain(std::span<const double> v, std::span<const double> r, const KfaOpponents& o, double nm) {
  Moments g;
  for (std::uint64_t k = 0; k < o.count; ++k) g.add(kfa_utility(v, r, o, k, nm) - kfa_utility(v, v, o, k, nm));
  return g;
}

}  // namespace

KfBicReport kf_bic_check(int n, int m, std::uint64_t types, std::uint64_t opponents, Seed seed,
                         int misreports_per_type) {
  if (n < 1 || m < 1) throw std::invalid_argument("kf_bic_check: n and m must be >= 1");
  const double nm = static_cast<double>(n) * m, L = std::sqrt(nm);
  const bool can_reach_H = nm < 700.0;
  const auto opp = draw_kfa_opponents(n, m, opponents, seed.child(1));
  const auto dist = DistSpec::equal_revenue();

  KfBicReport rep;
  rep.max_same_favorite_gain = -std::numeric_limits<double>::infinity();
  for (std::uint64_t t = 0; t < types; ++t) {
    Rng rng(seed.child(2), t);
    std::vector<double> v(static_cast<std::size_t>(m));
    do {
      for (auto& x : v) x = dist.draw(rng);
    } while (!has_distinct_values(v));
    ++rep.types;
    const int f = favorite_item(v);

    for (int k = 0; k < misreports_per_type; ++k) {
      auto r = v;
      for (int j = 0; j < m; ++j) {
        auto& x = r[static_cast<std::size_t>(j)];
        switch (rng.below(4)) {
          case 0: break;
          case 1: x = dist.draw(rng); break;
          case 2: x = L * (0.5 + 1.5 * rng.uniform()); break;
          default: x = (j == f && can_reach_H) ? std::exp(nm) * (1.0 + rng.uniform()) : x * (0.5 + rng.uniform()); break;
        }
      }
      double top = 0.0;
      for (int j = 0; j < m; ++j)
        if (j != f) top = std::max(top, r[static_cast<std::size_t>(j)]);
      if (r[static_cast<std::size_t>(f)] <= top) r[static_cast<std::size_t>(f)] = 1.5 * top;
      ++rep.misreports;
      const auto g = kfa_gain(v, r, opp, nm);
      if (g.mean > rep.max_same_favorite_gain) {
        rep.max_same_favorite_gain = g.mean;
        rep.max_gain_stderr = g.stderr_mean();
      }
    }

    // Switch the favorite to an item below L so item f becomes low-eligible.
    if (m >= 2 && v[static_cast<std::size_t>(f)] >= L) {
      for (int k = 0; k < m; ++k) {
        if (k == f || v[static_cast<std::size_t>(k)] >= L) continue;
        auto r = v;
        r[static_cast<std::size_t>(k)] = 1.5 * v[static_cast<std::size_t>(f)];
        if (can_reach_H && std::log(r[static_cast<std::size_t>(k)]) >= nm) continue;
        const auto g = kfa_gain(v, r, opp, nm);
        if (g.mean > 3.0 * g.stderr_mean() && rep.favorite_switching.size() < 32) {
          DeviationWitness w;
          w.true_type = v;
          w.misreport = r;
          w.truthful_utility = kfa_mean_utility(v, v, opp, nm);
          w.deviating_utility = kfa_mean_utility(v, r, opp, nm);
          w.gain = g.mean;
          rep.favorite_switching.push_back(std::move(w));
        }
        break;
      }
    }
  }
  if (rep.misreports == 0) rep.max_same_favorite_gain = 0.0;
  return rep;
}

}  // namespace ccauction
