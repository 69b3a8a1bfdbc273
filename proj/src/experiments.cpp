#include "ccauction/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ccauction/json_io.hpp"
#include "ccauction/mechanisms.hpp"
#include "ccauction/numerics.hpp"

namespace ccauction {

using nlohmann::json;

SweepRow competition_complexity(const AuctionParams& p, const FixedPointSolution& s) {
  if (!s.converged) throw std::invalid_argument("competition_complexity: solution did not converge");
  SweepRow row;
  row.n = p.n;
  row.m = p.m;
  row.lambda = p.effective_lambda();
  row.T = p.T;
  row.residual = s.residual;
  row.srev_n = cf::srev(p.n, p.m, p.T);
  row.rev_nsn = p.n * cf::nsn_revenue_per_bidder(s.rates, p);
  row.gain = cf::nsn_gain_over_srev(s.rates, p);

  const double inv = 1.0 / p.T;
  const double none_at_T = num::pow1m(inv, p.n);
  row.analytic_lb = s.rates.b * p.n * static_cast<double>(p.n) * p.band_mass() * cf::multi_t_mass(p.m, p.T) / none_at_T;

  const double cap = p.m * p.T * none_at_T;  // SRev_infinity - SRev_n
  auto increment = [&](std::int64_t c) { return cap * num::one_minus_pow1m(inv, static_cast<double>(c)); };
  if (row.gain <= 0.0) return row;
  if (row.gain >= cap) throw std::domain_error("competition_complexity: no finite c reaches the NSN revenue");
  std::int64_t hi = 1;
  while (increment(hi) < row.gain) hi *= 2;
  std::int64_t lo = hi / 2;  // increment(lo) < gain, or lo == 0
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (increment(mid) >= row.gain ? hi : lo) = mid;
  }
  row.c_star = static_cast<int>(hi);
  return row;
}

namespace {

json cache_key(const AuctionParams& p, const SolverConfig& cfg) {
  return json{{"n", p.n},
              {"m", p.m},
              {"T", p.T},
              {"tol", cfg.tol},
              {"max_iter", cfg.max_iter},
              {"damping", cfg.damping},
              {"samples", cfg.samples},
              {"seed", cfg.seed},
              {"exponent", cfg.exponent == NoHighExponent::OtherBidders ? "other_bidders" : "all_bidders"}};
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

}  // namespace

SolutionCache::SolutionCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path SolutionCache::path_for(const AuctionParams& p, const SolverConfig& cfg) const {
  char name[64];
  std::snprintf(name, sizeof name, "fp_n%d_m%d_%016llx.json", p.n, p.m,
                static_cast<unsigned long long>(fnv1a(cache_key(p, cfg).dump())));
  return dir_ / name;
}

std::optional<FixedPointSolution> SolutionCache::load(const AuctionParams& p, const SolverConfig& cfg) const {
  std::ifstream in(path_for(p, cfg));
  if (!in) return std::nullopt;
  try {
    const auto doc = json::parse(in);
    if (doc.at("schema_version") != kSchemaVersion || doc.at("key") != cache_key(p, cfg)) return std::nullopt;
    return doc.at("solution").get<FixedPointSolution>();
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

void SolutionCache::store(const AuctionParams& p, const SolverConfig& cfg, const FixedPointSolution& s) const {
  const auto target = path_for(p, cfg);
  auto tmp = target;
  tmp += ".tmp" + std::to_string(std::random_device{}());
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("SolutionCache: cannot write " + tmp.string());
    out << json{{"schema_version", kSchemaVersion}, {"key", cache_key(p, cfg)}, {"solution", s}}.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, target);
}

FixedPointSolution solve_cached(const AuctionParams& p, const SolverConfig& cfg, const SolutionCache* cache) {
  if (cache) {
    if (auto hit = cache->load(p, cfg)) return *hit;
  }
  auto s = solve(p, cfg);
  if (cache) cache->store(p, cfg, s);
  return s;
}

std::vector<GridPoint> parse_grid(const std::string& spec, double default_lambda) {
  std::vector<int> ns, ms;
  std::vector<double> lambdas;
  std::stringstream parts(spec);
  std::string part;
  while (std::getline(parts, part, ':')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("grid: expected key=values in '" + part + "'");
    const std::string key = part.substr(0, eq);
    std::stringstream values(part.substr(eq + 1));
    std::string item;
    while (std::getline(values, item, ',')) {
      std::size_t used = 0;
      try {
        if (key == "n") ns.push_back(std::stoi(item, &used));
        else if (key == "m") ms.push_back(std::stoi(item, &used));
        else if (key == "lambda") lambdas.push_back(std::stod(item, &used));
        else throw std::invalid_argument("grid: unknown key '" + key + "'");
      } catch (const std::logic_error&) {
        throw std::invalid_argument("grid: bad value '" + item + "' for " + key);
      }
      if (used != item.size()) throw std::invalid_argument("grid: bad value '" + item + "' for " + key);
    }
  }
  if (ns.empty() || ms.empty()) throw std::invalid_argument("grid: needs both n and m");
  if (lambdas.empty()) lambdas.push_back(default_lambda);
  std::vector<GridPoint> out;
  for (int m : ms)
    for (int n : ns)
      for (double l : lambdas) out.push_back({n, m, l});
  return out;
}

ScalingStudy scaling_study(const std::vector<GridPoint>& grid, const SolverConfig& cfg, const SolutionCache* cache) {
  ScalingStudy st;
  std::vector<double> x, y;
  for (const auto& g : grid) {
    if (!(g.lambda > 1.0) || g.n < 1 || g.m < 1) {
      st.skipped.push_back(g);
      continue;
    }
    const auto p = AuctionParams::from_lambda(g.n, g.m, g.lambda);
    if (!p.in_regime()) {
      st.skipped.push_back(g);
      continue;
    }
    const auto row = competition_complexity(p, solve_cached(p, cfg, cache));
    st.rows.push_back(row);
    x.push_back(std::sqrt(static_cast<double>(g.n) * g.m));
    y.push_back(row.c_star);
  }
  st.fit = ols(x, y);
  return st;
}

RevenueEstimate cdw_benchmark(const DistSpec& dist, int n, int m, std::uint64_t samples, Seed seed, Exec exec) {
  if (n < 1 || m < 1) throw std::invalid_argument("cdw_benchmark: n and m must be >= 1");
  if (!dist.is_truncated() && n < 2) throw std::invalid_argument("cdw_benchmark: untruncated ER needs n >= 2");
  const double T = dist.T();
  auto per_profile = [&](std::uint64_t k) {
    const auto p = ValuationProfile::draw(n, m, dist, seed, k);
    std::vector<int> fav(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) fav[static_cast<std::size_t>(i)] = favorite_item(p.row(i));
    double total = 0.0;
    for (int j = 0; j < m; ++j) {
      double best = 0.0;
      for (int i = 0; i < n; ++i) {
        const double v = p(i, j);
        const double phi = fav[static_cast<std::size_t>(i)] != j ? v : (v == T ? T : 0.0);
        best = std::max(best, phi);
      }
      total += best;
    }
    return total;
  };
  if (dist.is_truncated()) {
    const auto mo = profile_reduce<Moments>(
        samples, exec, [] { return Moments{}; }, [&](std::uint64_t k, Moments& acc) { acc.add(per_profile(k)); });
    return RevenueEstimate::from(mo, seed);
  }
  const auto bm = profile_reduce<BlockMoments>(
      samples, exec, [] { return BlockMoments(32); },
      [&](std::uint64_t k, BlockMoments& acc) { acc.blocks[k % 32].add(per_profile(k)); });
  auto est = RevenueEstimate::from(bm, seed);
  est.mean += static_cast<double>(n) * m;
  return est;
}

namespace {

struct BundleAcc {
  BlockMoments revenue{32}, proxy{32}, second_fav{32};
  void merge(const BundleAcc& o) {
    revenue.merge(o.revenue);
    proxy.merge(o.proxy);
    second_fav.merge(o.second_fav);
  }
};

}  // namespace

GrandBundleRow grand_bundle_point(int n, int m, std::uint64_t samples, Seed seed, Exec exec) {
  const auto forms = cf::grand_bundle_forms(n, m);
  const auto dist = DistSpec::equal_revenue();
  const auto acc = profile_reduce<BundleAcc>(
      samples, exec, [] { return BundleAcc{}; },
      [&](std::uint64_t k, BundleAcc& acc) {
        const auto p = ValuationProfile::draw(n, m, dist, seed, k);
        auto tie = p.tie_breaker();
        const auto block = k % 32;
        acc.revenue.blocks[block].add(grand_bundle_spa(p, tie).revenue);
        // Bidder holding the second-highest favorite value (first index on ties).
        int first = -1, second = -1;
        double f1 = 0.0, f2 = 0.0;
        for (int i = 0; i < n; ++i) {
          const double f = p.row(i)[static_cast<std::size_t>(favorite_item(p.row(i)))];
          if (f > f1) {
            second = first;
            f2 = f1;
            first = i;
            f1 = f;
          } else if (f > f2 || second < 0) {
            second = i;
            f2 = f;
          }
        }
        const auto row = p.row(second);
        double sum = 0.0;
        for (double v : row) sum += v;
        acc.proxy.blocks[block].add(sum);
        acc.second_fav.blocks[block].add(f2);
      });
  GrandBundleRow r;
  r.n = n;
  r.m = m;
  r.revenue = RevenueEstimate::from(acc.revenue, seed);
  r.proxy = RevenueEstimate::from(acc.proxy, seed);
  r.second_fav = RevenueEstimate::from(acc.second_fav, seed);
  r.lower = forms.lower;
  r.upper = forms.upper;
  r.second_fav_in_bounds = r.second_fav.mean >= r.lower - 3.0 * r.second_fav.std_error &&
                           r.second_fav.mean <= r.upper + 3.0 * r.second_fav.std_error;
  return r;
}

GrandBundleStudy grand_bundle_study(const std::vector<GridPoint>& grid, std::uint64_t samples, Seed seed, Exec exec) {
  GrandBundleStudy st;
  std::vector<double> x, y;
  for (const auto& g : grid) {
    const Seed point_seed = seed.child(static_cast<std::uint64_t>(g.n) * 1000003ULL + static_cast<std::uint64_t>(g.m));
    st.rows.push_back(grand_bundle_point(g.n, g.m, samples, point_seed, exec));
    const double nm = static_cast<double>(g.n) * g.m;
    x.push_back(g.m * std::log(nm));
    y.push_back(st.rows.back().revenue.mean - nm);
  }
  st.fit = ols(x, y);
  return st;
}

KfaStudy kfa_study(int n, int m, std::uint64_t samples, Seed seed, Exec exec) {
  if (!(m >= 1 && n >= m)) throw std::invalid_argument("kfa_study: needs n >= m >= 1");
  KfaStudy st;
  st.n = n;
  st.m = m;
  st.forms = cf::kfa_forms(n, m);
  const double nm = static_cast<double>(n) * m;

  // Per item: H (1 - (1 - p)^n) = n H p (1 - (n-1)p/2 + ...), with H p ~ 1.
  const double p = std::exp(st.forms.log_p_exact);
  const double high_per_item =
      p > 1e-8 ? std::exp(st.forms.log_H) * num::one_minus_pow1m(p, n)
               : n * std::exp(st.forms.log_H + st.forms.log_p_exact) * (1.0 - 0.5 * (n - 1.0) * p);
  st.high_revenue = m * high_per_item;

  const auto dist = DistSpec::equal_revenue();
  const double L = st.forms.L;
  const auto mo = profile_reduce<Moments>(
      samples, exec, [] { return Moments{}; },
      [&](std::uint64_t k, Moments& acc) {
        const auto prof = ValuationProfile::draw(n, m, dist, seed, k);
        auto tie = prof.tie_breaker();
        const auto out = kfa(prof, tie);
        double low = 0.0;
        for (auto b : out.branch)
          if (b == KfaBranch::Low) low += L;
        acc.add(low);
      });
  st.low_revenue = RevenueEstimate::from(mo, seed);
  st.total = st.high_revenue + st.low_revenue.mean;
  st.excess = m * (high_per_item - n) + st.low_revenue.mean;
  st.excess_lower_bound = m * st.forms.low_revenue_lb;
  st.ratio = st.excess / (m * std::sqrt(nm));
  return st;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "n,m,lambda,T,c_star,rev_nsn,srev_n,residual\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + ',' + std::to_string(r.m) + ',' + format_double(r.lambda) + ',' +
           format_double(r.T) + ',' + std::to_string(r.c_star) + ',' + format_double(r.rev_nsn) + ',' +
           format_double(r.srev_n) + ',' + format_double(r.residual) + '\n';
  }
  return out;
}

}  // namespace ccauction
