#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "ccauction/experiments.hpp"
#include "ccauction/json_io.hpp"

using namespace ccauction;

namespace {

FixedPointSolution q_zero_solution(const AuctionParams& p) {
  FixedPointSolution s;
  s.rates = cf::rates_map(std::vector<double>(static_cast<std::size_t>(p.m - 1), 0.0), p);
  s.a0 = s.rates.a;
  s.b0 = s.rates.b;
  s.converged = true;
  return s;
}

double increment(const AuctionParams& p, int c) { return cf::srev_increment_bound(p.n, c, p.m, p.T).exact; }

}  // namespace

TEST_CASE("competition complexity is the minimal sufficient c") {
  for (int n : {64, 128, 256}) {
    const auto p = AuctionParams::from_lambda(n, 2, 1.5);
    const auto row = competition_complexity(p, solve(p));
    REQUIRE(row.c_star >= 1);
    CHECK(increment(p, row.c_star) >= row.gain);
    CHECK(increment(p, row.c_star - 1) < row.gain);
    CHECK(row.srev_n == doctest::Approx(cf::srev(n, 2, p.T)));
    CHECK(row.c_star >= std::floor(row.analytic_lb));
  }
}

TEST_CASE("competition complexity of the q = 0 proxy and of one item") {
  const auto p = AuctionParams::from_lambda(64, 2, 1.5);
  CHECK(competition_complexity(p, q_zero_solution(p)).c_star >= 1);
  const auto one = AuctionParams::from_lambda(64, 1, 1.5);
  CHECK(competition_complexity(one, solve(one)).c_star == 0);
  auto unconverged = q_zero_solution(p);
  unconverged.converged = false;
  CHECK_THROWS_AS((void)competition_complexity(p, unconverged), std::invalid_argument);
}

TEST_CASE("grid parsing") {
  const auto g = parse_grid("m=2,3:n=64,128");
  REQUIRE(g.size() == 4);
  CHECK(g[0] == GridPoint{64, 2, 1.5});
  CHECK(g[1] == GridPoint{128, 2, 1.5});
  CHECK(g[2] == GridPoint{64, 3, 1.5});
  const auto l = parse_grid("n=16:m=2:lambda=1.2,2", 1.5);
  REQUIRE(l.size() == 2);
  CHECK(l[1].lambda == 2.0);
  CHECK_THROWS_AS((void)parse_grid("m=2"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_grid("m=x:n=4"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_grid("q=2:m=2:n=4"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_grid(""), std::invalid_argument);
}

TEST_CASE("scaling study skips out-of-regime points and is deterministic") {
  SolverConfig cfg;
  cfg.samples = 1 << 14;
  const auto st = scaling_study({{64, 2, 1.5}, {64, 2, 1.5}, {8, 2, 3.0}, {64, 2, 1.0}}, cfg);
  REQUIRE(st.rows.size() == 2);
  CHECK(st.skipped.size() == 2);
  CHECK(st.rows[0].c_star == st.rows[1].c_star);
  CHECK(st.rows[0].rev_nsn == st.rows[1].rev_nsn);
  CHECK_FALSE(st.fit.defined);
  const auto csv = sweep_csv(st.rows);
  CHECK(csv.rfind("n,m,lambda,T,c_star,rev_nsn,srev_n,residual\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("solution cache round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "ccauction_cache_test";
  std::filesystem::remove_all(dir);
  const SolutionCache cache(dir);
  const auto p = AuctionParams::from_lambda(64, 3, 1.5);
  SolverConfig cfg;
  cfg.samples = 1 << 14;
  CHECK_FALSE(cache.load(p, cfg).has_value());
  const auto s = solve_cached(p, cfg, &cache);
  REQUIRE(std::filesystem::exists(cache.path_for(p, cfg)));
  const auto back = cache.load(p, cfg);
  REQUIRE(back.has_value());
  CHECK(back->rates.a == s.rates.a);
  CHECK(back->rates.q == s.rates.q);
  CHECK(back->residual_trace == s.residual_trace);
  CHECK(back->seed == s.seed);
  SolverConfig other = cfg;
  other.seed = Seed{1, 2};
  CHECK(cache.path_for(p, other) != cache.path_for(p, cfg));
  std::filesystem::remove_all(dir);
}

TEST_CASE("canonical-flow benchmark") {
  SUBCASE("one item equals the single-item optimum") {
    const double T = 6.0;
    const auto b = cdw_benchmark(DistSpec::truncated(T), 16, 1, 200000, Seed{50, 0});
    CHECK(b.within(cf::srev(16, 1, T), 3.5));
  }
  SUBCASE("untruncated values are at least nm") {
    const auto b = cdw_benchmark(DistSpec::equal_revenue(), 16, 2, 100000, Seed{51, 0});
    CHECK(b.estimator == Estimator::MedianOfMeans);
    CHECK(b.mean >= 32.0);
    CHECK_THROWS_AS((void)cdw_benchmark(DistSpec::equal_revenue(), 1, 2, 10, Seed{}), std::invalid_argument);
  }
  SUBCASE("dominates the mechanisms") {
    const auto p = AuctionParams::from_lambda(64, 2, 1.5);
    const auto s = solve(p);
    const auto b = cdw_benchmark(DistSpec::truncated(p.T), 64, 2, 50000, Seed{52, 0});
    const auto rev = simulate_mechanisms(p, s.a0, s.b0, &s.rates, SimConfig{50000, Seed{53, 0}});
    for (const auto& e : {rev.srev, rev.naive, rev.less_naive, *rev.nsn})
      CHECK(b.mean + 3 * std::hypot(b.std_error, e.std_error) >= e.mean);
  }
}

TEST_CASE("grand bundle points") {
  const auto two = grand_bundle_point(2, 1, 400000, Seed{54, 0});
  CHECK(two.revenue.within(2.0, 3.5));
  const auto row = grand_bundle_point(8, 2, 200000, Seed{55, 0});
  CHECK(row.second_fav_in_bounds);
  CHECK(row.lower == doctest::Approx(16 - 8.0 / 7));
  CHECK(row.revenue.mean >= row.second_fav.mean);
}

TEST_CASE("knows-favorite study") {
  const auto one = kfa_study(16, 1, 20000, Seed{56, 0});
  CHECK(one.total == doctest::Approx(16.0).epsilon(1e-5));
  CHECK(one.total <= 16.0);
  CHECK(one.low_revenue.mean == 0.0);
  const auto st = kfa_study(16, 4, 100000, Seed{57, 0});
  CHECK(st.excess >= st.excess_lower_bound - 3 * st.low_revenue.std_error);
  CHECK(st.ratio > 0.0);
  CHECK_THROWS_AS((void)kfa_study(2, 4, 10, Seed{}), std::invalid_argument);
}

TEST_CASE("json documents") {
  const auto p = AuctionParams::from_lambda(64, 2, 1.5);
  SolverConfig cfg;
  cfg.samples = 1 << 12;
  const auto s = solve(p, cfg);
  const nlohmann::json j = s;
  const auto back = j.get<FixedPointSolution>();
  CHECK(back.rates.b == s.rates.b);
  CHECK(back.iterations == s.iterations);
  const nlohmann::json row = competition_complexity(p, s);
  CHECK(row.at("c_star").get<int>() >= 1);
  CHECK(format_double(0.1) == "0.10000000000000001");
}
