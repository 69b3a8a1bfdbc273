#include <doctest.h>

#include <cmath>

#include "ccauction/fixed_point.hpp"
#include "ccauction/simulate.hpp"

using namespace ccauction;

TEST_CASE("serial and parallel runs are bit identical") {
  const auto p = AuctionParams::from_lambda(16, 2, 1.5);
  const double a0 = cf::a0(16, p.T), b0 = cf::b0(16, 2, p.T);
  InterimRates r{a0, b0, {0.0}, 0, 0};
  SimConfig par{30000, Seed{3, 0}, Exec::Parallel};
  SimConfig ser{30000, Seed{3, 0}, Exec::Serial};
  const auto x = simulate_mechanisms(p, a0, b0, &r, par);
  const auto y = simulate_mechanisms(p, a0, b0, &r, ser);
  CHECK(x.srev.mean == y.srev.mean);
  CHECK(x.less_naive_minus_srev.std_error == y.less_naive_minus_srev.std_error);
  CHECK(x.nsn->mean == y.nsn->mean);
  const auto u = simulate_realized_rates(p, a0, b0, par);
  const auto v = simulate_realized_rates(p, a0, b0, ser);
  CHECK(u.high.ratio() == v.high.ratio());
  CHECK(u.low.cxy == v.low.cxy);
}

TEST_CASE("coupled srev increment matches the closed form") {
  const auto p = AuctionParams::from_lambda(16, 2, 1.5);
  const auto est = simulate_srev_increment(p, 4, SimConfig{300000, Seed{6, 0}});
  CHECK(est.within(cf::srev_increment_bound(16, 4, 2, p.T).exact, 3.5));
  CHECK(est.mean <= cf::srev_increment_bound(16, 4, 2, p.T).bound + 4 * est.std_error);
}

TEST_CASE("nsn payments at solved rates average to the interim revenue") {
  const auto p = AuctionParams::from_lambda(16, 2, 1.5);
  const InterimRates r = solve(p).rates;
  const auto rev = simulate_mechanisms(p, r.a, r.b, &r, SimConfig{300000, Seed{7, 0}});
  CHECK(rev.nsn->within(16 * cf::nsn_revenue_per_bidder(r, p), 3.5));
}

TEST_CASE("a single bidder always wins items she is high for") {
  const auto p = AuctionParams::with_T(1, 2, 2.0);
  const auto rr = simulate_realized_rates(p, 1.0, 0.5, SimConfig{20000, Seed{9, 0}});
  CHECK(rr.high.ratio() == doctest::Approx(1.0));
  CHECK(rr.supply_violations == 0);
}

TEST_CASE("revenue estimate tolerance") {
  RevenueEstimate e{10.0, 0.1, 100, Estimator::PlainMean, Seed{}};
  CHECK(e.within(10.29));
  CHECK_FALSE(e.within(10.31));
  RevenueEstimate exact{5.0, 0.0, 100, Estimator::PlainMean, Seed{}};
  CHECK(exact.within(5.0 * (1 + 1e-13)));
}
