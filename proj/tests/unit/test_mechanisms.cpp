#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ccauction/mechanisms.hpp"

using namespace ccauction;

namespace {

ValuationProfile make(int n, int m, std::vector<double> v, double T) {
  return ValuationProfile::from_values(n, m, std::move(v), DistSpec::truncated(T));
}

void check_outcome_shape(const MechanismOutcome& o, int n, int m) {
  REQUIRE(o.allocation.size() == static_cast<std::size_t>(m));
  REQUIRE(o.payments.size() == static_cast<std::size_t>(n));
  std::vector<int> won(static_cast<std::size_t>(n), 0);
  for (const auto& w : o.allocation)
    if (w) {
      REQUIRE(*w >= 0);
      REQUIRE(*w < n);
      ++won[static_cast<std::size_t>(*w)];
    }
  for (int i = 0; i < n; ++i)
    if (won[static_cast<std::size_t>(i)] == 0) CHECK(o.payments[static_cast<std::size_t>(i)] == 0.0);
  const double net = std::accumulate(o.payments.begin(), o.payments.end(), 0.0) -
                     std::accumulate(o.subsidies.begin(), o.subsidies.end(), 0.0);
  CHECK(o.revenue == doctest::Approx(net));
}

}  // namespace

TEST_CASE("profile construction and coupling") {
  const auto d = DistSpec::truncated(20.0);
  const auto big = ValuationProfile::draw(10, 3, d, Seed{4, 0}, 17);
  const auto small = ValuationProfile::draw(6, 3, d, Seed{4, 0}, 17);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 3; ++j) CHECK(big(i, j) == small(i, j));
  const auto head = big.first_bidders(6);
  CHECK(head.bidders() == 6);
  CHECK(head(5, 2) == big(5, 2));
  CHECK_THROWS_AS((void)big.first_bidders(11), std::invalid_argument);
  CHECK_THROWS_AS((void)ValuationProfile::from_values(2, 2, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS((void)ValuationProfile::from_values(1, 2, {0.5, 2}), std::invalid_argument);
  CHECK_THROWS_AS((void)make(1, 1, {25.0}, 20.0), std::invalid_argument);
}

TEST_CASE("sell separately is a second price auction with reserve") {
  const auto p = make(3, 2, {5, 1, 3, 9, 4, 2}, 10.0);
  auto tie = p.tie_breaker();
  const auto o = sell_separately(p, 2.5, tie);
  check_outcome_shape(o, 3, 2);
  CHECK(o.allocation[0] == 0);
  CHECK(o.allocation[1] == 1);
  CHECK(o.payments[0] == 4.0);
  CHECK(o.payments[1] == 2.5);
  CHECK(o.revenue == 6.5);
  auto tie2 = p.tie_breaker();
  CHECK_FALSE(sell_separately(p, 9.5, tie2).allocation[0].has_value());
}

TEST_CASE("sell separately breaks ties uniformly") {
  const auto d = DistSpec::truncated(10.0);
  int first = 0;
  for (int k = 0; k < 2000; ++k) {
    Rng tie(Seed{8, 0}, static_cast<std::uint64_t>(k));
    const auto o = sell_separately(ValuationProfile::from_values(2, 1, {10, 10}, d), 10.0, tie);
    CHECK(o.revenue == 10.0);
    first += *o.allocation[0] == 0;
  }
  CHECK(std::abs(first - 1000) < 4 * std::sqrt(500.0));
}

TEST_CASE("naive auction prefers T bidders then eligible lows") {
  // n = 4, m = 2, T = 4: mn/T = 2.
  const auto params = AuctionParams::with_T(4, 2, 4.0);
  SUBCASE("T bidder wins at T") {
    const auto p = make(4, 2, {4, 1, 3, 1, 1, 1, 1, 1}, 4.0);
    auto tie = p.tie_breaker();
    const auto o = naive_auction(p, params, tie);
    check_outcome_shape(o, 4, 2);
    CHECK(o.allocation[0] == 0);
    CHECK(o.payments[0] == 4.0);
    CHECK_FALSE(o.allocation[1].has_value());
  }
  SUBCASE("low price needs a T value on another item") {
    const auto p = make(4, 2, {4, 3, 1, 3.5, 1, 1, 1, 1}, 4.0);
    auto tie = p.tie_breaker();
    const auto o = naive_auction(p, params, tie);
    CHECK(o.allocation[1] == 0);
    CHECK(o.payments[0] == 4.0 + 2.0);
  }
}

TEST_CASE("less naive subsidizes every T item after the first") {
  const auto params = AuctionParams::with_T(2, 3, 5.0);
  const auto p = make(2, 3, {5, 5, 5, 1, 1, 1}, 5.0);
  const double a0 = 0.6, b0 = 0.1;
  auto t1 = p.tie_breaker();
  auto t2 = p.tie_breaker();
  const auto naive = naive_auction(p, params, t1);
  const auto lna = less_naive_auction(p, params, a0, b0, t2);
  check_outcome_shape(lna, 2, 3);
  CHECK(lna.allocation == naive.allocation);
  CHECK(lna.subsidies[0] == doctest::Approx(2 * b0 / a0 * (5.0 - 6.0 / 5.0)));
  CHECK(lna.revenue == doctest::Approx(15.0 - lna.subsidies[0]));
  auto t3 = p.tie_breaker();
  CHECK_THROWS_AS((void)less_naive_auction(p, params, 0.0, b0, t3), std::invalid_argument);
}

TEST_CASE("naive and less naive allocate identically on random profiles") {
  const auto params = AuctionParams::from_lambda(16, 3, 1.2);
  const auto d = DistSpec::truncated(params.T);
  for (std::uint64_t k = 0; k < 500; ++k) {
    const auto p = ValuationProfile::draw(16, 3, d, Seed{2, 0}, k);
    auto t1 = p.tie_breaker();
    auto t2 = p.tie_breaker();
    const auto a = naive_auction(p, params, t1);
    const auto b = less_naive_auction(p, params, 0.3, 0.05, t2);
    check_outcome_shape(a, 16, 3);
    check_outcome_shape(b, 16, 3);
    CHECK(a.allocation == b.allocation);
  }
}

TEST_CASE("menu price and utility") {
  const auto params = AuctionParams::with_T(8, 2, 8.0);  // mn/T = 2
  CHECK(menu_price(0, 0, 0.5, 0.1, params) == 0.0);
  CHECK(menu_price(0b1, 0b10, 0.5, 0.1, params) == doctest::Approx(0.1 * 2 + 0.5 * 8));
  CHECK(menu_price(0b11, 0, 0.5, 0.1, params) == doctest::Approx(0.5 * 2 * 8 - 0.1 * 6));
  const std::vector<double> v{8, 3};
  const auto o = make_option(0b1, 0b10, 0.5, 0.1, params);
  CHECK(menu_utility(v, o, 0.5, 0.1) == doctest::Approx(0.5 * 8 + 0.1 * 3 - o.price));
  CHECK(menu_utility(v, MenuOption{}, 0.5, 0.1) == 0.0);
}

TEST_CASE("preferred option examples") {
  const auto params = AuctionParams::with_T(16, 3, 8.0);  // mn/T = 6
  const std::vector<double> all_T{8, 8, 8};
  const auto o = nsn_preferred_option(all_T, 0.3, 0.05, params);
  CHECK(o.H == 0b111);
  CHECK(o.L == 0);
  const std::vector<double> low{2, 3, 1.5};
  CHECK(nsn_preferred_option(low, 0.3, 0.05, params).is_null());
  const std::vector<double> mixed{7, 8, 6.5};
  const auto m = nsn_preferred_option(mixed, 0.3, 0.05, params);
  CHECK(m.H == 0b010);
  CHECK(m.L == 0b101);
  CHECK(favorite_item(std::vector<double>{3, 5, 5}) == 1);
  const std::vector<double> too_many(65, 1.0);
  CHECK_THROWS_AS((void)nsn_preferred_option(too_many, 0.3, 0.05, AuctionParams::with_T(16, 65, 80.0)),
                  std::invalid_argument);
}

TEST_CASE("types with a T value take a nonnegative-utility option") {
  const auto params = AuctionParams::from_lambda(64, 4, 1.5);
  const double a = cf::a0(64, params.T), b = cf::b0(64, 4, params.T);
  const auto d = DistSpec::truncated(params.T);
  for (std::uint64_t k = 0; k < 3000; ++k) {
    Rng rng(Seed{13, 0}, k);
    std::vector<double> v(4);
    for (auto& x : v) x = d.draw(rng);
    v[rng.below(4)] = params.T;
    const auto o = nsn_preferred_option(v, a, b, params);
    CHECK(menu_utility(v, o, a, b) >= -1e-9 * params.T);
  }
}

TEST_CASE("preferred option is permutation invariant") {
  const auto params = AuctionParams::from_lambda(32, 4, 1.5);
  const double a = cf::a0(32, params.T), b = cf::b0(32, 4, params.T);
  const auto d = DistSpec::truncated(params.T);
  std::vector<int> perm{2, 0, 3, 1};
  for (std::uint64_t k = 0; k < 2000; ++k) {
    Rng rng(Seed{14, 0}, k);
    std::vector<double> v(4), w(4);
    for (auto& x : v) x = d.draw(rng);
    if (k % 3 == 0) v[1] = params.T;
    for (int j = 0; j < 4; ++j) w[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] = v[static_cast<std::size_t>(j)];
    const auto ov = nsn_preferred_option(v, a, b, params);
    const auto ow = nsn_preferred_option(w, a, b, params);
    CHECK(menu_utility(v, ov, a, b) == doctest::Approx(menu_utility(w, ow, a, b)).epsilon(1e-12));
    CHECK(set_size(ov.H) == set_size(ow.H));
    CHECK(set_size(ov.L) == set_size(ow.L));
  }
}

TEST_CASE("nsn ex post gives a sole high bidder the item") {
  const auto params = AuctionParams::with_T(3, 2, 6.0);  // mn/T = 1
  const auto p = make(3, 2, {6, 1.5, 1.2, 1.1, 1.3, 1.05}, 6.0);
  InterimRates r{cf::a0(3, 6.0), cf::b0(3, 2, 6.0), {0.0}, 0, 0};
  auto tie = p.tie_breaker();
  const auto out = nsn_expost(p, r, params, tie);
  CHECK(out.outcome.allocation[0] == 0);
  CHECK(out.high[0] == 0b01);
  CHECK(out.outcome.payments[0] == doctest::Approx(menu_price(out.high[0], out.low[0], r.a, r.b, params)));
  CHECK(out.outcome.payments[1] == 0.0);
}

TEST_CASE("grand bundle second price") {
  const auto p = ValuationProfile::from_values(2, 2, {6, 4, 3, 1});
  auto tie = p.tie_breaker();
  const auto o = grand_bundle_spa(p, tie);
  CHECK(o.revenue == 4.0);
  CHECK(o.allocation[0] == 0);
  CHECK(o.allocation[1] == 0);
  const auto same = ValuationProfile::from_values(3, 2, {2, 3, 2, 3, 2, 3});
  auto t2 = same.tie_breaker();
  CHECK(grand_bundle_spa(same, t2).revenue == 5.0);
  const auto one = ValuationProfile::from_values(1, 2, {2, 3});
  auto t3 = one.tie_breaker();
  CHECK_THROWS_AS((void)grand_bundle_spa(one, t3), std::invalid_argument);
}

TEST_CASE("kfa posted prices") {
  SUBCASE("all values below L sell nothing") {
    const auto p = ValuationProfile::from_values(2, 2, {1.5, 1.2, 1.1, 1.3});
    auto tie = p.tie_breaker();
    const auto o = kfa(p, tie);
    CHECK(o.outcome.revenue == 0.0);
    CHECK(o.branch[0] == KfaBranch::Unsold);
  }
  SUBCASE("a non-favorite item above L sells at L") {
    const auto p = ValuationProfile::from_values(2, 2, {9, 5, 1.1, 1.3});
    auto tie = p.tie_breaker();
    const auto o = kfa(p, tie);
    CHECK(o.branch[1] == KfaBranch::Low);
    CHECK(o.outcome.allocation[1] == 0);
    CHECK(o.outcome.revenue == doctest::Approx(2.0));
  }
  SUBCASE("a favorite above H sells at H") {
    const auto p = ValuationProfile::from_values(1, 1, {3.0});  // H = e, L = 1
    auto tie = p.tie_breaker();
    const auto o = kfa(p, tie);
    CHECK(o.branch[0] == KfaBranch::High);
    CHECK(o.outcome.revenue == doctest::Approx(std::exp(1.0)));
  }
  SUBCASE("tied bidders are excluded") {
    const auto p = ValuationProfile::from_values(2, 2, {5, 5, 1.1, 1.3});
    CHECK_FALSE(has_distinct_values(p.row(0)));
    auto tie = p.tie_breaker();
    CHECK(kfa(p, tie).outcome.revenue == 0.0);
  }
  SUBCASE("one item only uses the high branch") {
    const auto d = DistSpec::equal_revenue();
    for (std::uint64_t k = 0; k < 200; ++k) {
      const auto p = ValuationProfile::draw(4, 1, d, Seed{5, 0}, k);
      auto tie = p.tie_breaker();
      CHECK(kfa(p, tie).branch[0] != KfaBranch::Low);
    }
  }
}
