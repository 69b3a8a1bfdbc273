#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "ccauction/numerics.hpp"
#include "ccauction/parallel.hpp"
#include "ccauction/rng.hpp"
#include "ccauction/stats.hpp"

using namespace ccauction;

TEST_CASE("rng seek reproduces sequential draws") {
  Rng a(Seed{1, 2}, 3);
  std::vector<std::uint64_t> seq;
  for (int i = 0; i < 10; ++i) seq.push_back(a.next_u64());
  Rng b(Seed{1, 2}, 3);
  b.seek(6);
  CHECK(b.next_u64() == seq[6]);
}

TEST_CASE("child seeds and substreams are distinct") {
  const Seed s{42, 0};
  std::set<std::uint64_t> keys;
  for (std::uint64_t t = 0; t < 100; ++t) {
    keys.insert(Rng(s.child(t)).key());
    keys.insert(Rng(s, t + 1000).key());
  }
  CHECK(keys.size() == 200);
  CHECK(s.child(1) == s.child(1));
}

TEST_CASE("uniform and below stay in range") {
  Rng r(Seed{9, 0});
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(r.below(7) < 7);
  }
}

TEST_CASE("moments merge equals a single pass") {
  std::vector<double> xs;
  Rng r(Seed{3, 0});
  for (int i = 0; i < 1000; ++i) xs.push_back(r.uniform() * 10);
  Moments all, left, right;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    all.add(xs[i]);
    (i < 377 ? left : right).add(xs[i]);
  }
  left.merge(right);
  CHECK(left.count == all.count);
  CHECK(left.mean == doctest::Approx(all.mean).epsilon(1e-13));
  CHECK(left.variance() == doctest::Approx(all.variance()).epsilon(1e-12));
  Moments empty;
  empty.merge(all);
  CHECK(empty.mean == all.mean);
}

TEST_CASE("comoments ratio and merge") {
  CoMoments a, b, all;
  for (int i = 1; i <= 100; ++i) {
    const double x = i, y = 2.0 * i + (i % 3);
    all.add(x, y);
    (i <= 40 ? a : b).add(x, y);
  }
  a.merge(b);
  CHECK(a.ratio() == doctest::Approx(all.ratio()).epsilon(1e-13));
  CHECK(a.ratio_stderr() == doctest::Approx(all.ratio_stderr()).epsilon(1e-9));
  CHECK(all.ratio() == doctest::Approx((2.0 * 5050 + 100) / 5050.0));
}

TEST_CASE("median of means is robust to one wild block") {
  BlockMoments bm(5);
  for (std::size_t k = 0; k < 5; ++k)
    for (int i = 0; i < 10; ++i) bm.blocks[k].add(k == 4 ? 1e9 : 1.0 + 0.01 * static_cast<double>(k));
  CHECK(bm.median_of_means() == doctest::Approx(1.02));
  CHECK(bm.pooled().count == 50);
  CHECK(bm.median_of_means_stderr() > 0.0);
}

TEST_CASE("ols recovers an exact line and flags degenerate input") {
  const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
  const auto f = ols(x, y);
  REQUIRE(f.defined);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  const std::vector<double> x1{2}, y1{5};
  CHECK_FALSE(ols(x1, y1).defined);
  const std::vector<double> xs{2, 2, 2}, ys{1, 2, 3};
  CHECK_FALSE(ols(xs, ys).defined);
}

TEST_CASE("ks statistic of an exact grid and of an atom") {
  std::vector<double> grid;
  for (int i = 1; i <= 100; ++i) grid.push_back((i - 0.5) / 100.0);
  CHECK(ks_statistic(grid, [](double x) { return x; }) == doctest::Approx(0.005));
  std::vector<double> atom(100, 3.0);
  auto step = [](double x) { return x >= 3.0 ? 1.0 : 0.0; };
  CHECK(ks_statistic(atom, step, [](double x) { return x > 3.0 ? 1.0 : 0.0; }) == 0.0);
}

TEST_CASE("binomial helpers agree with direct sums") {
  CHECK(num::binomial(10, 3) == 120.0);
  CHECK(num::binomial(60, 30) == 118264581564861424.0);
  CHECK(num::binomial(5, 7) == 0.0);
  for (double p : {1e-3, 0.1, 0.4}) {
    double tail = 0.0, excess = 0.0, share = 0.0;
    const int m = 9;
    for (int k = 0; k <= m; ++k) {
      const double pmf = num::binomial(m, k) * std::pow(p, k) * std::pow(1 - p, m - k);
      if (k >= 2) tail += pmf;
      if (k >= 1) excess += (k - 1) * pmf;
      share += pmf / (k + 1);  // E[1/(1+Bin(m, p))] = share_of_uniform_draw(m + 1, p)
    }
    CHECK(num::binomial_tail_ge2(m, p) == doctest::Approx(tail).epsilon(1e-12));
    CHECK(num::binomial_excess_over_one(m, p) == doctest::Approx(excess).epsilon(1e-12));
    CHECK(num::share_of_uniform_draw(m + 1, p) == doctest::Approx(share).epsilon(1e-12));
  }
  CHECK(num::pow1m(1e-18, 1e6) == doctest::Approx(1.0 - 1e-12));
  CHECK(num::one_minus_pow1m(1e-18, 1e6) == doctest::Approx(1e-12).epsilon(1e-9));
}

TEST_CASE("parallel and serial chunk maps agree") {
  const ChunkPlan plan{10007, 128};
  auto kernel = [](std::uint64_t, std::uint64_t b, std::uint64_t e) {
    Moments m;
    for (std::uint64_t i = b; i < e; ++i) m.add(std::sin(static_cast<double>(i)));
    return m;
  };
  const auto p = parallel_reduce<Moments>(plan, kernel);
  const auto s = serial_reduce<Moments>(plan, kernel);
  CHECK(p.count == 10007);
  CHECK(p.mean == s.mean);
  CHECK(p.m2 == s.m2);
}
