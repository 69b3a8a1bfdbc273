#include <doctest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "ccauction/fixed_point.hpp"

using namespace ccauction;
using boost::math::quadrature::gauss_kronrod;

namespace {

double gk(const std::function<double(double)>& f, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  return gauss_kronrod<double, 31>::integrate(f, lo, hi, 8, 1e-10);
}

// Mass of the 1/v^2 density on [lo, hi]; the integrand is smooth, so a fixed rule suffices.
double density_mass(double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  return boost::math::quadrature::gauss<double, 20>::integrate([](double v) { return 1.0 / (v * v); }, lo, hi);
}

// q_1 for one fixed band item: nested quadrature over (v_other, v_fav) with
// v_fav >= v_other and a v_fav + b v_other >= a T + b lo.
double q1_quadrature(double a, double b, const AuctionParams& p) {
  const double T = p.T, lo = p.low_price();
  const double inner = gk(
      [&](double w) {
        const double start = std::max(w, T - b / a * (w - lo));
        return density_mass(std::min(start, T), T) / (w * w);
      },
      lo, T);
  return inner * std::pow(p.below_band_mass(), p.m - 2);
}

// q_2 with two fixed band items, triple nested quadrature.
double q2_quadrature(double a, double b, const AuctionParams& p) {
  const double T = p.T, lo = p.low_price();
  auto dens = [](double v) { return 1.0 / (v * v); };
  return gk(
             [&](double w1) {
               return gk(
                          [&](double w2) {
                            const double start = std::max({w1, w2, T - b / a * (w1 + w2 - 2 * lo)});
                            return density_mass(std::min(start, T), T) * dens(w2);
                          },
                          lo, T) *
                      dens(w1);
             },
             lo, T) *
         std::pow(p.below_band_mass(), p.m - 3);
}

}  // namespace

TEST_CASE("q vanishes when b is zero") {
  const auto p = AuctionParams::from_lambda(64, 3, 1.5);
  for (int ell : {1, 2}) {
    const auto q = estimate_q_ell(ell, 0.3, 0.0, p, 10000, Seed{1, 0});
    CHECK(q.value == 0.0);
  }
}

TEST_CASE("q agrees with nested quadrature") {
  const auto p = AuctionParams::with_T(4, 3, 5.0);
  for (double b : {0.1, 0.3}) {
    const double a = 0.3;
    const auto q1 = estimate_q_ell(1, a, b, p, 400000, Seed{2, 0});
    const auto q2 = estimate_q_ell(2, a, b, p, 400000, Seed{2, 1});
    CHECK(std::abs(q1.value - q1_quadrature(a, b, p)) <= 3 * q1.std_error + 1e-12);
    CHECK(std::abs(q2.value - q2_quadrature(a, b, p)) <= 3 * q2.std_error + 1e-12);
    CHECK(q2.value > 0.0);
  }
}

TEST_CASE("q at a = b agrees with a full-space indicator") {
  const auto p = AuctionParams::with_T(4, 2, 4.0);  // band [2, 4)
  const double a = 0.3, b = 0.3, T = p.T, lo = p.low_price();
  const auto est = estimate_q_ell(1, a, b, p, 200000, Seed{3, 0});
  const auto d = DistSpec::truncated(T);
  Moments hit;
  for (std::uint64_t k = 0; k < 2000000; ++k) {
    Rng rng(Seed{4, 0}, k);
    const double v0 = d.draw(rng), v1 = d.draw(rng);
    const bool region = v0 < T && v1 < T && v1 >= lo && v0 >= v1;
    hit.add(region && a * v0 + b * v1 >= a * T + b * lo ? 1.0 : 0.0);
  }
  CHECK(std::abs(est.value - hit.mean) <= 3 * std::hypot(est.std_error, hit.stderr_mean()));
}

TEST_CASE("q estimator input validation") {
  const auto p = AuctionParams::from_lambda(64, 3, 1.5);
  CHECK_THROWS_AS((void)estimate_q_ell(0, 0.3, 0.1, p, 100, Seed{}), std::invalid_argument);
  CHECK_THROWS_AS((void)estimate_q_ell(3, 0.3, 0.1, p, 100, Seed{}), std::invalid_argument);
  CHECK_THROWS_AS((void)estimate_q_ell(1, 0.0, 0.1, p, 100, Seed{}), std::invalid_argument);
  CHECK_THROWS_AS((void)estimate_q_ell(1, 0.3, 0.1, p, 0, Seed{}), std::invalid_argument);
  CHECK_THROWS_AS((void)estimate_q_ell(1, 0.3, 0.1, AuctionParams::with_T(64, 3, 500.0), 100, Seed{}),
                  std::invalid_argument);
}

TEST_CASE("one item solves to (a0, 0) in one step") {
  const auto p = AuctionParams::from_lambda(64, 1, 1.5);
  const auto s = solve(p);
  CHECK(s.converged);
  CHECK(s.iterations == 1);
  CHECK(s.rates.a == doctest::Approx(cf::a0(64, p.T)));
  CHECK(s.rates.b == 0.0);
  CHECK(s.rates.q.empty());
}

TEST_CASE("solved rates stay near (a0, b0)") {
  for (int m : {2, 3}) {
    const auto p = AuctionParams::from_lambda(64, m, 1.5);
    const auto s = solve(p);
    REQUIRE(s.converged);
    CHECK(s.residual <= 1e-9);
    CHECK(std::abs(s.rates.a - s.a0) / s.a0 < 0.1);
    CHECK(std::abs(s.rates.b - s.b0) / s.b0 < 0.1);
    CHECK(s.rates.a >= s.rates.b);
    CHECK(s.rates.b <= s.b0);
    CHECK(s.q_stderr.size() == static_cast<std::size_t>(m - 1));
    CHECK(s.residual_trace.size() == static_cast<std::size_t>(s.iterations));
  }
}

TEST_CASE("solver is deterministic across execution modes") {
  const auto p = AuctionParams::from_lambda(64, 3, 1.5);
  SolverConfig par, ser;
  par.samples = ser.samples = 1 << 14;
  ser.exec = Exec::Serial;
  const auto x = solve(p, par), y = solve(p, ser);
  CHECK(x.rates.a == y.rates.a);
  CHECK(x.rates.b == y.rates.b);
  CHECK(x.iterations == y.iterations);
}

TEST_CASE("more bidders lower the high rate") {
  double prev = 1.0;
  for (int n : {64, 128, 256}) {
    const auto s = solve(AuctionParams::from_lambda(n, 2, 1.5));
    CHECK(s.rates.a < prev);
    prev = s.rates.a;
  }
}

TEST_CASE("solver preconditions and non-convergence") {
  CHECK_THROWS_AS((void)solve(AuctionParams::with_T(64, 2, 5.0)), std::invalid_argument);
  SolverConfig bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS((void)solve(AuctionParams::from_lambda(64, 2, 1.5), bad), std::invalid_argument);
  SolverConfig short_run;
  short_run.max_iter = 2;
  short_run.samples = 1 << 12;
  try {
    (void)solve(AuctionParams::from_lambda(64, 3, 1.5), short_run);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    CHECK(e.trace().size() == 2);
  }
}

TEST_CASE("validation passes on a solved point") {
  const auto p = AuctionParams::from_lambda(64, 2, 1.5);
  const auto s = solve(p);
  const auto rep = validate(s, p, SimConfig{1000000, Seed{17, 0}});
  for (const auto& c : rep.checks) CHECK_MESSAGE(c.pass, c.name);
  for (const auto& c : rep.bounds.checks) CHECK_MESSAGE(c.pass, c.name);
  CHECK(rep.feasibility.pass);
  CHECK(rep.pass());
  CHECK_THROWS_AS((void)validate(s, AuctionParams::with_T(64, 2, 5.0), SimConfig{10, Seed{}}),
                  std::invalid_argument);
}

TEST_CASE("the q = 0 rates are infeasible under true preferences") {
  const auto p = AuctionParams::from_lambda(64, 3, 1.5);
  const auto rep = feasibility_check(cf::a0(64, p.T), cf::b0(64, 3, p.T), p, SimConfig{1000000, Seed{18, 0}});
  CHECK_FALSE(rep.pass);
  CHECK(std::min(rep.z_a, rep.z_b) < -3.0);
}
