#include "ccauction/closed_form.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ccauction/numerics.hpp"

namespace ccauction {

AuctionParams AuctionParams::with_T(int n, int m, double T) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (!(T >= 1.0)) throw std::invalid_argument("T must be >= 1");
  return AuctionParams{n, m, T, std::nullopt};
}

AuctionParams AuctionParams::from_lambda(int n, int m, double lambda) {
  if (!(lambda > 1.0)) throw std::invalid_argument("lambda must exceed 1");
  auto p = with_T(n, m, lambda * std::sqrt(static_cast<double>(n) * m));
  p.lambda = lambda;
  return p;
}

double AuctionParams::effective_lambda() const noexcept {
  return lambda ? *lambda : T / std::sqrt(static_cast<double>(n) * m);
}

namespace cf {
namespace {

void require_T(double T) {
  if (!(T >= 1.0)) throw std::invalid_argument("T must be >= 1");
}

double q_at(std::span<const double> q, int ell) { return q[static_cast<std::size_t>(ell - 1)]; }

// Sum_l C(m-1, l) q_l: probability that a bidder is high for an item without a T value there.
double high_q_mass(std::span<const double> q, int m) {
  double s = 0.0;
  for (int ell = 1; ell <= m - 1; ++ell) s += num::binomial(m - 1, ell) * q_at(q, ell);
  return s;
}

// (m-1) Sum_l C(m-2, l-1) q_l.
double low_q_mass(std::span<const double> q, int m) {
  double s = 0.0;
  for (int ell = 1; ell <= m - 1; ++ell) s += num::binomial(m - 2, ell - 1) * q_at(q, ell);
  return (m - 1) * s;
}

double menu_q_revenue(const InterimRates& r, const AuctionParams& p) {
  double s = 0.0;
  for (int ell = 1; ell <= p.m - 1; ++ell) {
    s += num::binomial(p.m - 1, ell) * (r.a * p.T + ell * r.b * p.low_price()) * q_at(r.q, ell);
  }
  return p.m * s;
}

}  // namespace

double srev(int n_prime, int m, double T) {
  require_T(T);
  if (n_prime < 0) throw std::invalid_argument("srev: n' must be >= 0");
  return m * T * num::one_minus_pow1m(1.0 / T, n_prime);
}

IncrementBound srev_increment_bound(int n, int x, int m, double T) {
  require_T(T);
  if (x < 0) throw std::invalid_argument("srev_increment_bound: x must be >= 0");
  const double none_at_T = num::pow1m(1.0 / T, n);
  return {m * T * none_at_T * num::one_minus_pow1m(1.0 / T, x), m * x * none_at_T};
}

double naive_gain(const AuctionParams& p) {
  if (p.low_price() > p.T) throw std::domain_error("naive_gain: mn/T exceeds T, the low band is empty");
  if (p.T == 1.0) return 0.0;
  const double inv = 1.0 / p.T;
  // P[bidder eligible for the low price on item j | v_ij < T]
  const double rho = p.band_mass() / (1.0 - inv) * num::one_minus_pow1m(inv, p.m - 1);
  return p.m * p.low_price() * num::pow1m(inv, p.n) * num::one_minus_pow1m(rho, p.n);
}

double a0(int n, double T) {
  require_T(T);
  if (n < 1) throw std::invalid_argument("a0: n must be >= 1");
  return T / n * num::one_minus_pow1m(1.0 / T, n);
}

double b0(int n, int m, double T, NoHighExponent e) {
  const auto p = AuctionParams::with_T(n, m, T);
  const std::vector<double> zeros(static_cast<std::size_t>(m - 1), 0.0);
  return rates_map(zeros, p, e).b;
}

double expected_subsidies(int m, double T) {
  require_T(T);
  return num::binomial_excess_over_one(m, 1.0 / T);
}

double multi_t_mass(int m, double T) {
  require_T(T);
  return num::binomial_tail_ge2(m, 1.0 / T);
}

double lna_gain(int n, int m, double T, double b) {
  if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("lna_gain: b must lie in [0, 1]");
  const auto p = AuctionParams::with_T(n, m, T);
  return b * m * static_cast<double>(n) * n * p.band_mass() * multi_t_mass(m, T);
}

InterimRates rates_map(std::span<const double> q, const AuctionParams& p, NoHighExponent e) {
  if (q.size() != static_cast<std::size_t>(p.m - 1))
    throw std::invalid_argument("rates_map: expected m-1 = " + std::to_string(p.m - 1) + " q values");
  for (double v : q)
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("rates_map: q values must lie in [0, 1]");

  const double inv = 1.0 / p.T;
  InterimRates r;
  r.q.assign(q.begin(), q.end());
  r.p_high = inv + high_q_mass(q, p.m);
  r.p_low = num::one_minus_pow1m(inv, p.m - 1) * p.band_mass() + low_q_mass(q, p.m);
  if (r.p_high >= 1.0) throw std::domain_error("rates_map: P[high] >= 1");

  r.a = num::share_of_uniform_draw(p.n, r.p_high);
  if (r.p_low > 0.0) {
    const double low_given_not_high = r.p_low / (1.0 - r.p_high);
    const double others = e == NoHighExponent::OtherBidders ? p.n - 1 : p.n;
    r.b = num::pow1m(r.p_high, others) * num::share_of_uniform_draw(p.n, low_given_not_high);
  }
  return r;
}

double nsn_revenue_per_bidder(const InterimRates& r, const AuctionParams& p) {
  return r.a * p.m + r.b * p.m * p.n * p.band_mass() * multi_t_mass(p.m, p.T) + menu_q_revenue(r, p);
}

double nsn_gain_over_srev(const InterimRates& r, const AuctionParams& p) {
  const double per_bidder = (r.a - a0(p.n, p.T)) * p.m +
                            r.b * p.m * p.n * p.band_mass() * multi_t_mass(p.m, p.T) +
                            menu_q_revenue(r, p);
  return p.n * per_bidder;
}

bool BoundReport::all_pass() const noexcept {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

BoundReport bound_suite(const InterimRates& r, const AuctionParams& p) {
  BoundReport rep;
  auto check = [&](std::string name, double lhs, double rhs) {
    rep.checks.push_back({std::move(name), lhs, rhs, lhs <= rhs});
  };
  const double n = p.n, m = p.m, T = p.T;
  const double lam = p.effective_lambda();
  const double sqrt_mn = std::sqrt(n * m);

  check("a_geq_b", r.b, r.a);
  const double x = n / T;
  check("b_over_a_ratio", r.a > 0.0 ? r.b / r.a : 0.0, x * std::exp(-x) / -std::expm1(-x));

  for (int ell = 1; ell <= p.m - 1; ++ell) {
    const double rhs = std::pow(p.band_mass(), ell) * std::pow(p.below_band_mass(), p.m - ell - 1) *
                       ell * r.b / (T * r.a);
    check("q_" + std::to_string(ell) + "_upper", q_at(r.q, ell), rhs);
  }

  const double lead = (1.0 - 1.0 / (lam * lam)) * r.b * (m - 1) / (r.a * m * n);
  check("no_t_high_sum", high_q_mass(r.q, p.m), lead * num::pow1m(1.0 / T, m - 2));
  const double low_tail = 1.0 - 1.0 / (lam * sqrt_mn) + (lam - 1.0 / lam) * (m - 2) / sqrt_mn;
  check("no_t_low_sum", low_q_mass(r.q, p.m), lead * num::pow1m(1.0 / T, m - 3) * low_tail);

  check("b0_cap", b0(p.n, p.m, T), num::pow1m(1.0 / T, n - 1));

  const double scale = num::pow1m(1.0 / T, n);
  rep.b_all_bidders = rates_map(r.q, p, NoHighExponent::AllBidders).b;
  rep.b_ratio_other_bidders = r.b / scale;
  rep.b_ratio_all_bidders = rep.b_all_bidders / scale;
  check("b_lower_bound_ratio_nonneg", 0.0, rep.b_ratio_other_bidders);
  return rep;
}

double second_favorite_cdf(int n, int m, double z) {
  if (n < 2) throw std::invalid_argument("second_favorite_cdf: n must be >= 2");
  if (m < 1) throw std::invalid_argument("second_favorite_cdf: m must be >= 1");
  if (!(z >= 1.0)) throw std::invalid_argument("second_favorite_cdf: z must be >= 1");
  const double inv = 1.0 / z;
  const double all_below = num::pow1m(inv, static_cast<double>(m) * n);
  const double one_above = n * num::pow1m(inv, static_cast<double>(m) * (n - 1)) * num::one_minus_pow1m(inv, m);
  return all_below + one_above;
}

GrandBundleForms grand_bundle_forms(int n, int m) {
  if (n < 2) throw std::invalid_argument("grand_bundle_forms: n must be >= 2");
  if (m < 1) throw std::invalid_argument("grand_bundle_forms: m must be >= 1");
  const double mn = static_cast<double>(m) * n;
  return {n, m, mn - n * (m - 1.0) / (n - 1.0), mn};
}

KfaForms kfa_forms(int n, int m) {
  if (n < 1 || m < 1) throw std::invalid_argument("kfa_forms: n and m must be >= 1");
  KfaForms k;
  k.n = n;
  k.m = m;
  const double nm = static_cast<double>(n) * m;
  k.log_H = nm;
  k.L = std::sqrt(nm);
  const double inv_H = std::exp(-nm);  // may underflow to 0; only used as a correction

  k.log_p_hi = -nm;
  k.log_p_lo = -nm + std::log1p(-std::exp(std::log(m / 2.0) - nm));
  auto log_top_mass = [&](double exponent) {
    // log[(1 - (1 - 1/H)^e) / e]
    if (inv_H == 0.0) return -nm;
    return std::log(num::one_minus_pow1m(inv_H, exponent) / exponent);
  };
  k.log_p_exact = log_top_mass(m);
  k.log_p_exact_m_exponent = log_top_mass(m + 1.0);

  k.log_sold_high_hi = std::log(static_cast<double>(n)) - nm;
  const double correction = std::exp(std::log(n * (n + m - 1.0) / 2.0) - nm);
  k.log_sold_high_lo = std::log(static_cast<double>(n)) - nm + std::log1p(-(n + m - 1.0) / 2.0 * inv_H);
  k.high_revenue_hi = n;
  k.high_revenue_lo = n - correction;

  const double L = k.L;
  k.q_hi = (m - 1.0) / (2.0 * L * L);
  k.q_lo = k.q_hi - (m - 1.0) * (m - 2.0) / (6.0 * L * L * L);
  k.q_exact = 1.0 / L - num::one_minus_pow1m(1.0 / L, m) / m;
  if (k.q_exact < 0.0) k.q_exact = 0.0;
  k.low_revenue_lb = n * (m - 1.0) / (2.0 * L) - n * (m - 1.0) * (m - 2.0) / (6.0 * L * L) -
                     n * (n - 1.0) / 2.0 * (m - 1.0) * (m - 1.0) / (4.0 * L * L * L);
  k.low_revenue_exact = L * num::one_minus_pow1m(k.q_exact, n);
  return k;
}

}  // namespace cf
}  // namespace ccauction
