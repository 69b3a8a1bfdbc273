#include "ccauction/numerics.hpp"

#include <algorithm>

namespace ccauction::num {

double binomial(std::int64_t n, std::int64_t k) noexcept {
  if (k < 0 || n < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  if (n <= 60) {
    // Exact: each partial product is itself a binomial coefficient.
    unsigned __int128 r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
      r = r * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
    }
    return static_cast<double>(r);
  }
  return std::exp(log_binomial(static_cast<double>(n), static_cast<double>(k)));
}

double log_binomial(double n, double k) noexcept {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binomial_pmf(std::int64_t trials, std::int64_t k, double p) noexcept {
  if (k < 0 || k > trials) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == trials ? 1.0 : 0.0;
  const double lg = std::log(binomial(trials, k)) + static_cast<double>(k) * std::log(p) +
                    static_cast<double>(trials - k) * std::log1p(-p);
  return std::exp(lg);
}

double binomial_tail_ge2(std::int64_t trials, double p) noexcept {
  if (trials < 2 || p <= 0.0) return 0.0;
  // Terms decay geometrically once k > trials * p; add smallest first.
  double sum = 0.0;
  for (std::int64_t k = trials; k >= 2; --k) sum += binomial_pmf(trials, k, p);
  return sum;
}

double binomial_excess_over_one(std::int64_t trials, double p) noexcept {
  if (trials < 2 || p <= 0.0) return 0.0;
  double sum = 0.0;
  for (std::int64_t k = trials; k >= 2; --k)
    sum += static_cast<double>(k - 1) * binomial_pmf(trials, k, p);
  return sum;
}

double share_of_uniform_draw(double n, double p) noexcept {
  if (p <= 0.0) return 1.0;
  const double np = n * p;
  if (np < 1e-8) return 1.0 - 0.5 * (n - 1.0) * p;
  return one_minus_pow1m(p, n) / np;
}

}  // namespace ccauction::num
