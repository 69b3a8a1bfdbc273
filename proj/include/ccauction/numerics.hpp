#pragma once

#include <cmath>
#include <cstdint>

namespace ccauction::num {

/// (1 - x)^n evaluated as exp(n * log1p(-x)).
[[nodiscard]] inline double pow1m(double x, double n) noexcept {
  if (n == 0.0) return 1.0;
  if (x >= 1.0) return x == 1.0 ? 0.0 : std::pow(1.0 - x, n);
  return std::exp(n * std::log1p(-x));
}

/// 1 - (1 - x)^n without cancellation for small x.
[[nodiscard]] inline double one_minus_pow1m(double x, double n) noexcept {
  if (n == 0.0) return 0.0;
  if (x >= 1.0) return x == 1.0 ? 1.0 : 1.0 - std::pow(1.0 - x, n);
  return -std::expm1(n * std::log1p(-x));
}

/// Binomial coefficient C(n, k). Exact integer arithmetic for n <= 60,
/// log-gamma beyond.
[[nodiscard]] double binomial(std::int64_t n, std::int64_t k) noexcept;

/// log C(n, k) via lgamma.
[[nodiscard]] double log_binomial(double n, double k) noexcept;

/// Binomial(trials, p) probability mass at k.
[[nodiscard]] double binomial_pmf(std::int64_t trials, std::int64_t k, double p) noexcept;

/// P[Binomial(trials, p) >= 2] = 1 - (1-p)^t - t p (1-p)^(t-1), summed term by
/// term so the O(t^2 p^2) result keeps full relative precision.
[[nodiscard]] double binomial_tail_ge2(std::int64_t trials, double p) noexcept;

/// E[(Binomial(trials, p) - 1)^+] = t p - 1 + (1-p)^t, summed term by term.
[[nodiscard]] double binomial_excess_over_one(std::int64_t trials, double p) noexcept;

/// (1 - (1 - p)^n) / (n p): E[1 / (1 + Binomial(n-1, p))]. Tends to 1 as p -> 0.
[[nodiscard]] double share_of_uniform_draw(double n, double p) noexcept;

}  // namespace ccauction::num
