#include "ccauction/distributions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ccauction/numerics.hpp"
#include "ccauction/parallel.hpp"

namespace ccauction {

DistSpec DistSpec::truncated(double T) {
  if (!(T >= 1.0)) throw std::invalid_argument("truncation T must be >= 1, got " + std::to_string(T));
  return DistSpec{DistKind::TruncatedEqualRevenue, T};
}

namespace dist {

std::vector<double> sample(const DistSpec& spec, Seed seed, std::int64_t count) {
  if (count < 0) throw std::invalid_argument("sample: negative count");
  std::vector<double> out(static_cast<std::size_t>(count));
  const ChunkPlan plan{static_cast<std::uint64_t>(count), 1 << 14};
  const auto n = static_cast<std::int64_t>(plan.chunks());
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < n; ++c) {
    const auto cu = static_cast<std::uint64_t>(c);
    Rng rng(seed);
    rng.seek(plan.begin(cu));
    for (std::uint64_t i = plan.begin(cu); i < plan.end(cu); ++i) out[i] = spec.draw(rng);
  }
  return out;
}

double cdf(const DistSpec& spec, double x) noexcept {
  if (x < 1.0) return 0.0;
  if (x >= spec.T()) return 1.0;
  return 1.0 - 1.0 / x;
}

double cdf_left(const DistSpec& spec, double x) noexcept {
  if (x <= 1.0) return 0.0;
  if (x > spec.T()) return 1.0;
  return 1.0 - 1.0 / x;
}

double pdf_density(const DistSpec& spec, double x) noexcept {
  if (x < 1.0 || x >= spec.T()) return 0.0;
  return 1.0 / (x * x);
}

double atom_mass(const DistSpec& spec, double x) noexcept {
  return spec.is_truncated() && x == spec.T() ? 1.0 / spec.T() : 0.0;
}

double quantile(const DistSpec& spec, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q must lie in [0, 1]");
  if (q == 1.0) return spec.T();
  const double v = 1.0 / (1.0 - q);
  return v >= spec.T() ? spec.T() : v;
}

double virtual_value(const DistSpec& spec, double x) {
  if (!(x >= 1.0)) throw std::invalid_argument("virtual_value: x must be >= 1");
  if (x > spec.T()) throw std::invalid_argument("virtual_value: x above the truncation point");
  // phi(x) = x - (1 - F(x)) / f(x) = x - (1/x) / (1/x^2) = 0 on the continuous part.
  return spec.is_truncated() && x == spec.T() ? spec.T() : 0.0;
}

Marginal favorite_marginal(int m, double x) {
  if (m < 1) throw std::invalid_argument("favorite_marginal: m must be >= 1");
  if (x < 1.0) return {0.0, 0.0};
  const double inv = 1.0 / x;
  return {num::pow1m(inv, m), m * num::pow1m(inv, m - 1) * inv * inv};
}

Marginal nonfavorite_marginal(int m, double x) {
  if (m < 2) throw std::invalid_argument("nonfavorite_marginal: needs m >= 2");
  if (x < 1.0) return {0.0, 0.0};
  const double inv = 1.0 / x;
  const double scale = 1.0 / (1.0 - 1.0 / m);
  const double pdf = scale * inv * inv * num::one_minus_pow1m(inv, m - 1);
  const double cdf = scale * (1.0 - inv - num::pow1m(inv, m) / m);
  return {cdf, pdf};
}

MarginalSamples sample_marginals(int m, Seed seed, std::int64_t count) {
  if (m < 1) throw std::invalid_argument("sample_marginals: m must be >= 1");
  if (count < 0) throw std::invalid_argument("sample_marginals: negative count");
  MarginalSamples out;
  out.favorite.resize(static_cast<std::size_t>(count));
  if (m >= 2) out.nonfavorite.resize(static_cast<std::size_t>(count));
  const auto spec = DistSpec::equal_revenue();
#pragma omp parallel
  {
    std::vector<double> v(static_cast<std::size_t>(m));
#pragma omp for schedule(static)
    for (std::int64_t k = 0; k < count; ++k) {
      Rng rng(seed, static_cast<std::uint64_t>(k));
      std::size_t fav = 0;
      for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] = spec.draw(rng);
        if (v[j] > v[fav]) fav = j;
      }
      const auto sk = static_cast<std::size_t>(k);
      out.favorite[sk] = v[fav];
      if (m >= 2) {
        auto pick = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(m - 1)));
        if (pick >= fav) ++pick;
        out.nonfavorite[sk] = v[pick];
      }
    }
  }
  return out;
}

double conditional_mean_below(double v) {
  if (!(v > 1.0)) throw std::invalid_argument("conditional_mean_below: v must exceed 1");
  // ln v / (1 - 1/v) written to stay accurate as v -> 1.
  return std::log1p(v - 1.0) * v / (v - 1.0);
}

double conditional_variance_below(double v) {
  const double mean = conditional_mean_below(v);
  return v - mean * mean;
}

double max_quantile_sample(int n_plus_c, Rng& rng) {
  if (n_plus_c < 1) throw std::invalid_argument("max_quantile_sample: n + c must be >= 1");
  double best = 0.0;
  for (int i = 0; i < n_plus_c; ++i) best = std::max(best, rng.uniform());
  return best;
}

double max_quantile_sample(int n_plus_c, Seed seed, std::uint64_t draw) {
  Rng rng(seed, draw);
  return max_quantile_sample(n_plus_c, rng);
}

}  // namespace dist
}  // namespace ccauction
