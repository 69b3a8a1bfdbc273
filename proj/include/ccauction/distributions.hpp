#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "ccauction/rng.hpp"

namespace ccauction {

enum class DistKind { EqualRevenue, TruncatedEqualRevenue };

/// Equal-Revenue distribution, optionally truncated at T with an atom of mass
/// 1/T at T. Untruncated specs report T = +inf.
class DistSpec {
 public:
  static DistSpec equal_revenue() noexcept { return DistSpec{DistKind::EqualRevenue, kInf}; }
  /// Throws std::invalid_argument when T < 1 (or NaN).
  static DistSpec truncated(double T);

  [[nodiscard]] DistKind kind() const noexcept { return kind_; }
  [[nodiscard]] bool is_truncated() const noexcept { return kind_ == DistKind::TruncatedEqualRevenue; }
  [[nodiscard]] double T() const noexcept { return T_; }

  /// Inverse-CDF draw: min(1/(1-u), T). Clamped draws are bit-equal to T.
  double draw(Rng& rng) const noexcept {
    const double v = 1.0 / (1.0 - rng.uniform());
    return v >= T_ ? T_ : v;
  }

  friend bool operator==(const DistSpec&, const DistSpec&) = default;

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  DistSpec(DistKind k, double T) noexcept : kind_(k), T_(T) {}

  DistKind kind_;
  double T_;
};

namespace dist {

/// Draw k uses draw index k of the (seed.root, seed.stream) stream.
[[nodiscard]] std::vector<double> sample(const DistSpec& spec, Seed seed, std::int64_t count);

[[nodiscard]] double cdf(const DistSpec& spec, double x) noexcept;
/// Left limit F(x-).
[[nodiscard]] double cdf_left(const DistSpec& spec, double x) noexcept;
/// Density of the continuous part (1/x^2 on [1, T)).
[[nodiscard]] double pdf_density(const DistSpec& spec, double x) noexcept;
[[nodiscard]] double atom_mass(const DistSpec& spec, double x) noexcept;
/// Generalized inverse; throws for q outside [0, 1].
[[nodiscard]] double quantile(const DistSpec& spec, double q);

/// Ironed virtual value. ER<=T: 0 on [1, T), T at T. ER: 0 everywhere.
/// Throws for x < 1 or x > T.
[[nodiscard]] double virtual_value(const DistSpec& spec, double x);

struct Marginal {
  double cdf;
  double pdf;
};

/// Value of the favorite (highest) item of an ER^m bidder.
[[nodiscard]] Marginal favorite_marginal(int m, double x);
/// Value of a non-favorite item of an ER^m bidder. Throws for m < 2.
[[nodiscard]] Marginal nonfavorite_marginal(int m, double x);

struct MarginalSamples {
  std::vector<double> favorite;
  std::vector<double> nonfavorite;  ///< one uniformly chosen non-favorite item per bidder; empty for m = 1
};
/// `count` ER^m bidders, bidder k from substream k of `seed`.
[[nodiscard]] MarginalSamples sample_marginals(int m, Seed seed, std::int64_t count);

/// E[x | x <= v] for x ~ ER. Throws for v <= 1.
[[nodiscard]] double conditional_mean_below(double v);
/// Var[x | x <= v] for x ~ ER. Throws for v <= 1.
[[nodiscard]] double conditional_variance_below(double v);

/// Max of n_plus_c independent uniforms. Throws for n_plus_c < 1.
[[nodiscard]] double max_quantile_sample(int n_plus_c, Rng& rng);
[[nodiscard]] double max_quantile_sample(int n_plus_c, Seed seed, std::uint64_t draw = 0);

}  // namespace dist
}  // namespace ccauction
