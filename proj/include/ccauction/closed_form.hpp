#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ccauction {

/// n bidders, m items, values from ER truncated at T. When built from lambda,
/// T = lambda * sqrt(n m).
struct AuctionParams {
  int n = 1;
  int m = 1;
  double T = 1.0;
  std::optional<double> lambda;

  /// Throws std::invalid_argument for n < 1, m < 1, T < 1.
  static AuctionParams with_T(int n, int m, double T);
  /// Throws std::invalid_argument for lambda <= 1 in addition to the above.
  static AuctionParams from_lambda(int n, int m, double lambda);

  /// mn/T: the "low" posted price and the lower end of the low band.
  [[nodiscard]] double low_price() const noexcept { return static_cast<double>(m) * n / T; }
  /// P[v in [mn/T, T)] = T/(mn) - 1/T.
  [[nodiscard]] double band_mass() const noexcept { return T / (static_cast<double>(m) * n) - 1.0 / T; }
  /// P[v < mn/T] = 1 - T/(mn).
  [[nodiscard]] double below_band_mass() const noexcept { return 1.0 - T / (static_cast<double>(m) * n); }
  /// T >= sqrt(mn), required by the menu rate bounds.
  [[nodiscard]] bool above_sqrt_mn() const noexcept { return T * T >= static_cast<double>(m) * n; }
  /// The studied regime also asks T < n.
  [[nodiscard]] bool in_regime() const noexcept { return T < n; }
  /// lambda if given, else T / sqrt(mn).
  [[nodiscard]] double effective_lambda() const noexcept;
};

/// Interim rates of the Not-So-Naive menu. q[l-1] holds q_l, l = 1..m-1.
struct InterimRates {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> q;
  double p_high = 0.0;
  double p_low = 0.0;
};

/// Exponent of the "no other bidder is high" factor in b: n-1 for the other
/// bidders, or n.
enum class NoHighExponent { OtherBidders, AllBidders };

namespace cf {

/// m T (1 - (1 - 1/T)^n'). Throws for T < 1 or n' < 0.
[[nodiscard]] double srev(int n_prime, int m, double T);

struct IncrementBound {
  double exact;  ///< m T (1-1/T)^n (1 - (1-1/T)^x)
  double bound;  ///< m x (1-1/T)^n
};
/// Revenue added by x extra bidders under the coupling that shares the first n.
[[nodiscard]] IncrementBound srev_increment_bound(int n, int x, int m, double T);

/// Total (all items) expected revenue of the Naive Auction above SRev_n.
/// Throws std::domain_error when mn/T > T.
[[nodiscard]] double naive_gain(const AuctionParams& p);

/// Interim win probability of a T report when items go uniformly to T bidders.
[[nodiscard]] double a0(int n, double T);
/// The b rate with every q_l = 0. Zero when m = 1 (no low types exist).
[[nodiscard]] double b0(int n, int m, double T, NoHighExponent e = NoHighExponent::OtherBidders);

/// Expected subsidies per bidder in the Less-Naive Auction: m/T - 1 + (1-1/T)^m.
[[nodiscard]] double expected_subsidies(int m, double T);
/// 1 - (1-1/T)^m - (m/T)(1-1/T)^(m-1), i.e. P[at least two of m items at T].
[[nodiscard]] double multi_t_mass(int m, double T);
/// Less-Naive revenue above SRev_n for a given low rate b.
[[nodiscard]] double lna_gain(int n, int m, double T, double b);

/// (q_1..q_{m-1}) -> (P[high], P[low], a, b). Throws std::invalid_argument for
/// a q of the wrong length or out of [0,1], std::domain_error when P[high] >= 1.
[[nodiscard]] InterimRates rates_map(std::span<const double> q, const AuctionParams& p,
                                     NoHighExponent e = NoHighExponent::OtherBidders);

/// Expected interim payment of one bidder facing the menu.
[[nodiscard]] double nsn_revenue_per_bidder(const InterimRates& r, const AuctionParams& p);
/// n * nsn_revenue_per_bidder - SRev_n, assembled from its components so the
/// (exponentially small) difference keeps its relative precision.
[[nodiscard]] double nsn_gain_over_srev(const InterimRates& r, const AuctionParams& p);

struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct BoundReport {
  std::vector<BoundCheck> checks;
  double b_ratio_other_bidders = 0.0;  ///< b / (1-1/T)^n with the n-1 exponent in b
  double b_ratio_all_bidders = 0.0;    ///< same with the n exponent variant of b
  double b_all_bidders = 0.0;
  [[nodiscard]] bool all_pass() const noexcept;
};

/// Evaluates the stated inequalities on a set of rates; never throws for
/// valid params.
[[nodiscard]] BoundReport bound_suite(const InterimRates& r, const AuctionParams& p);

/// P[v_(2),(1) <= z]: CDF of the second-highest favorite-item value among n
/// ER^m bidders. Throws for z < 1 or n < 2.
[[nodiscard]] double second_favorite_cdf(int n, int m, double z);

struct GrandBundleForms {
  int n = 0;
  int m = 0;
  double lower = 0.0;  ///< mn - n(m-1)/(n-1)
  double upper = 0.0;  ///< mn
};
[[nodiscard]] GrandBundleForms grand_bundle_forms(int n, int m);

/// Knows-Favorite Auction revenue bounds, H = e^{nm},
/// L = sqrt(nm). Quantities that underflow are kept as logarithms.
struct KfaForms {
  int n = 0;
  int m = 0;
  double log_H = 0.0;
  double L = 0.0;
  // p = P[bidder in S_j with v_j >= H]
  double log_p_lo = 0.0, log_p_hi = 0.0;
  double log_p_exact = 0.0;            ///< m-1 other items below x
  double log_p_exact_m_exponent = 0.0; ///< variant with (1-1/x)^m
  // P[item sold to S_j]
  double log_sold_high_lo = 0.0, log_sold_high_hi = 0.0;
  // H * P[sold to S_j], per item
  double high_revenue_lo = 0.0, high_revenue_hi = 0.0;
  // q = P[bidder in S \ S_j with v_j >= L]
  double q_lo = 0.0, q_hi = 0.0, q_exact = 0.0;
  /// Lower bound on low-branch revenue per item.
  double low_revenue_lb = 0.0;
  /// L (1 - (1 - q)^n), the low-branch revenue per item given availability.
  double low_revenue_exact = 0.0;
};
[[nodiscard]] KfaForms kfa_forms(int n, int m);

}  // namespace cf
}  // namespace ccauction
