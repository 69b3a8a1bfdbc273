#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ccauction/closed_form.hpp"
#include "ccauction/distributions.hpp"
#include "ccauction/rng.hpp"

namespace ccauction {

/// Bit j set <=> item j in the set. Supports m <= 64.
using ItemSet = std::uint64_t;

inline constexpr int kMaxItems = 64;

[[nodiscard]] inline bool contains(ItemSet s, int j) noexcept { return (s >> j) & 1U; }
[[nodiscard]] inline int set_size(ItemSet s) noexcept { return __builtin_popcountll(s); }

/// n x m matrix of values, row-major by bidder.
class ValuationProfile {
 public:
  /// Draws n*m values bidder by bidder from substream `index` of `seed`, so
  /// two profiles with the same (seed, index) share their first rows.
  static ValuationProfile draw(int n, int m, const DistSpec& dist, Seed seed, std::uint64_t index);
  /// Throws std::invalid_argument for a size mismatch or a value below 1.
  static ValuationProfile from_values(int n, int m, std::vector<double> values,
                                      const DistSpec& dist = DistSpec::equal_revenue());

  [[nodiscard]] int bidders() const noexcept { return n_; }
  [[nodiscard]] int items() const noexcept { return m_; }
  [[nodiscard]] double operator()(int i, int j) const noexcept {
    return values_[static_cast<std::size_t>(i) * m_ + j];
  }
  [[nodiscard]] std::span<const double> row(int i) const noexcept {
    return {values_.data() + static_cast<std::size_t>(i) * m_, static_cast<std::size_t>(m_)};
  }
  /// The profile restricted to bidders 0..k-1 (same seed and index).
  [[nodiscard]] ValuationProfile first_bidders(int k) const;

  [[nodiscard]] const DistSpec& dist() const noexcept { return dist_; }
  [[nodiscard]] Seed seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t index() const noexcept { return index_; }

  /// Generator for the mechanisms' uniform tie-breaks on this profile.
  [[nodiscard]] Rng tie_breaker() const noexcept;

 private:
  ValuationProfile(int n, int m, std::vector<double> v, DistSpec d, Seed s, std::uint64_t idx)
      : n_(n), m_(m), values_(std::move(v)), dist_(d), seed_(s), index_(idx) {}

  int n_;
  int m_;
  std::vector<double> values_;
  DistSpec dist_;
  Seed seed_;
  std::uint64_t index_;
};

struct MechanismOutcome {
  std::vector<std::optional<int>> allocation;  ///< winner per item
  std::vector<double> payments;                ///< per bidder
  std::vector<double> subsidies;               ///< per bidder
  double revenue = 0.0;                        ///< sum(payments) - sum(subsidies)
};

/// Per-item second-price auction with a reserve; argmax ties broken uniformly.
[[nodiscard]] MechanismOutcome sell_separately(const ValuationProfile& p, double reserve, Rng& tie);

[[nodiscard]] MechanismOutcome naive_auction(const ValuationProfile& p, const AuctionParams& params,
                                             Rng& tie);

/// Same allocation as naive_auction; multi-T winners are subsidized on every T
/// item after their lowest-indexed one. Throws std::invalid_argument for a0 <= 0.
[[nodiscard]] MechanismOutcome less_naive_auction(const ValuationProfile& p, const AuctionParams& params,
                                                  double a0, double b0, Rng& tie);

struct MenuOption {
  ItemSet H = 0;
  ItemSet L = 0;
  double price = 0.0;

  [[nodiscard]] bool is_null() const noexcept { return H == 0; }
  friend bool operator==(const MenuOption&, const MenuOption&) = default;
};

/// b|L|mn/T + a|H|T - b(T - mn/T)(|H| - 1); 0 for the null option.
[[nodiscard]] double menu_price(ItemSet H, ItemSet L, double a, double b, const AuctionParams& params);
[[nodiscard]] MenuOption make_option(ItemSet H, ItemSet L, double a, double b, const AuctionParams& params);
/// a * sum_H v + b * sum_L v - price.
[[nodiscard]] double menu_utility(std::span<const double> v, const MenuOption& o, double a, double b);

/// First index of the largest value.
[[nodiscard]] int favorite_item(std::span<const double> v) noexcept;

/// Utility-maximizing option of the menu with rates (a, b) for type v.
[[nodiscard]] MenuOption nsn_preferred_option(std::span<const double> v, double a, double b,
                                              const AuctionParams& params);
[[nodiscard]] inline MenuOption nsn_preferred_option(std::span<const double> v, const InterimRates& r,
                                                     const AuctionParams& params) {
  return nsn_preferred_option(v, r.a, r.b, params);
}

struct NsnOutcome {
  MechanismOutcome outcome;
  std::vector<ItemSet> high;  ///< per bidder: items where she is high
  std::vector<ItemSet> low;   ///< per bidder: items where she is low
};

/// Ex-post realization of the menu: per item, uniform among highs, else among
/// lows. Every bidder pays the interim price of her chosen option.
[[nodiscard]] NsnOutcome nsn_expost(const ValuationProfile& p, const InterimRates& r,
                                    const AuctionParams& params, Rng& tie);

/// Second-price auction on the grand bundle. Throws for n < 2.
[[nodiscard]] MechanismOutcome grand_bundle_spa(const ValuationProfile& p, Rng& tie);

enum class KfaBranch { Unsold, High, Low };

struct KfaOutcome {
  MechanismOutcome outcome;
  std::vector<KfaBranch> branch;  ///< per item
};

/// Bidders whose m values are pairwise distinct.
[[nodiscard]] bool has_distinct_values(std::span<const double> v) noexcept;

/// Knows-Favorite Auction with H = e^{nm}, L = sqrt(nm); v >= H is tested as
/// log v >= nm.
[[nodiscard]] KfaOutcome kfa(const ValuationProfile& p, Rng& tie);

}  // namespace ccauction
