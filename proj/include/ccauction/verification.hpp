#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ccauction/closed_form.hpp"
#include "ccauction/fixed_point.hpp"
#include "ccauction/mechanisms.hpp"
#include "ccauction/rng.hpp"

namespace ccauction {

struct DeviationWitness {
  std::vector<double> true_type;
  std::vector<double> misreport;
  double truthful_utility = 0.0;
  double deviating_utility = 0.0;
  double gain = 0.0;
};

/// Best utility over every (H, L) assignment of the m items and the null
/// option, by enumerating all 3^m assignments. Throws for m > 16.
[[nodiscard]] double best_menu_utility_exhaustive(std::span<const double> v, double a, double b,
                                                  const AuctionParams& params);

/// Draws a test type: plain ER<=T, or a mix of coordinates at T, just below T,
/// inside [mn/T, T), and below mn/T.
[[nodiscard]] std::vector<double> sample_menu_type(const AuctionParams& params, Rng& rng);

struct MenuBicReport {
  std::uint64_t types = 0;
  std::uint64_t enumeration_mismatches = 0;  ///< m <= 6 only
  std::uint64_t cross_type_violations = 0;
  std::uint64_t participation_violations = 0;
  double worst_shortfall = 0.0;
  double tolerance = 0.0;
  bool enumerated = false;
  [[nodiscard]] bool pass() const noexcept {
    return enumeration_mismatches == 0 && cross_type_violations == 0 && participation_violations == 0;
  }
};

/// Each sampled type's preferred option is compared with `partners` other
/// sampled types' options and, for m <= 6, with full enumeration. Utility
/// tolerance is 1e-9 * T.
[[nodiscard]] MenuBicReport menu_bic_check(double a, double b, const AuctionParams& params, std::uint64_t types,
                                           Seed seed, int partners = 8);

/// Interim utility of true type v reporting r in the Naive Auction against
/// truthful peers (T reports win w.p. a0 at T; eligible low reports w.p. b0 at mn/T).
[[nodiscard]] double naive_interim_utility(std::span<const double> v, std::span<const double> r,
                                           const AuctionParams& params, double a0, double b0);
/// Same for the Less-Naive Auction, including the subsidies.
[[nodiscard]] double lna_interim_utility(std::span<const double> v, std::span<const double> r,
                                         const AuctionParams& params, double a0, double b0);

/// The type (T - eps, (mn/T + T)/2, 1, ..., 1) reporting T on item 0.
[[nodiscard]] DeviationWitness lna_deviation_at(const AuctionParams& params, double a0, double b0, double eps);

/// Scans eps geometrically from T/2 down to 1e-15 T and returns the first
/// profitable witness. Throws std::invalid_argument for m < 2 and
/// std::runtime_error if no profitable eps exists.
[[nodiscard]] DeviationWitness find_lna_deviation(const AuctionParams& params, double a0, double b0);

/// All-T type lowering item 0 to mn/T. Throws std::invalid_argument for m < 2.
[[nodiscard]] DeviationWitness find_naive_deviation(const AuctionParams& params);

struct KfBicReport {
  std::uint64_t types = 0;
  std::uint64_t misreports = 0;
  double max_same_favorite_gain = 0.0;
  double max_gain_stderr = 0.0;
  std::vector<DeviationWitness> favorite_switching;  ///< profitable finds, reported only
  [[nodiscard]] bool pass() const noexcept {
    return max_same_favorite_gain <= 3.0 * max_gain_stderr + 1e-12;
  }
};

/// Interim KFA utilities against `opponents` untruncated ER opponent profiles
/// (common to every report). Same-favorite misreports must not gain; a
/// favorite-switching search is reported without assertion.
[[nodiscard]] KfBicReport kf_bic_check(int n, int m, std::uint64_t types, std::uint64_t opponents, Seed seed,
                                       int misreports_per_type = 16);

}  // namespace ccauction
