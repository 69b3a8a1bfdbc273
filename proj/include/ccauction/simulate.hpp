#pragma once

// Monte Carlo drivers over independent valuation profiles. Profile k is drawn
// from substream k of the run seed, and accumulators merge in chunk order, so
// every estimate is a function of (config, seed) only.

#include <cstdint>
#include <optional>

#include "ccauction/closed_form.hpp"
#include "ccauction/distributions.hpp"
#include "ccauction/parallel.hpp"
#include "ccauction/rng.hpp"
#include "ccauction/stats.hpp"

namespace ccauction {

enum class Exec { Parallel, Serial };

struct RevenueEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  Estimator estimator = Estimator::PlainMean;
  Seed seed;

  static RevenueEstimate from(const Moments& mo, Seed s) {
    return {mo.mean, mo.stderr_mean(), mo.count, Estimator::PlainMean, s};
  }
  static RevenueEstimate from(const BlockMoments& bm, Seed s) {
    return {bm.median_of_means(), bm.median_of_means_stderr(), bm.pooled().count, Estimator::MedianOfMeans, s};
  }
  /// |mean - target| <= k * std_error (with a 1e-12 relative floor).
  [[nodiscard]] bool within(double target, double k = 3.0) const noexcept;
};

inline constexpr std::uint64_t kProfileChunk = 1024;

/// Runs body(index, acc) for index in [0, count) and merges the per-chunk
/// accumulators in chunk order. `make` builds an empty accumulator.
template <class Acc, class Make, class Body>
Acc profile_reduce(std::uint64_t count, Exec exec, Make&& make, Body&& body,
                   std::uint64_t chunk = kProfileChunk) {
  const ChunkPlan plan{count, chunk};
  auto kernel = [&](std::uint64_t, std::uint64_t b, std::uint64_t e) {
    Acc acc = make();
    for (std::uint64_t i = b; i < e; ++i) body(i, acc);
    return acc;
  };
  auto parts = exec == Exec::Parallel ? map_chunks<Acc>(plan, kernel) : map_chunks_serial<Acc>(plan, kernel);
  Acc total = make();
  for (auto& p : parts) total.merge(p);
  return total;
}

struct SimConfig {
  std::uint64_t profiles = 100000;
  Seed seed;
  Exec exec = Exec::Parallel;
};

/// Revenue of each ER<=T mechanism on shared profiles, plus the coupled
/// differences against selling separately at reserve T.
struct MechanismRevenues {
  RevenueEstimate srev;
  RevenueEstimate naive;
  RevenueEstimate less_naive;
  RevenueEstimate naive_minus_srev;
  RevenueEstimate less_naive_minus_srev;
  std::optional<RevenueEstimate> nsn;  ///< total interim payments, when rates are given
  std::optional<RevenueEstimate> nsn_minus_srev;
};

[[nodiscard]] MechanismRevenues simulate_mechanisms(const AuctionParams& params, double a0, double b0,
                                                    const InterimRates* nsn_rates, const SimConfig& cfg);

/// SRev_{n+x} - SRev_n on profiles whose first n bidders are shared.
[[nodiscard]] RevenueEstimate simulate_srev_increment(const AuctionParams& params, int x, const SimConfig& cfg);

/// Realized interim win rates of high and low bidders when every bidder picks
/// her preferred option from the menu (a, b) and items go uniformly to highs,
/// then lows. Each rate is a ratio estimate: items served per class slot.
struct RealizedRates {
  CoMoments high;
  CoMoments low;
  std::uint64_t supply_violations = 0;

  void merge(const RealizedRates& o) {
    high.merge(o.high);
    low.merge(o.low);
    supply_violations += o.supply_violations;
  }
};

[[nodiscard]] RealizedRates simulate_realized_rates(const AuctionParams& params, double a, double b,
                                                    const SimConfig& cfg);

}  // namespace ccauction
