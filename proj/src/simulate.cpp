#include "ccauction/simulate.hpp"

#include <cmath>

#include "ccauction/mechanisms.hpp"

namespace ccauction {

bool RevenueEstimate::within(double target, double k) const noexcept {
  const double slack = k * std_error + 1e-12 * std::max(1.0, std::abs(target));
  return std::abs(mean - target) <= slack;
}

namespace {

enum Slot : std::size_t { kSrev, kNaive, kLna, kNaiveDiff, kLnaDiff, kNsn, kNsnDiff, kSlots };

}  // namespace

MechanismRevenues simulate_mechanisms(const AuctionParams& params, double a0, double b0,
                                      const InterimRates* nsn_rates, const SimConfig& cfg) {
  const auto dist = DistSpec::truncated(params.T);
  const auto bank = profile_reduce<MomentBank>(
      cfg.profiles, cfg.exec, [] { return MomentBank(kSlots); },
      [&](std::uint64_t k, MomentBank& acc) {
        const auto p = ValuationProfile::draw(params.n, params.m, dist, cfg.seed, k);
        auto tie = p.tie_breaker();
        const double s = sell_separately(p, params.T, tie).revenue;
        // Naive and Less-Naive share one tie-break stream so their allocations match.
        auto tie_naive = p.tie_breaker();
        const double nv = naive_auction(p, params, tie_naive).revenue;
        auto tie_lna = p.tie_breaker();
        const double ln = less_naive_auction(p, params, a0, b0, tie_lna).revenue;
        acc[kSrev].add(s);
        acc[kNaive].add(nv);
        acc[kLna].add(ln);
        acc[kNaiveDiff].add(nv - s);
        acc[kLnaDiff].add(ln - s);
        if (nsn_rates) {
          auto tie_nsn = p.tie_breaker();
          const double r = nsn_expost(p, *nsn_rates, params, tie_nsn).outcome.revenue;
          acc[kNsn].add(r);
          acc[kNsnDiff].add(r - s);
        }
      });
  MechanismRevenues out;
  out.srev = RevenueEstimate::from(bank[kSrev], cfg.seed);
  out.naive = RevenueEstimate::from(bank[kNaive], cfg.seed);
  out.less_naive = RevenueEstimate::from(bank[kLna], cfg.seed);
  out.naive_minus_srev = RevenueEstimate::from(bank[kNaiveDiff], cfg.seed);
  out.less_naive_minus_srev = RevenueEstimate::from(bank[kLnaDiff], cfg.seed);
  if (nsn_rates) {
    out.nsn = RevenueEstimate::from(bank[kNsn], cfg.seed);
    out.nsn_minus_srev = RevenueEstimate::from(bank[kNsnDiff], cfg.seed);
  }
  return out;
}

RevenueEstimate simulate_srev_increment(const AuctionParams& params, int x, const SimConfig& cfg) {
  const auto dist = DistSpec::truncated(params.T);
  const auto mo = profile_reduce<Moments>(
      cfg.profiles, cfg.exec, [] { return Moments{}; },
      [&](std::uint64_t k, Moments& acc) {
        const auto big = ValuationProfile::draw(params.n + x, params.m, dist, cfg.seed, k);
        const auto small = big.first_bidders(params.n);
        auto t1 = big.tie_breaker();
        auto t2 = small.tie_breaker();
        acc.add(sell_separately(big, params.T, t1).revenue - sell_separately(small, params.T, t2).revenue);
      });
  return RevenueEstimate::from(mo, cfg.seed);
}

RealizedRates simulate_realized_rates(const AuctionParams& params, double a, double b, const SimConfig& cfg) {
  const auto dist = DistSpec::truncated(params.T);
  const InterimRates rates{a, b, {}, 0.0, 0.0};
  return profile_reduce<RealizedRates>(
      cfg.profiles, cfg.exec, [] { return RealizedRates{}; },
      [&](std::uint64_t k, RealizedRates& acc) {
        const auto p = ValuationProfile::draw(params.n, params.m, dist, cfg.seed, k);
        auto tie = p.tie_breaker();
        const auto out = nsn_expost(p, rates, params, tie);
        double high_slots = 0.0, high_served = 0.0, low_slots = 0.0, low_served = 0.0;
        for (int j = 0; j < params.m; ++j) {
          int h = 0, l = 0;
          for (int i = 0; i < params.n; ++i) {
            h += contains(out.high[static_cast<std::size_t>(i)], j);
            l += contains(out.low[static_cast<std::size_t>(i)], j);
          }
          high_slots += h;
          low_slots += l;
          const auto w = out.outcome.allocation[static_cast<std::size_t>(j)];
          if (h > 0) {
            high_served += 1.0;
            if (!w || !contains(out.high[static_cast<std::size_t>(*w)], j)) ++acc.supply_violations;
          } else if (l > 0) {
            low_served += 1.0;
            if (!w || !contains(out.low[static_cast<std::size_t>(*w)], j)) ++acc.supply_violations;
          } else if (w) {
            ++acc.supply_violations;
          }
        }
        acc.high.add(high_slots, high_served);
        acc.low.add(low_slots, low_served);
      });
}

}  // namespace ccauction
