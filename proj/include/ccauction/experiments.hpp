#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ccauction/closed_form.hpp"
#include "ccauction/distributions.hpp"
#include "ccauction/fixed_point.hpp"
#include "ccauction/simulate.hpp"
#include "ccauction/stats.hpp"

namespace ccauction {

struct SweepRow {
  int n = 0;
  int m = 0;
  double lambda = 0.0;
  double T = 0.0;
  int c_star = 0;
  double rev_nsn = 0.0;
  double srev_n = 0.0;
  double residual = 0.0;
  double gain = 0.0;         ///< rev_nsn - srev_n, kept at full relative precision
  double analytic_lb = 0.0;  ///< b n^2 (T/(mn) - 1/T) P[Bin(m,1/T) >= 2] / (1-1/T)^n
};

/// Smallest c with SRev_{n+c} >= n * nsn_revenue_per_bidder, found by doubling
/// then bisection on the exact coupling increment. Throws std::invalid_argument
/// for an unconverged solution, std::domain_error when no finite c exists.
[[nodiscard]] SweepRow competition_complexity(const AuctionParams& params, const FixedPointSolution& s);

/// Memoizes fixed-point solutions on disk, one JSON document per solution,
/// keyed by (n, m, T, solver config). Writes go through a temp file + rename.
class SolutionCache {
 public:
  explicit SolutionCache(std::filesystem::path dir);
  [[nodiscard]] std::optional<FixedPointSolution> load(const AuctionParams& p, const SolverConfig& cfg) const;
  void store(const AuctionParams& p, const SolverConfig& cfg, const FixedPointSolution& s) const;
  [[nodiscard]] std::filesystem::path path_for(const AuctionParams& p, const SolverConfig& cfg) const;

 private:
  std::filesystem::path dir_;
};

/// solve() through an optional cache.
[[nodiscard]] FixedPointSolution solve_cached(const AuctionParams& p, const SolverConfig& cfg,
                                              const SolutionCache* cache);

struct GridPoint {
  int n = 0;
  int m = 0;
  double lambda = 0.0;
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

/// Parses "m=2:n=64,128" (optionally "lambda=1.5,2") into the cartesian product
/// in m-major order. `default_lambda` fills a missing lambda key. Throws
/// std::invalid_argument on malformed input.
[[nodiscard]] std::vector<GridPoint> parse_grid(const std::string& spec, double default_lambda = 1.5);

struct ScalingStudy {
  std::vector<SweepRow> rows;
  std::vector<GridPoint> skipped;  ///< T >= n or lambda <= 1
  OlsFit fit;                      ///< c_star ~ sqrt(nm)
};

[[nodiscard]] ScalingStudy scaling_study(const std::vector<GridPoint>& grid, const SolverConfig& cfg,
                                         const SolutionCache* cache = nullptr);

/// Sum over items of E[max_i of the canonical-flow virtual value]: T at an
/// atom in the favorite region, 0 elsewhere in it, v_ij outside it. For ER the
/// favorite region contributes nm exactly; the rest is a median-of-means
/// estimate. Throws std::invalid_argument for ER with n < 2.
[[nodiscard]] RevenueEstimate cdw_benchmark(const DistSpec& dist, int n, int m, std::uint64_t samples, Seed seed,
                                            Exec exec = Exec::Parallel);

struct GrandBundleRow {
  int n = 0;
  int m = 0;
  RevenueEstimate revenue;      ///< second-highest bundle value
  RevenueEstimate proxy;        ///< sum_j v_(2),(j)
  RevenueEstimate second_fav;   ///< v_(2),(1)
  double lower = 0.0, upper = 0.0;
  bool second_fav_in_bounds = false;
};

struct GrandBundleStudy {
  std::vector<GrandBundleRow> rows;
  OlsFit fit;  ///< (revenue - nm) ~ m ln(mn)
};

[[nodiscard]] GrandBundleRow grand_bundle_point(int n, int m, std::uint64_t samples, Seed seed,
                                                Exec exec = Exec::Parallel);
[[nodiscard]] GrandBundleStudy grand_bundle_study(const std::vector<GridPoint>& grid, std::uint64_t samples,
                                                  Seed seed, Exec exec = Exec::Parallel);

struct KfaStudy {
  int n = 0;
  int m = 0;
  cf::KfaForms forms;
  double high_revenue = 0.0;        ///< all items, from the exact per-item sale probability
  RevenueEstimate low_revenue;      ///< all items, Monte Carlo
  double total = 0.0;
  double excess = 0.0;              ///< total - nm
  double excess_lower_bound = 0.0;  ///< m * per-item low-branch bound
  double ratio = 0.0;               ///< excess / (m sqrt(nm))
};

/// Throws std::invalid_argument unless n >= m >= 1.
[[nodiscard]] KfaStudy kfa_study(int n, int m, std::uint64_t samples, Seed seed, Exec exec = Exec::Parallel);

/// "%.17g".
[[nodiscard]] std::string format_double(double x);

/// CSV with header n,m,lambda,T,c_star,rev_nsn,srev_n,residual.
[[nodiscard]] std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace ccauction
