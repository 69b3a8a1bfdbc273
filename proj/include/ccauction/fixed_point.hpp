#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccauction/closed_form.hpp"
#include "ccauction/rng.hpp"
#include "ccauction/simulate.hpp"

namespace ccauction {

struct QEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// q_l for the menu (a, b): the probability that a bidder has no T value, item
/// j is her favorite, exactly l other items lie in [mn/T, T), the remaining
/// m-l-1 lie below mn/T, and she takes ({j}, L). The l band values are drawn
/// by inverse CDF on the band; the favorite's value is integrated exactly.
/// Throws std::invalid_argument for l outside [1, m-1], an empty band, or a <= 0.
[[nodiscard]] QEstimate estimate_q_ell(int ell, double a, double b, const AuctionParams& params,
                                       std::uint64_t samples, Seed seed, Exec exec = Exec::Parallel);

struct SolverConfig {
  double tol = 1e-9;
  int max_iter = 200;
  double damping = 0.5;
  std::uint64_t samples = 1 << 18;
  Seed seed{0x5eed, 0};
  NoHighExponent exponent = NoHighExponent::OtherBidders;
  Exec exec = Exec::Parallel;
};

struct FixedPointSolution {
  InterimRates rates;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> q_stderr;
  std::vector<double> residual_trace;
  Seed seed;
  double a0 = 0.0;
  double b0 = 0.0;
  bool converged = false;
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, std::vector<double> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  [[nodiscard]] const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

/// Damped iteration (a, b) <- (a, b) + d (map(q(a, b)) - (a, b)) from (a0, b0).
/// Every iteration reuses the same q sampling stream, so the map is a
/// deterministic function of (a, b). The residual is the relative change of the
/// undamped map. Throws std::invalid_argument when T < sqrt(mn) or tol <= 0,
/// NonConvergence after max_iter.
[[nodiscard]] FixedPointSolution solve(const AuctionParams& params, const SolverConfig& cfg = {});

struct ValidationCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double limit = 0.0;
};

struct FeasibilityReport {
  double target_a = 0.0, target_b = 0.0;
  double realized_a = 0.0, realized_b = 0.0;
  double stderr_a = 0.0, stderr_b = 0.0;
  double z_a = 0.0, z_b = 0.0;
  std::uint64_t profiles = 0;
  std::uint64_t supply_violations = 0;
  bool pass = false;
};

/// Realized high/low win rates under (a, b) with true preferences, as z-scores
/// against (a, b). Passes when both |z| <= 3 and no supply violation occurs.
[[nodiscard]] FeasibilityReport feasibility_check(double a, double b, const AuctionParams& params,
                                                  const SimConfig& cfg);

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  cf::BoundReport bounds;
  FeasibilityReport feasibility;
  [[nodiscard]] bool pass() const noexcept;
};

/// Bound suite, the ratio bound, a fresh-seed fixed-point residual check and
/// ex-post feasibility. Throws std::invalid_argument when T < sqrt(mn).
[[nodiscard]] ValidationReport validate(const FixedPointSolution& s, const AuctionParams& params,
                                        const SimConfig& feasibility_cfg, const SolverConfig& solver_cfg = {});

}  // namespace ccauction
