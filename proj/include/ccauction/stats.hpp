#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace ccauction {

/// Streaming mean/variance (Welford) with an order-sensitive merge.
struct Moments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }

  void merge(const Moments& o) noexcept;

  [[nodiscard]] double variance() const noexcept {
    return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
  }
  [[nodiscard]] double stderr_mean() const noexcept {
    return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
  }
};

/// A fixed-size bank of Moments, one per named statistic.
struct MomentBank {
  std::vector<Moments> slots;

  MomentBank() = default;
  explicit MomentBank(std::size_t n) : slots(n) {}

  Moments& operator[](std::size_t i) { return slots[i]; }
  const Moments& operator[](std::size_t i) const { return slots[i]; }

  void merge(const MomentBank& o);
};

/// Joint moments of (x, y) for ratio estimators E[y]/E[x].
struct CoMoments {
  std::uint64_t count = 0;
  double mean_x = 0.0, mean_y = 0.0;
  double cxx = 0.0, cyy = 0.0, cxy = 0.0;

  void add(double x, double y) noexcept;
  void merge(const CoMoments& o) noexcept;

  [[nodiscard]] double ratio() const noexcept { return mean_x != 0.0 ? mean_y / mean_x : 0.0; }
  /// Delta-method standard error of ratio().
  [[nodiscard]] double ratio_stderr() const noexcept;
};

enum class Estimator { PlainMean, MedianOfMeans };

/// Mean-of-blocks accumulator. Samples are assigned to blocks by their global
/// index, so the block contents do not depend on chunking.
struct BlockMoments {
  std::vector<Moments> blocks;

  BlockMoments() = default;
  explicit BlockMoments(std::size_t n) : blocks(n) {}

  void merge(const BlockMoments& o);

  [[nodiscard]] Moments pooled() const;
  [[nodiscard]] double median_of_means() const;
  /// sqrt(pi/2) * sd(block means) / sqrt(#blocks).
  [[nodiscard]] double median_of_means_stderr() const;
};

struct OlsFit {
  bool defined = false;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y ~ intercept + slope * x. Undefined for fewer than
/// two distinct x values.
[[nodiscard]] OlsFit ols(std::span<const double> x, std::span<const double> y);

/// Two-sided Kolmogorov-Smirnov statistic of `samples` against `cdf`. Sorts
/// the samples in place. Tied samples are grouped; for distributions with
/// atoms pass `cdf_left` (the left limit F(x-)), otherwise `cdf` is used.
[[nodiscard]] double ks_statistic(std::vector<double>& samples,
                                  const std::function<double(double)>& cdf,
                                  const std::function<double(double)>& cdf_left = {});

}  // namespace ccauction
