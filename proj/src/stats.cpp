#include "ccauction/stats.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace ccauction {

void Moments::merge(const Moments& o) noexcept {
  if (o.count == 0) return;
  if (count == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(count);
  const double nb = static_cast<double>(o.count);
  const double n = na + nb;
  const double d = o.mean - mean;
  mean += d * nb / n;
  m2 += o.m2 + d * d * na * nb / n;
  count += o.count;
}

void MomentBank::merge(const MomentBank& o) {
  if (slots.empty()) {
    slots = o.slots;
    return;
  }
  if (o.slots.size() != slots.size()) throw std::logic_error("MomentBank size mismatch");
  for (std::size_t i = 0; i < slots.size(); ++i) slots[i].merge(o.slots[i]);
}

void CoMoments::add(double x, double y) noexcept {
  ++count;
  const double n = static_cast<double>(count);
  const double dx = x - mean_x;
  const double dy = y - mean_y;
  mean_x += dx / n;
  mean_y += dy / n;
  cxx += dx * (x - mean_x);
  cyy += dy * (y - mean_y);
  cxy += dx * (y - mean_y);
}

void CoMoments::merge(const CoMoments& o) noexcept {
  if (o.count == 0) return;
  if (count == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(count);
  const double nb = static_cast<double>(o.count);
  const double n = na + nb;
  const double dx = o.mean_x - mean_x;
  const double dy = o.mean_y - mean_y;
  mean_x += dx * nb / n;
  mean_y += dy * nb / n;
  cxx += o.cxx + dx * dx * na * nb / n;
  cyy += o.cyy + dy * dy * na * nb / n;
  cxy += o.cxy + dx * dy * na * nb / n;
  count += o.count;
}

double CoMoments::ratio_stderr() const noexcept {
  if (count < 2 || mean_x == 0.0) return 0.0;
  const double n = static_cast<double>(count);
  const double r = ratio();
  const double var_x = cxx / (n - 1);
  const double var_y = cyy / (n - 1);
  const double cov = cxy / (n - 1);
  const double v = std::max(0.0, var_y - 2.0 * r * cov + r * r * var_x);
  return std::sqrt(v / n) / std::abs(mean_x);
}

void BlockMoments::merge(const BlockMoments& o) {
  if (blocks.empty()) {
    blocks = o.blocks;
    return;
  }
  if (o.blocks.size() != blocks.size()) throw std::logic_error("BlockMoments size mismatch");
  for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i].merge(o.blocks[i]);
}

Moments BlockMoments::pooled() const {
  Moments all;
  for (const auto& b : blocks) all.merge(b);
  return all;
}

double BlockMoments::median_of_means() const {
  std::vector<double> means;
  for (const auto& b : blocks)
    if (b.count > 0) means.push_back(b.mean);
  if (means.empty()) return 0.0;
  std::sort(means.begin(), means.end());
  const std::size_t k = means.size();
  return k % 2 == 1 ? means[k / 2] : 0.5 * (means[k / 2 - 1] + means[k / 2]);
}

double BlockMoments::median_of_means_stderr() const {
  Moments of_means;
  for (const auto& b : blocks)
    if (b.count > 0) of_means.add(b.mean);
  if (of_means.count < 2) return 0.0;
  return std::sqrt(std::numbers::pi / 2.0) * of_means.stderr_mean();
}

OlsFit ols(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("ols: size mismatch");
  OlsFit fit;
  fit.points = x.size();
  if (x.size() < 2) return fit;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) return fit;
  fit.defined = true;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

double ks_statistic(std::vector<double>& samples, const std::function<double(double)>& cdf,
                    const std::function<double(double)>& cdf_left) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < samples.size()) {
    std::size_t k = i;
    while (k < samples.size() && samples[k] == samples[i]) ++k;
    const double x = samples[i];
    const double below = cdf_left ? cdf_left(x) : cdf(x);
    d = std::max({d, std::abs(cdf(x) - static_cast<double>(k) / n),
                  std::abs(below - static_cast<double>(i) / n)});
    i = k;
  }
  return d;
}

}  // namespace ccauction
