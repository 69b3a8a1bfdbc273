#include "ccauction/mechanisms.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ccauction {
namespace {

constexpr std::uint64_t kTieTag = 0x7469652d627265ULL;

MechanismOutcome empty_outcome(int n, int m) {
  MechanismOutcome o;
  o.allocation.assign(static_cast<std::size_t>(m), std::nullopt);
  o.payments.assign(static_cast<std::size_t>(n), 0.0);
  o.subsidies.assign(static_cast<std::size_t>(n), 0.0);
  return o;
}

void finish(MechanismOutcome& o) {
  o.revenue = std::accumulate(o.payments.begin(), o.payments.end(), 0.0) -
              std::accumulate(o.subsidies.begin(), o.subsidies.end(), 0.0);
}

int pick(const std::vector<int>& pool, Rng& tie) {
  if (pool.size() == 1) return pool.front();
  return pool[static_cast<std::size_t>(tie.below(pool.size()))];
}

bool has_T_elsewhere(std::span<const double> row, int j, double T) {
  for (int k = 0; k < static_cast<int>(row.size()); ++k)
    if (k != j && row[static_cast<std::size_t>(k)] == T) return true;
  return false;
}

// Shared by the Naive and Less-Naive auctions.
MechanismOutcome naive_allocation(const ValuationProfile& p, const AuctionParams& params, Rng& tie) {
  const int n = p.bidders(), m = p.items();
  const double T = params.T, low = params.low_price();
  auto o = empty_outcome(n, m);
  std::vector<int> pool;
  for (int j = 0; j < m; ++j) {
    pool.clear();
    for (int i = 0; i < n; ++i)
      if (p(i, j) == T) pool.push_back(i);
    double price = T;
    if (pool.empty()) {
      price = low;
      for (int i = 0; i < n; ++i)
        if (p(i, j) >= low && has_T_elsewhere(p.row(i), j, T)) pool.push_back(i);
    }
    if (pool.empty()) continue;
    const int w = pick(pool, tie);
    o.allocation[static_cast<std::size_t>(j)] = w;
    o.payments[static_cast<std::size_t>(w)] += price;
  }
  return o;
}

}  // namespace

ValuationProfile ValuationProfile::draw(int n, int m, const DistSpec& dist, Seed seed, std::uint64_t index) {
  if (n < 1 || m < 1) throw std::invalid_argument("ValuationProfile: n and m must be >= 1");
  Rng rng(seed, index);
  std::vector<double> v(static_cast<std::size_t>(n) * m);
  for (auto& x : v) x = dist.draw(rng);
  return {n, m, std::move(v), dist, seed, index};
}

ValuationProfile ValuationProfile::from_values(int n, int m, std::vector<double> values, const DistSpec& dist) {
  if (n < 1 || m < 1) throw std::invalid_argument("ValuationProfile: n and m must be >= 1");
  if (values.size() != static_cast<std::size_t>(n) * m)
    throw std::invalid_argument("ValuationProfile: expected " + std::to_string(n * m) + " values");
  for (double x : values)
    if (!(x >= 1.0) || x > dist.T()) throw std::invalid_argument("ValuationProfile: value outside the support");
  return {n, m, std::move(values), dist, Seed{}, 0};
}

ValuationProfile ValuationProfile::first_bidders(int k) const {
  if (k < 1 || k > n_) throw std::invalid_argument("first_bidders: k out of range");
  std::vector<double> v(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(k) * m_);
  return {k, m_, std::move(v), dist_, seed_, index_};
}

Rng ValuationProfile::tie_breaker() const noexcept { return Rng(seed_.child(kTieTag), index_); }

MechanismOutcome sell_separately(const ValuationProfile& p, double reserve, Rng& tie) {
  if (!(reserve >= 0.0)) throw std::invalid_argument("sell_separately: reserve must be >= 0");
  const int n = p.bidders(), m = p.items();
  auto o = empty_outcome(n, m);
  std::vector<int> top;
  for (int j = 0; j < m; ++j) {
    double best = -1.0, second = -1.0;
    top.clear();
    for (int i = 0; i < n; ++i) {
      const double v = p(i, j);
      if (v > best) {
        second = best;
        best = v;
        top.assign(1, i);
      } else if (v == best) {
        second = best;
        top.push_back(i);
      } else if (v > second) {
        second = v;
      }
    }
    if (best < reserve) continue;
    const int w = pick(top, tie);
    o.allocation[static_cast<std::size_t>(j)] = w;
    o.payments[static_cast<std::size_t>(w)] += std::max(reserve, second);
  }
  finish(o);
  return o;
}

MechanismOutcome naive_auction(const ValuationProfile& p, const AuctionParams& params, Rng& tie) {
  auto o = naive_allocation(p, params, tie);
  finish(o);
  return o;
}

MechanismOutcome less_naive_auction(const ValuationProfile& p, const AuctionParams& params, double a0,
                                    double b0, Rng& tie) {
  if (!(a0 > 0.0)) throw std::invalid_argument("less_naive_auction: a0 must be positive");
  auto o = naive_allocation(p, params, tie);
  const double T = params.T;
  const double subsidy = b0 / a0 * (T - params.low_price());
  for (int j = 0; j < p.items(); ++j) {
    const auto w = o.allocation[static_cast<std::size_t>(j)];
    if (!w || p(*w, j) != T) continue;
    const auto row = p.row(*w);
    for (int k = 0; k < j; ++k) {
      if (row[static_cast<std::size_t>(k)] == T) {
        o.subsidies[static_cast<std::size_t>(*w)] += subsidy;
        break;
      }
    }
  }
  finish(o);
  return o;
}

double menu_price(ItemSet H, ItemSet L, double a, double b, const AuctionParams& params) {
  if (H == 0) return 0.0;
  const double T = params.T, low = params.low_price();
  const int h = set_size(H);
  return b * set_size(L) * low + a * h * T - b * (T - low) * (h - 1);
}

MenuOption make_option(ItemSet H, ItemSet L, double a, double b, const AuctionParams& params) {
  if (H == 0) return {};
  return {H, L, menu_price(H, L, a, b, params)};
}

double menu_utility(std::span<const double> v, const MenuOption& o, double a, double b) {
  if (o.is_null()) return 0.0;
  double value = 0.0;
  for (int j = 0; j < static_cast<int>(v.size()); ++j) {
    if (contains(o.H, j)) value += a * v[static_cast<std::size_t>(j)];
    else if (contains(o.L, j)) value += b * v[static_cast<std::size_t>(j)];
  }
  return value - o.price;
}

int favorite_item(std::span<const double> v) noexcept {
  int best = 0;
  for (int j = 1; j < static_cast<int>(v.size()); ++j)
    if (v[static_cast<std::size_t>(j)] > v[static_cast<std::size_t>(best)]) best = j;
  return best;
}

MenuOption nsn_preferred_option(std::span<const double> v, double a, double b, const AuctionParams& params) {
  const double T = params.T, low = params.low_price();
  const int m = static_cast<int>(v.size());
  if (m > kMaxItems) throw std::invalid_argument("nsn_preferred_option: at most 64 items");
  const int star = favorite_item(v);
  ItemSet H = ItemSet{1} << star;
  ItemSet L = 0;
  bool has_T = false;
  for (int j = 0; j < m; ++j) {
    const double x = v[static_cast<std::size_t>(j)];
    if (x == T) {
      H |= ItemSet{1} << j;
      has_T = true;
    }
  }
  for (int j = 0; j < m; ++j)
    if (!contains(H, j) && v[static_cast<std::size_t>(j)] >= low) L |= ItemSet{1} << j;
  if (!has_T) {
    double sum_L = 0.0;
    for (int j = 0; j < m; ++j)
      if (contains(L, j)) sum_L += v[static_cast<std::size_t>(j)];
    if (a * v[static_cast<std::size_t>(star)] + b * sum_L < a * T + set_size(L) * b * low) return {};
  }
  return make_option(H, L, a, b, params);
}

NsnOutcome nsn_expost(const ValuationProfile& p, const InterimRates& r, const AuctionParams& params, Rng& tie) {
  const int n = p.bidders(), m = p.items();
  NsnOutcome out;
  out.outcome = empty_outcome(n, m);
  out.high.assign(static_cast<std::size_t>(n), 0);
  out.low.assign(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    const auto opt = nsn_preferred_option(p.row(i), r, params);
    out.high[static_cast<std::size_t>(i)] = opt.H;
    out.low[static_cast<std::size_t>(i)] = opt.L;
    out.outcome.payments[static_cast<std::size_t>(i)] = opt.price;
  }
  std::vector<int> pool;
  for (int j = 0; j < m; ++j) {
    pool.clear();
    for (int i = 0; i < n; ++i)
      if (contains(out.high[static_cast<std::size_t>(i)], j)) pool.push_back(i);
    if (pool.empty())
      for (int i = 0; i < n; ++i)
        if (contains(out.low[static_cast<std::size_t>(i)], j)) pool.push_back(i);
    if (!pool.empty()) out.outcome.allocation[static_cast<std::size_t>(j)] = pick(pool, tie);
  }
  finish(out.outcome);
  return out;
}

MechanismOutcome grand_bundle_spa(const ValuationProfile& p, Rng& tie) {
  const int n = p.bidders();
  if (n < 2) throw std::invalid_argument("grand_bundle_spa: needs n >= 2");
  auto o = empty_outcome(n, p.items());
  double best = -1.0, second = -1.0;
  std::vector<int> top;
  for (int i = 0; i < n; ++i) {
    const auto row = p.row(i);
    const double s = std::accumulate(row.begin(), row.end(), 0.0);
    if (s > best) {
      second = best;
      best = s;
      top.assign(1, i);
    } else if (s == best) {
      second = best;
      top.push_back(i);
    } else if (s > second) {
      second = s;
    }
  }
  const int w = pick(top, tie);
  for (auto& a : o.allocation) a = w;
  o.payments[static_cast<std::size_t>(w)] = second;
  finish(o);
  return o;
}

bool has_distinct_values(std::span<const double> v) noexcept {
  for (std::size_t j = 0; j < v.size(); ++j)
    for (std::size_t k = j + 1; k < v.size(); ++k)
      if (v[j] == v[k]) return false;
  return true;
}

KfaOutcome kfa(const ValuationProfile& p, Rng& tie) {
  const int n = p.bidders(), m = p.items();
  const double nm = static_cast<double>(n) * m;
  const double H = std::exp(nm);
  const double L = std::sqrt(nm);
  KfaOutcome out;
  out.outcome = empty_outcome(n, m);
  out.branch.assign(static_cast<std::size_t>(m), KfaBranch::Unsold);

  std::vector<int> fav(static_cast<std::size_t>(n), -1);  // -1: not in S
  for (int i = 0; i < n; ++i)
    if (has_distinct_values(p.row(i))) fav[static_cast<std::size_t>(i)] = favorite_item(p.row(i));

  std::vector<int> pool;
  for (int j = 0; j < m; ++j) {
    pool.clear();
    for (int i = 0; i < n; ++i)
      if (fav[static_cast<std::size_t>(i)] == j && std::log(p(i, j)) >= nm) pool.push_back(i);
    double price = H;
    KfaBranch branch = KfaBranch::High;
    if (pool.empty()) {
      price = L;
      branch = KfaBranch::Low;
      for (int i = 0; i < n; ++i) {
        const int f = fav[static_cast<std::size_t>(i)];
        if (f >= 0 && f != j && p(i, j) >= L) pool.push_back(i);
      }
    }
    if (pool.empty()) continue;
    const int w = pick(pool, tie);
    out.outcome.allocation[static_cast<std::size_t>(j)] = w;
    out.outcome.payments[static_cast<std::size_t>(w)] += price;
    out.branch[static_cast<std::size_t>(j)] = branch;
  }
  finish(out.outcome);
  return out;
}

}  // namespace ccauction
