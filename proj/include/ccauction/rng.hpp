#pragma once

#include <cstdint>

namespace ccauction {

/// Root seed plus a stream index. Every random quantity in the library is a
/// pure function of (root, stream, substream, draw index).
struct Seed {
  std::uint64_t root = 0;
  std::uint64_t stream = 0;

  /// A derived seed for an independent sub-experiment (e.g. one ell of the
  /// q estimator, or the tie-break stream of a mechanism batch).
  [[nodiscard]] Seed child(std::uint64_t tag) const noexcept;

  friend bool operator==(const Seed&, const Seed&) = default;
};

/// SplitMix64 finalizer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: draw k of substream s is mix64(key(s) + k*gamma).
/// Random access by draw index makes results independent of how work is
/// split across threads.
class Rng {
 public:
  Rng(Seed seed, std::uint64_t substream = 0) noexcept;

  std::uint64_t next_u64() noexcept {
    counter_ += kGamma;
    return mix64(key_ + counter_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// Jump to an absolute draw index.
  void seek(std::uint64_t draw_index) noexcept { counter_ = draw_index * kGamma; }

  [[nodiscard]] std::uint64_t key() const noexcept { return key_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace ccauction
