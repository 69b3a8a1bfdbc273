#include "ccauction/rng.hpp"

namespace ccauction {

Seed Seed::child(std::uint64_t tag) const noexcept {
  return Seed{root, mix64(stream ^ mix64(tag + 0x632be59bd9b4e019ULL))};
}

Rng::Rng(Seed seed, std::uint64_t substream) noexcept
    : key_(mix64(mix64(seed.root) ^ mix64(seed.stream + 0xd1b54a32d192ed03ULL) ^
                 mix64(substream * 0x8cb92ba72f3d8dd7ULL + 1))) {}

std::uint64_t Rng::below(std::uint64_t bound) noexcept {
  // Lemire's multiply-shift with rejection; unbiased.
  std::uint64_t x = next_u64();
  __uint128_t m = static_cast<__uint128_t>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = next_u64();
      m = static_cast<__uint128_t>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace ccauction
