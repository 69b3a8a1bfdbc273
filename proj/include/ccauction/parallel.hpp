#pragma once

// Chunked Monte Carlo kernels. A batch of `total` independent work items is
// cut into fixed-size chunks; each chunk produces one accumulator and the
// accumulators are merged in chunk order. The chunk plan never depends on the
// thread count, so parallel and serial runs agree bit for bit.

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ccauction {

struct ChunkPlan {
  std::uint64_t total = 0;
  std::uint64_t chunk_size = 4096;

  [[nodiscard]] std::uint64_t chunks() const noexcept {
    return chunk_size == 0 ? 0 : (total + chunk_size - 1) / chunk_size;
  }
  [[nodiscard]] std::uint64_t begin(std::uint64_t c) const noexcept { return c * chunk_size; }
  [[nodiscard]] std::uint64_t end(std::uint64_t c) const noexcept {
    return std::min(total, (c + 1) * chunk_size);
  }
};

/// Sets the OpenMP worker count (no-op without OpenMP). threads <= 0 keeps
/// the runtime default.
inline void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

inline int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Reference implementation: chunks run one after another.
template <class Acc, class Kernel>
std::vector<Acc> map_chunks_serial(const ChunkPlan& plan, Kernel&& kernel) {
  std::vector<Acc> out;
  out.reserve(plan.chunks());
  for (std::uint64_t c = 0; c < plan.chunks(); ++c) {
    out.push_back(kernel(c, plan.begin(c), plan.end(c)));
  }
  return out;
}

/// OpenMP implementation: chunks are scheduled dynamically, results land in
/// their chunk slot.
template <class Acc, class Kernel>
std::vector<Acc> map_chunks(const ChunkPlan& plan, Kernel&& kernel) {
  const auto n = static_cast<std::int64_t>(plan.chunks());
  std::vector<Acc> out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t c = 0; c < n; ++c) {
    const auto cu = static_cast<std::uint64_t>(c);
    out[static_cast<std::size_t>(c)] = kernel(cu, plan.begin(cu), plan.end(cu));
  }
  return out;
}

template <class Acc>
Acc merge_in_order(std::vector<Acc> parts) {
  Acc total{};
  for (auto& p : parts) total.merge(p);
  return total;
}

template <class Acc, class Kernel>
Acc parallel_reduce(const ChunkPlan& plan, Kernel&& kernel) {
  return merge_in_order(map_chunks<Acc>(plan, std::forward<Kernel>(kernel)));
}

template <class Acc, class Kernel>
Acc serial_reduce(const ChunkPlan& plan, Kernel&& kernel) {
  return merge_in_order(map_chunks_serial<Acc>(plan, std::forward<Kernel>(kernel)));
}

}  // namespace ccauction
