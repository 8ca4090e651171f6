#pragma once

#include <cstdint>
#include <functional>

namespace ghost {

/// Worker count: GHOST_OPTICS_THREADS if set (0 = auto), else hardware.
int worker_count();

/// Runs fn(block_index, begin, end) over [0, n) split into fixed-size
/// blocks. Block boundaries depend only on block_size, never on the number
/// of workers, so per-block results (and any in-order reduction over them)
/// are identical for every thread count.
void parallel_blocks(std::int64_t n, std::int64_t block_size,
                     const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& fn);

constexpr std::int64_t kDefaultBlock = 1024;

} // namespace ghost
