#include "ghost/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace ghost {

int worker_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0)
        hw = 1;
    if (const char* env = std::getenv("GHOST_OPTICS_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0)
            return static_cast<int>(v);
        // 0 or malformed falls through to auto.
    }
    return hw;
}

void parallel_blocks(std::int64_t n, std::int64_t block_size,
                     const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& fn) {
    if (n <= 0)
        return;
    if (block_size <= 0)
        block_size = kDefaultBlock;
    const std::int64_t n_blocks = (n + block_size - 1) / block_size;
    const int workers = std::min<std::int64_t>(worker_count(), n_blocks);

    if (workers <= 1) {
        for (std::int64_t b = 0; b < n_blocks; ++b)
            fn(b, b * block_size, std::min(n, (b + 1) * block_size));
        return;
    }

    std::atomic<std::int64_t> next{0};
    auto drain = [&] {
        for (;;) {
            const std::int64_t b = next.fetch_add(1);
            if (b >= n_blocks)
                return;
            fn(b, b * block_size, std::min(n, (b + 1) * block_size));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers) - 1);
    for (int w = 1; w < workers; ++w)
        pool.emplace_back(drain);
    drain();
    for (auto& t : pool)
        t.join();
}

} // namespace ghost
