#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace scatcrypt {

/// Worker cap: SCATTER_CRYPT_THREADS if set, hardware concurrency otherwise.
inline unsigned thread_cap() {
    if (const char* env = std::getenv("SCATTER_CRYPT_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1u;
}

/// Runs fn(begin, end) over a partition of [0, n) across threads.  Each index
/// is owned by exactly one worker and there are no cross-worker reductions,
/// so results are identical for any thread count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(std::max(1u, thread_cap()), n ? n : 1);
    if (workers <= 1 || n < 2) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : pool) t.join();
}

} // namespace scatcrypt
