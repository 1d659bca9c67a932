#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace qmeter {

// Process-wide worker budget. 0 means "use hardware_concurrency".
inline std::atomic<unsigned>& max_threads_slot() {
    static std::atomic<unsigned> slot{0};
    return slot;
}

inline void set_max_threads(unsigned n) { max_threads_slot().store(n); }

inline unsigned effective_threads(std::size_t work_items) {
    unsigned budget = max_threads_slot().load();
    if (budget == 0) budget = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(budget, std::max<std::size_t>(work_items, 1)));
}

// Runs fn(lo, hi) over a partition of [0, n) into contiguous blocks, one
// per worker, so the result never depends on the thread count. fn may keep
// per-block scratch state; it must not touch indices outside its block.
template <typename Fn>
void parallel_for_blocks(std::size_t n, Fn&& fn) {
    if (n == 0) return;
    unsigned workers = effective_threads(n);
    if (workers <= 1) {
        fn(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = static_cast<std::size_t>(w) * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] { fn(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

// Runs fn(i) for i in [0, n), split the same way.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    parallel_for_blocks(n, [&fn](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
}

}
