// parallel.hpp — Deterministic index-range parallelism for grid evaluations

#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace spinprobe::par {

// Runs fn(i) for i in [0, n) across up to `threads` workers.  Each index is
// owned by exactly one worker and results must be written to index-owned
// slots, so output is identical for any thread count.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    threads = std::max(1, threads);
    const std::size_t workers = std::min<std::size_t>(threads, n ? n : 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace spinprobe::par
