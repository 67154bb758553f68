// Deterministic fork-join helper: splits a row range into contiguous chunks,
// one per thread. Callers arrange that threads write disjoint rows, so the
// result is bit-identical for every thread count.

#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace bilip {

// Runs fn(row_begin, row_end) on `threads` contiguous chunks of [0, rows).
inline void parallel_rows(int threads, int rows,
                          const std::function<void(int, int)>& fn) {
    threads = std::max(1, std::min(threads, rows));
    if (threads == 1) {
        fn(0, rows);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    const int base = rows / threads;
    const int extra = rows % threads;
    int begin = 0;
    for (int t = 0; t < threads; ++t) {
        const int len = base + (t < extra ? 1 : 0);
        const int end = begin + len;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
        begin = end;
    }
    for (auto& th : pool) th.join();
}

}  // namespace bilip
