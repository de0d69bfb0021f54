#pragma once

#include <cstddef>
#include <span>
#include <thread>
#include <vector>

namespace shadowtree {

// Worker count: SHADOWTREE_THREADS when set (at most 256), else hardware concurrency.
int worker_count();

// Pairwise (tree) summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> values);

// Runs body(i) for i in [0, n) on up to `workers` threads with a static interleaved
// assignment. Callers write into slot i, so results never depend on scheduling.
template <class Body>
void parallel_for(std::size_t n, int workers, Body&& body) {
    if (workers < 1) workers = 1;
    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(w);
    for (std::size_t t = 0; t < w; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += w) body(i);
        });
    }
}

}  // namespace shadowtree
