#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace gm2 {

/// Worker count for grid scans: GM2_THREADS if set to a positive integer,
/// otherwise the hardware concurrency (at least 1).
[[nodiscard]] unsigned default_threads();

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
/// visited exactly once; callers write results into per-index slots so the
/// aggregate is independent of completion order. body must not throw.
template <class Body>
void parallel_for(std::size_t n, Body&& body, unsigned threads = default_threads())
{
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) body(i);
    };
    const unsigned count = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::vector<std::jthread> pool;
    pool.reserve(count - 1);
    for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
    worker();
}

}  // namespace gm2
