#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace fplap::detail {

// Splits [0, n) into contiguous chunks, one per thread. fn(begin, end) must only write its chunk.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    const std::size_t t = static_cast<std::size_t>(std::max(1, threads));
    if (t == 1 || n < 2 * t) {
        fn(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + t - 1) / t;
    for (std::size_t b = 0; b < n; b += chunk) {
        pool.emplace_back([&fn, b, e = std::min(n, b + chunk)] { fn(b, e); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace fplap::detail
