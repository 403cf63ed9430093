#pragma once

// Minimal deterministic parallel loop: static chunking over an index range,
// each index writing only its own output slot, so results are identical for
// any worker count.

#include <cstddef>
#include <thread>
#include <vector>

namespace waveheat {

template <class F>
inline void parallel_for(std::size_t count, int threads, const F& body) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace waveheat
