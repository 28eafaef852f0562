#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace ltsim {

// Run fn(i) for i in [0, count) on up to `threads` workers (0 = hardware
// count). Indices are dealt in fixed strides, every index runs exactly once,
// and workers never share output slots, so results are identical for any
// thread count as long as fn(i) writes only to position i.
inline void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    if (threads > count) threads = count < 1 ? 1 : count;

    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([=, &fn] {
            for (int i = w; i < count; i += threads) fn(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

} // namespace ltsim
