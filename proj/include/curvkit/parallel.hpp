#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace curvkit {

// Thread cap for element/vertex-parallel loops. Honors CURVKIT_THREADS when set.
inline int max_threads() {
    static const int cached = [] {
        int hw = static_cast<int>(std::thread::hardware_concurrency());
        if (hw <= 0) hw = 1;
        if (const char* env = std::getenv("CURVKIT_THREADS")) {
            int cap = std::atoi(env);
            if (cap >= 1) hw = std::min(hw, cap);
        }
        return hw;
    }();
    return cached;
}

// Runs fn(begin, end) over contiguous chunks of [0, n). Chunks are fixed by n alone,
// so any writer that fills per-index slots produces identical results for every
// thread count.
template <class F>
void parallel_for(int n, F&& fn) {
    if (n <= 0) return;
    int nt = std::min(max_threads(), n);
    if (nt <= 1) {
        fn(0, n);
        return;
    }
    int chunk = (n + nt - 1) / nt;
    std::vector<std::thread> workers;
    workers.reserve(static_cast<size_t>(nt));
    for (int t = 0; t < nt; ++t) {
        int begin = t * chunk;
        int end = std::min(n, begin + chunk);
        if (begin >= end) break;
        workers.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& w : workers) w.join();
}

}  // namespace curvkit
