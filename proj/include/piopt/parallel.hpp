#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace piopt {

// Worker cap: piopt_set_threads / --threads / PIOPT_THREADS, else hardware.
int num_threads();
void set_num_threads(int n);  // n <= 0 resets to the default

// Splits [0, n) into contiguous chunks and runs f(begin, end) on each.
// Results must be merged by the caller in chunk order for determinism.
template <class F>
void parallel_chunks(std::size_t n, F&& f) {
    int workers = std::min<std::size_t>(num_threads(), n == 0 ? 1 : n);
    if (workers <= 1) {
        f(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        std::size_t b = std::min(n, w * chunk);
        std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&f, b, e] { f(b, e); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace piopt
