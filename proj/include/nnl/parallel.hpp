#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace nnl {

/// Worker count for embarrassingly parallel loops. Controlled by the
/// NNL_THREADS environment variable; defaults to the hardware concurrency.
/// Results never depend on this value: parallel loops are partitioned by
/// index so every output slot is written by exactly one deterministic owner.
inline int worker_count() {
    if (const char* env = std::getenv("NNL_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs body(i) for i in [0, n) across worker_count() threads in contiguous
/// blocks. body must only write state owned by index i.
template <class Body>
void parallel_for(int n, Body&& body) {
    int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    int chunk = (n + workers - 1) / workers;
    for (int t = 0; t < workers; ++t) {
        int lo = t * chunk;
        int hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (int i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace nnl
