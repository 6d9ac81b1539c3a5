#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

#include "meixner/rmt.hpp"

namespace meixner::detail {

// Runs body(t) for t in [0, count) on up to `threads` workers in contiguous
// chunks. The body must only write to per-index storage.
template <class Body>
void parallel_for(int count, ExecutionPolicy policy, Body&& body) {
    unsigned threads = policy.threads ? policy.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(count, 1)));
    if (threads <= 1) {
        for (int t = 0; t < count; ++t) body(t);
        return;
    }
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(threads);
    const int chunk = (count + static_cast<int>(threads) - 1) / static_cast<int>(threads);
    for (unsigned w = 0; w < threads; ++w) {
        const int lo = static_cast<int>(w) * chunk;
        const int hi = std::min(count, lo + chunk);
        workers.emplace_back([&, w, lo, hi] {
            try {
                for (int t = lo; t < hi; ++t) body(t);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : workers) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace meixner::detail
