#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace dcstop {

inline std::size_t default_thread_count() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

/// Static-chunked parallel loop over [0, n). Chunks write disjoint outputs,
/// so results are bitwise independent of the thread count. The first
/// exception thrown by any chunk is rethrown on the caller's thread.
inline void parallel_for_chunks(std::size_t n,
                                const std::function<void(std::size_t, std::size_t)>& body,
                                std::size_t threads = default_thread_count()) {
    if (n == 0) return;
    threads = std::min(threads, n);
    if (threads <= 1) {
        body(0, n);
        return;
    }
    const std::size_t chunk = (n + threads - 1) / threads;
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (std::size_t t = 1; t < threads; ++t) {
        const std::size_t b = t * chunk;
        const std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&body, &errors, t, b, e] {
            try {
                body(b, e);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    try {
        body(0, std::min(chunk, n));
    } catch (...) {
        errors[0] = std::current_exception();
    }
    for (auto& th : pool) th.join();
    for (const auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
}

} // namespace dcstop
