#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lacuna {

// Worker count: explicit request, else LACUNA_THREADS, else hardware concurrency.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("LACUNA_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(i) for i in [0, n) on up to `threads` workers. Indices are handed out
// dynamically; callers write to disjoint preallocated slots.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    const int workers = static_cast<int>(std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1))));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto body = [&] {
        try {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
            next.store(n);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers - 1));
    for (int w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

// Splits [0, n) into `chunks` contiguous ranges and calls fn(chunk, begin, end).
template <class Fn>
void parallel_chunks(std::size_t n, std::size_t chunks, int threads, Fn&& fn) {
    chunks = std::max<std::size_t>(1, std::min(chunks, n));
    parallel_for(chunks, threads, [&](std::size_t c) {
        const std::size_t b = n * c / chunks;
        const std::size_t e = n * (c + 1) / chunks;
        fn(c, b, e);
    });
}

}  // namespace lacuna
