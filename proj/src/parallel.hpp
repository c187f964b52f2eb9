#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace cpd {

inline unsigned default_thread_count() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1u : hc;
}

/// Runs fn(first, last) over a disjoint partition of [0, count).
/// The first exception thrown by any worker is rethrown on the caller.
template <typename Fn>
void parallel_chunks(std::size_t count, unsigned threads, Fn&& fn) {
    if (count == 0) return;
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    if (threads == 1) {
        fn(std::size_t{0}, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::atomic_flag error_claimed = ATOMIC_FLAG_INIT;
    const std::size_t base = count / threads;
    const std::size_t rem = count % threads;
    std::size_t first = 0;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t len = base + (t < rem ? 1 : 0);
        const std::size_t last = first + len;
        pool.emplace_back([&, first, last] {
            try {
                fn(first, last);
            } catch (...) {
                if (!error_claimed.test_and_set()) error = std::current_exception();
                failed.store(true);
            }
        });
        first = last;
    }
    for (auto& th : pool) th.join();
    if (failed.load() && error) std::rethrow_exception(error);
}

/// Runs fn(i) for i in [0, count) with dynamic scheduling; suited to items
/// of uneven cost (e.g. Monte Carlo repetitions of different methods).
template <typename Fn>
void parallel_items(std::size_t count, unsigned threads, Fn&& fn) {
    if (count == 0) return;
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::atomic_flag error_claimed = ATOMIC_FLAG_INIT;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            try {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= count || failed.load()) break;
                    fn(i);
                }
            } catch (...) {
                if (!error_claimed.test_and_set()) error = std::current_exception();
                failed.store(true);
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace cpd
