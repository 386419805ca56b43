#ifndef POLYSEMI_PARALLEL_HPP
#define POLYSEMI_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace polysemi {

/// Worker count used by parallel_for. Defaults to POLYSEMI_THREADS if set,
/// else hardware concurrency (capped at 8).
inline int default_thread_count() {
    if (const char* env = std::getenv("POLYSEMI_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 8u));
}

inline std::atomic<int>& thread_count_slot() {
    static std::atomic<int> count{default_thread_count()};
    return count;
}

inline void set_thread_count(int n) { thread_count_slot().store(std::max(1, n)); }
inline int thread_count() { return thread_count_slot().load(); }

/// Static block partition of [0, n) over the worker pool. Each index is
/// processed exactly once and writes only to its own slot, so results do
/// not depend on the number of workers. The first worker exception is
/// rethrown on the calling thread after the pool drains.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const int workers = std::min<std::size_t>(thread_count(), n == 0 ? 1 : n);
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::atomic<bool> failed{false};
    const std::size_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::size_t lo = static_cast<std::size_t>(w) * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) {
                    if (failed.load(std::memory_order_relaxed)) return;
                    body(i);
                }
            } catch (...) {
                const std::scoped_lock lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace polysemi

#endif
