#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hqcalc {

namespace detail {
inline thread_local unsigned worker_limit = 0; // 0: no limit on this thread
inline thread_local bool in_parallel_region = false;
} // namespace detail

/// Worker count: HQCALC_THREADS when set (>= 1), else the hardware count,
/// capped by an active ScopedWorkerLimit.
inline unsigned worker_count() {
    unsigned n = 0;
    if (const char* env = std::getenv("HQCALC_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) n = static_cast<unsigned>(v);
    }
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    if (detail::worker_limit > 0) n = std::min(n, detail::worker_limit);
    return n;
}

/// Caps parallel_for on the current thread while alive.
class ScopedWorkerLimit {
public:
    explicit ScopedWorkerLimit(unsigned n) : saved_(detail::worker_limit) { detail::worker_limit = n; }
    ~ScopedWorkerLimit() { detail::worker_limit = saved_; }
    ScopedWorkerLimit(const ScopedWorkerLimit&) = delete;
    ScopedWorkerLimit& operator=(const ScopedWorkerLimit&) = delete;

private:
    unsigned saved_;
};

/// Calls fn(i) for i in [0, count) on up to worker_count() threads.
/// Results must be written to per-index slots; the first exception is rethrown.
/// Nested calls run serially on the calling worker.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const unsigned workers =
        detail::in_parallel_region ? 1u : static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            detail::in_parallel_region = true;
            for (std::size_t i = w; i < count; i += workers) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    pool.clear();
    if (error) std::rethrow_exception(error);
}

} // namespace hqcalc
