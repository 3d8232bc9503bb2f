#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sphcover {

namespace detail {
inline std::atomic<unsigned> thread_hint{0};
}  // namespace detail

/// Worker count used by parallel sections; 0 means hardware concurrency.
inline void set_thread_count(unsigned n) { detail::thread_hint.store(n); }

inline unsigned thread_count() {
    const unsigned hint = detail::thread_hint.load();
    if (hint > 0) return hint;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, count). Work is handed out dynamically, so
/// bodies must write only to per-index state for the result to be
/// independent of scheduling. The first exception thrown is rethrown.
template <typename Body>
void parallel_for(std::int64_t count, Body&& body) {
    if (count <= 0) return;
    const auto workers = static_cast<std::int64_t>(std::min<std::int64_t>(thread_count(), count));
    if (workers <= 1) {
        for (std::int64_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    const auto run = [&] {
        for (;;) {
            const std::int64_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(count);
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers - 1));
    for (std::int64_t t = 1; t < workers; ++t) pool.emplace_back(run);
    run();
    pool.clear();
    if (error) std::rethrow_exception(error);
}

}  // namespace sphcover
