#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace repsim {

/// Run body(i) for i in [0, count) on up to `threads` workers.
///
/// Indices are handed out dynamically, so bodies must write only to
/// per-index output slots; under that rule results do not depend on the
/// worker count. The first exception thrown (lowest index wins) is rethrown.
template <class Body>
void parallel_for(std::size_t count, std::size_t threads, Body&& body) {
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    std::size_t error_index = count;

    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(threads - 1);
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    if (error) std::rethrow_exception(error);
}

/// Worker count from REPSIM_THREADS, or `fallback` when unset or malformed.
inline std::size_t threads_from_env(std::size_t fallback = 1) {
    const char* raw = std::getenv("REPSIM_THREADS");
    if (raw == nullptr || *raw == '\0') return fallback;
    try {
        std::size_t pos = 0;
        const unsigned long v = std::stoul(raw, &pos);
        if (pos != std::string(raw).size() || v == 0) return fallback;
        return static_cast<std::size_t>(v);
    } catch (...) {
        return fallback;
    }
}

} // namespace repsim
