#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <future>
#include <thread>
#include <vector>

namespace pwsym::detail {

/// out[i] = fn(i) for i in [0, n), split into contiguous chunks over the
/// available hardware threads. Results are independent of the thread count.
/// The first exception thrown by any chunk is rethrown after all finish.
template <typename R, typename Fn>
std::vector<R> parallel_map(std::size_t n, Fn&& fn) {
    std::vector<R> out(n);
    const std::size_t workers =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(n, 1));
    if (workers <= 1 || n < 4) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::future<void>> jobs;
    jobs.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            // Strided assignment balances the cost growth with the index.
            for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
        }));
    }
    std::exception_ptr first;
    for (auto& job : jobs) {
        try {
            job.get();
        } catch (...) {
            if (!first) first = std::current_exception();
        }
    }
    if (first) std::rethrow_exception(first);
    return out;
}

} // namespace pwsym::detail
