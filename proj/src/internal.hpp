#pragma once

#include <functional>

namespace iwsurv::detail {

/// Integral of sf over [t, infinity) for t > 0, via x = t e^s.
double survival_tail_integral(const std::function<double(double)>& sf, double t);

/// log(1 + e^x) without overflow.
double log1p_exp(double x);

void require_time(double t, const char* where);
void require_positive_time(double t, const char* where);
void require_probability(double q, const char* where);

} // namespace iwsurv::detail

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace iwsurv::detail {

inline unsigned resolve_threads(unsigned requested, std::size_t work) {
    unsigned t = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (work < t) t = static_cast<unsigned>(std::max<std::size_t>(work, 1));
    return t;
}

/// Evaluates fn(i) for i in [0, count) on up to `threads` workers and returns
/// the results in index order. The first exception thrown is rethrown.
template <class Fn>
auto parallel_map(std::size_t count, unsigned threads, Fn&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
    using Result = decltype(fn(std::size_t{}));
    std::vector<Result> results(count);
    const unsigned workers = resolve_threads(threads, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                results[i] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return results;
}

} // namespace iwsurv::detail
