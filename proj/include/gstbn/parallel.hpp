#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace gstbn {

// Upper bound on worker threads used by the library. 0 restores the default
// (hardware concurrency). Results never depend on this value.
void set_thread_count(unsigned threads) noexcept;
unsigned thread_count() noexcept;

// Calls fn(begin, end) over contiguous chunks of [0, n). If any chunk throws,
// the exception from the lowest-indexed failing chunk is rethrown.
template <typename Fn>
void parallel_for_chunks(std::size_t n, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(thread_count(), n);
    if (workers <= 1) {
        if (n > 0) fn(std::size_t{0}, n);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t step = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * step;
        const std::size_t end = std::min(n, begin + step);
        if (begin >= end) break;
        pool.emplace_back([&fn, &errors, w, begin, end] {
            try {
                fn(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    pool.clear();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace gstbn
