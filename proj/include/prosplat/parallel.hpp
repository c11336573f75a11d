// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace prosplat {

/// Worker cap: PROSPLAT_THREADS when set to a positive integer, otherwise the
/// hardware concurrency.
std::size_t worker_count();

namespace detail {
inline thread_local bool inside_parallel_region = false;
} // namespace detail

/// Runs body(i) for i in [0, n). Work is split into contiguous chunks, one per
/// worker; body must only write state owned by index i. The first exception
/// thrown by any worker is rethrown on the calling thread. Nested calls from a
/// worker run serially.
template <typename Body>
void parallel_for(std::size_t n, Body &&body) {
    const std::size_t workers = detail::inside_parallel_region ? 1 : std::min(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            detail::inside_parallel_region = true;
            try {
                for (std::size_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

} // namespace prosplat
