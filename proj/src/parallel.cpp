// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#include "prosplat/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace prosplat {

std::size_t worker_count() {
    std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("PROSPLAT_THREADS")) {
        std::size_t cap = 0;
        const char *end = env + std::strlen(env);
        auto [ptr, ec] = std::from_chars(env, end, cap);
        if (ec == std::errc() && ptr == end && cap > 0) return std::min(cap, hw);
    }
    return hw;
}

} // namespace prosplat
