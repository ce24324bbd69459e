#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace dephaselab {

/// Runs body(i) for i in [0, n) on up to `threads` workers with static
/// contiguous chunks. Each index must write only to its own output slot, so
/// results do not depend on the thread count. Chunks are ordered, so the
/// rethrown exception is the one from the lowest failing chunk.
template <typename Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
    const std::size_t workers =
        std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = n * w / workers;
            const std::size_t end = n * (w + 1) / workers;
            pool.emplace_back([&, w, begin, end] {
                for (std::size_t i = begin; i < end; ++i) {
                    try {
                        body(i);
                    } catch (...) {
                        errors[w] = std::current_exception();
                        return;
                    }
                }
            });
        }
    }
    for (std::size_t w = 0; w < workers; ++w) {
        if (errors[w]) std::rethrow_exception(errors[w]);
    }
}

}  // namespace dephaselab
