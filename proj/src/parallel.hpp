#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace zener::detail {

// Splits [0, n) into `workers` contiguous chunks and runs fn(begin, end, w)
// on each. Results that workers write into per-worker buffers can then be
// merged in worker order, which keeps the outcome independent of scheduling.
template <typename Fn>
void parallel_chunks(std::size_t n, int workers, Fn&& fn)
{
    workers = std::max(1, workers);
    if (workers == 1 || n < 2 * static_cast<std::size_t>(workers)) {
        for (int w = 0; w < workers; ++w) {
            const std::size_t b = n * w / workers, e = n * (w + 1) / workers;
            fn(b, e, w);
        }
        return;
    }
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                fn(n * w / workers, n * (w + 1) / workers, w);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace zener::detail
