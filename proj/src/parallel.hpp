#pragma once

// Internal fan-out helper. Each index writes only its own slot, so results
// are identical for any worker count; exceptions are rethrown for the
// lowest failing index.

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace switchdiff::detail {

template <typename Fn>
void parallel_for(int n, int workers, Fn&& body) {
    if (workers < 1) workers = 1;
    if (workers == 1 || n <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    workers = std::min(workers, n);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    std::atomic<int> next{0};
    auto run = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace switchdiff::detail
