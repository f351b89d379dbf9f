#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace membrane {

// Runs fn(i) for i in [0, n_items) across `workers` threads. Work units are
// claimed dynamically but each writes only its own slot, so outputs are
// identical for any worker count; callers then reduce in index order.
inline void run_sharded(size_t n_items, int workers, const std::function<void(size_t)>& fn) {
    if (workers <= 1 || n_items <= 1) {
        for (size_t i = 0; i < n_items; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= n_items || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = int(std::min<size_t>(size_t(workers), n_items));
    pool.reserve(size_t(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace membrane
