#pragma once

#include "tvnet/common.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace tvnet {

/// Worker count from the TVNET_WORKERS environment variable, 1 if unset.
unsigned default_workers();

/// Run body(i) for i in [0, count) on up to `workers` threads. Work is handed
/// out by an atomic counter; bodies must only write to slots owned by i. If
/// several bodies throw, the exception from the smallest i is rethrown.
template <class Body>
void parallel_for(Index count, unsigned workers, Body&& body) {
    if (count <= 0) return;
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
    if (workers == 1) {
        for (Index i = 0; i < count; ++i) body(i);
        return;
    }

    std::atomic<Index> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    auto run = [&] {
        for (Index i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace tvnet
