#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace covertlink::sim {

/// Worker cap: hardware threads, bounded by COVERTLINK_THREADS when set.
inline unsigned worker_count(long n_items) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("COVERTLINK_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && cap < static_cast<long>(n)) n = static_cast<unsigned>(cap);
    }
    if (n_items < static_cast<long>(n)) n = static_cast<unsigned>(n_items > 0 ? n_items : 1);
    return n;
}

/// Run f(0..n-1) across workers. Each index must write only to its own
/// output slot; aggregation stays with the caller so results do not depend
/// on scheduling.
template <class F>
void parallel_for(long n, F&& f) {
    const unsigned nw = worker_count(n);
    if (nw <= 1) {
        for (long i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (unsigned w = 0; w < nw; ++w) {
        pool.emplace_back([&] {
            for (long i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace covertlink::sim
