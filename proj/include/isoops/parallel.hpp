#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace isoops {

/// Worker count: hardware concurrency, capped by ISOOPS_THREADS when set.
inline unsigned thread_count()
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("ISOOPS_THREADS")) {
        try {
            long cap = std::stol(env);
            if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
        } catch (...) {
            // unparsable cap is ignored
        }
    }
    return n;
}

/// Runs fn(row) for row in [0, rows). Rows are split into contiguous blocks;
/// callers write disjoint outputs so the result does not depend on the schedule.
template <typename Fn>
void parallel_rows(std::size_t rows, Fn&& fn)
{
    const std::size_t workers = std::min<std::size_t>(thread_count(), rows);
    if (workers <= 1 || rows < 64) {
        for (std::size_t r = 0; r < rows; ++r) fn(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t block = (rows + workers - 1) / workers;
    for (std::size_t t = 0; t < workers; ++t) {
        const std::size_t begin = t * block;
        const std::size_t end = std::min(rows, begin + block);
        if (begin >= end) break;
        pool.emplace_back([begin, end, &fn] {
            for (std::size_t r = begin; r < end; ++r) fn(r);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace isoops
