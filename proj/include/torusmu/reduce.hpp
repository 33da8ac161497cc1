// include/torusmu/reduce.hpp
//
// Deterministic reductions. Terms are grouped into fixed chunks of
// kChunk consecutive indices; each chunk is summed left to right and the
// chunk sums are combined by a fixed midpoint-split binary tree. The result
// depends only on the term sequence, never on how chunks were distributed
// over workers.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace torusmu {

inline constexpr std::size_t kChunk = 1024;

template <class T>
T tree_sum(std::span<const T> parts) {
    if (parts.empty()) return T{};
    if (parts.size() == 1) return parts[0];
    std::size_t mid = parts.size() / 2;
    return tree_sum(parts.first(mid)) + tree_sum(parts.subspan(mid));
}

/// Number of workers to use when the caller passes 0.
inline unsigned default_workers() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs fn(unit) for unit in [0, units) on up to `workers` threads. The first
/// exception thrown by any unit is rethrown on the calling thread.
template <class Fn>
void parallel_units(std::size_t units, unsigned workers, Fn&& fn) {
    if (workers == 0) workers = default_workers();
    std::size_t nthreads = std::min<std::size_t>(workers, units);
    if (nthreads <= 1) {
        for (std::size_t u = 0; u < units; ++u) fn(u);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            std::size_t u = next.fetch_add(1);
            if (u >= units) return;
            try {
                fn(u);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(units);
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(body);
    pool.clear();
    if (error) std::rethrow_exception(error);
}

/// Σ_{i<count} term(i) with the fixed chunk/tree order.
///
/// `chunk_sum(begin, end)` must return the left-to-right sum of the terms in
/// [begin, end); it is called once per chunk, possibly concurrently, and
/// chunks are handed out in groups so each call site can amortise a cursor
/// set-up across `chunks_per_unit` consecutive chunks via `unit_fn`.
template <class T, class UnitFn>
T chunked_sum(std::size_t count, unsigned workers, std::size_t chunks_per_unit, UnitFn&& unit_fn) {
    std::size_t nchunks = (count + kChunk - 1) / kChunk;
    std::vector<T> sums(nchunks);
    std::size_t units = (nchunks + chunks_per_unit - 1) / chunks_per_unit;
    parallel_units(units, workers, [&](std::size_t u) {
        std::size_t c0 = u * chunks_per_unit;
        std::size_t c1 = std::min(nchunks, c0 + chunks_per_unit);
        unit_fn(c0 * kChunk, std::min(count, c1 * kChunk), std::span<T>(sums).subspan(c0, c1 - c0));
    });
    return tree_sum(std::span<const T>(sums));
}

/// Fills `out` (one slot per chunk of [begin, end)) with sequential chunk sums
/// of the terms produced in order by `next()`.
template <class T, class Next>
void fill_chunk_sums(std::size_t begin, std::size_t end, std::span<T> out, Next&& next) {
    std::size_t idx = 0;
    for (std::size_t c = begin; c < end; c += kChunk, ++idx) {
        std::size_t stop = std::min(end, c + kChunk);
        T acc{};
        for (std::size_t i = c; i < stop; ++i) acc += next();
        out[idx] = acc;
    }
}

}  // namespace torusmu
