#pragma once

/*
 * Deterministic data-parallel building blocks.  Every routine here is a
 * pure function of its input: results are bit-identical whatever the
 * thread count, because work is split into fixed chunks whose partial
 * results are combined in index order.
 */

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

namespace msc3d {

/** Resolve a requested thread count: 0 means "use the hardware". */
inline int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

/** Run fn(begin, end) over [0, n) split into contiguous chunks, one per
 *  worker.  Writers must own disjoint output ranges; the split depends
 *  only on n and the resolved thread count. */
void parallel_for_chunks(std::size_t n, int threads,
                         const std::function<void(std::size_t, std::size_t)>& fn);

template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    parallel_for_chunks(n, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) fn(i);
    });
}

template <typename T>
struct ScanResult {
    std::vector<T> offsets;  // exclusive prefix sums, same length as input
    T total = 0;
};

/** Exclusive prefix sum of nonnegative integers.  Chunked two-pass scan;
 *  throws std::overflow_error if the running sum leaves T's range. */
template <typename T>
ScanResult<T> prefix_sum(std::span<const T> in, int threads = 0) {
    static_assert(std::is_unsigned_v<T>, "prefix_sum expects an unsigned integer type");
    const std::size_t n = in.size();
    ScanResult<T> r;
    r.offsets.resize(n);
    if (n == 0) return r;

    const int workers = resolve_threads(threads);
    const std::size_t chunk = (n + static_cast<std::size_t>(workers) - 1) /
                              static_cast<std::size_t>(workers);
    const std::size_t nchunks = (n + chunk - 1) / chunk;

    // Pass 1: local exclusive scans, recording each chunk's total.
    std::vector<T> chunk_total(nchunks, 0);
    std::vector<bool> chunk_overflow(nchunks, false);
    parallel_for_chunks(nchunks, workers, [&](std::size_t cb, std::size_t ce) {
        for (std::size_t c = cb; c < ce; ++c) {
            const std::size_t lo = c * chunk, hi = std::min(n, lo + chunk);
            T acc = 0;
            for (std::size_t i = lo; i < hi; ++i) {
                r.offsets[i] = acc;
                if (__builtin_add_overflow(acc, in[i], &acc)) {
                    chunk_overflow[c] = true;
                    return;
                }
            }
            chunk_total[c] = acc;
        }
    });
    for (std::size_t c = 0; c < nchunks; ++c)
        if (chunk_overflow[c]) throw std::overflow_error("prefix_sum: accumulator overflow");

    // Serial scan over the (few) chunk totals.
    std::vector<T> base(nchunks, 0);
    T acc = 0;
    for (std::size_t c = 0; c < nchunks; ++c) {
        base[c] = acc;
        if (__builtin_add_overflow(acc, chunk_total[c], &acc))
            throw std::overflow_error("prefix_sum: accumulator overflow");
    }
    r.total = acc;

    // Pass 2: add each chunk's base offset.
    parallel_for_chunks(nchunks, workers, [&](std::size_t cb, std::size_t ce) {
        for (std::size_t c = cb; c < ce; ++c) {
            const T b = base[c];
            if (b == 0) continue;
            const std::size_t lo = c * chunk, hi = std::min(n, lo + chunk);
            bool bad = false;
            for (std::size_t i = lo; i < hi; ++i)
                if (__builtin_add_overflow(r.offsets[i], b, &r.offsets[i])) bad = true;
            if (bad) chunk_overflow[c] = true;
        }
    });
    for (std::size_t c = 0; c < nchunks; ++c)
        if (chunk_overflow[c]) throw std::overflow_error("prefix_sum: accumulator overflow");
    return r;
}

/** Stable compaction: keep elements satisfying pred, in input order.
 *  Flags + chunk counts + scan + scatter, so the result is identical to
 *  the serial filter for any thread count. */
template <typename T, typename Pred>
std::vector<T> stream_compact(std::span<const T> in, Pred&& pred, int threads = 0) {
    const std::size_t n = in.size();
    const int workers = resolve_threads(threads);
    if (n == 0) return {};

    const std::size_t chunk = (n + static_cast<std::size_t>(workers) - 1) /
                              static_cast<std::size_t>(workers);
    const std::size_t nchunks = (n + chunk - 1) / chunk;

    std::vector<std::uint64_t> counts(nchunks, 0);
    parallel_for_chunks(nchunks, workers, [&](std::size_t cb, std::size_t ce) {
        for (std::size_t c = cb; c < ce; ++c) {
            const std::size_t lo = c * chunk, hi = std::min(n, lo + chunk);
            std::uint64_t k = 0;
            for (std::size_t i = lo; i < hi; ++i)
                if (pred(in[i])) ++k;
            counts[c] = k;
        }
    });

    const ScanResult<std::uint64_t> scan = prefix_sum<std::uint64_t>(counts, 1);
    std::vector<T> out(static_cast<std::size_t>(scan.total));
    parallel_for_chunks(nchunks, workers, [&](std::size_t cb, std::size_t ce) {
        for (std::size_t c = cb; c < ce; ++c) {
            const std::size_t lo = c * chunk, hi = std::min(n, lo + chunk);
            std::size_t at = static_cast<std::size_t>(scan.offsets[c]);
            for (std::size_t i = lo; i < hi; ++i)
                if (pred(in[i])) out[at++] = in[i];
        }
    });
    return out;
}

/** Indices i in [0, n) with pred(i), ascending; the compacted form of an
 *  indicator array without materializing it. */
template <typename Pred>
std::vector<std::uint32_t> stream_compact_indices(std::uint64_t n, Pred&& pred, int threads = 0) {
    const int workers = resolve_threads(threads);
    if (n == 0) return {};

    const std::uint64_t chunk =
        (n + static_cast<std::uint64_t>(workers) - 1) / static_cast<std::uint64_t>(workers);
    const std::uint64_t nchunks = (n + chunk - 1) / chunk;

    std::vector<std::uint64_t> counts(nchunks, 0);
    parallel_for_chunks(static_cast<std::size_t>(nchunks), workers,
                        [&](std::size_t cb, std::size_t ce) {
                            for (std::size_t c = cb; c < ce; ++c) {
                                const std::uint64_t lo = c * chunk,
                                                    hi = std::min<std::uint64_t>(n, lo + chunk);
                                std::uint64_t k = 0;
                                for (std::uint64_t i = lo; i < hi; ++i)
                                    if (pred(i)) ++k;
                                counts[c] = k;
                            }
                        });

    const ScanResult<std::uint64_t> scan = prefix_sum<std::uint64_t>(counts, 1);
    std::vector<std::uint32_t> out(static_cast<std::size_t>(scan.total));
    parallel_for_chunks(static_cast<std::size_t>(nchunks), workers,
                        [&](std::size_t cb, std::size_t ce) {
                            for (std::size_t c = cb; c < ce; ++c) {
                                const std::uint64_t lo = c * chunk,
                                                    hi = std::min<std::uint64_t>(n, lo + chunk);
                                std::size_t at = static_cast<std::size_t>(scan.offsets[c]);
                                for (std::uint64_t i = lo; i < hi; ++i)
                                    if (pred(i)) out[at++] = static_cast<std::uint32_t>(i);
                            }
                        });
    return out;
}

}  // namespace msc3d
