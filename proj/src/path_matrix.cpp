#include "msc3d/path_matrix.hpp"

#include <algorithm>
#include <span>
#include <stdexcept>
#include <utility>

#include "msc3d/primitives.hpp"

namespace msc3d {

namespace {

SparseCountMatrix empty_matrix(std::uint32_t rows, std::uint32_t cols) {
    SparseCountMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.row_ptr.assign(static_cast<std::size_t>(rows) + 1, 0);
    return m;
}

/** row_ptr from per-row entry counts (exclusive scan + total). */
void fill_row_ptr(SparseCountMatrix& m, const std::vector<std::uint64_t>& row_nnz, int threads) {
    const ScanResult<std::uint64_t> scan =
        prefix_sum<std::uint64_t>(std::span<const std::uint64_t>(row_nnz), threads);
    m.row_ptr.resize(static_cast<std::size_t>(m.rows) + 1);
    std::copy(scan.offsets.begin(), scan.offsets.end(), m.row_ptr.begin());
    m.row_ptr[m.rows] = scan.total;
    m.col_idx.resize(static_cast<std::size_t>(scan.total));
    m.count.resize(static_cast<std::size_t>(scan.total));
}

/** Accumulate row i of x·y into dense scratch; touched lists the columns
 *  holding a nonzero sum, unsorted.  Throws on 64-bit overflow. */
void accumulate_product_row(const SparseCountMatrix& x, const SparseCountMatrix& y, std::size_t i,
                            std::vector<std::uint64_t>& acc, std::vector<std::uint32_t>& touched) {
    for (std::uint64_t p = x.row_ptr[i]; p < x.row_ptr[i + 1]; ++p) {
        const std::uint32_t k = x.col_idx[p];
        const std::uint64_t a = x.count[p];
        for (std::uint64_t q = y.row_ptr[k]; q < y.row_ptr[k + 1]; ++q) {
            const std::uint32_t j = y.col_idx[q];
            std::uint64_t prod;
            if (__builtin_mul_overflow(a, y.count[q], &prod))
                throw std::overflow_error("sp_multiply: path count exceeds 64 bits");
            if (prod == 0) continue;
            if (acc[j] == 0) touched.push_back(j);
            if (__builtin_add_overflow(acc[j], prod, &acc[j]))
                throw std::overflow_error("sp_multiply: path count exceeds 64 bits");
        }
    }
}

/** Merge row i of x and y entrywise; emit(col, sum) in ascending column
 *  order, zero sums skipped.  Throws on 64-bit overflow. */
template <typename Emit>
void merge_sum_row(const SparseCountMatrix& x, const SparseCountMatrix& y, std::size_t i,
                   Emit&& emit) {
    std::uint64_t p = x.row_ptr[i], q = y.row_ptr[i];
    const std::uint64_t pe = x.row_ptr[i + 1], qe = y.row_ptr[i + 1];
    while (p < pe || q < qe) {
        std::uint32_t col;
        std::uint64_t sum;
        if (q >= qe || (p < pe && x.col_idx[p] < y.col_idx[q])) {
            col = x.col_idx[p];
            sum = x.count[p];
            ++p;
        } else if (p >= pe || y.col_idx[q] < x.col_idx[p]) {
            col = y.col_idx[q];
            sum = y.count[q];
            ++q;
        } else {
            col = x.col_idx[p];
            if (__builtin_add_overflow(x.count[p], y.count[q], &sum))
                throw std::overflow_error("sp_add: path count exceeds 64 bits");
            ++p;
            ++q;
        }
        if (sum != 0) emit(col, sum);
    }
}

}  // namespace

SparseCountMatrix from_edges(const std::vector<MinorEdge>& edges, std::uint32_t rows,
                             std::uint32_t cols) {
    for (const MinorEdge& e : edges)
        if (e.src >= rows || e.dst >= cols)
            throw std::invalid_argument("from_edges: edge endpoint out of range");

    std::vector<MinorEdge> sorted = edges;
    std::sort(sorted.begin(), sorted.end(), [](const MinorEdge& a, const MinorEdge& b) {
        return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });

    SparseCountMatrix m = empty_matrix(rows, cols);
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::uint64_t sum = 0;
        std::size_t j = i;
        for (; j < sorted.size() && sorted[j].src == sorted[i].src && sorted[j].dst == sorted[i].dst;
             ++j)
            if (__builtin_add_overflow(sum, sorted[j].multiplicity, &sum))
                throw std::overflow_error("from_edges: multiplicity sum exceeds 64 bits");
        if (sum != 0) {
            m.col_idx.push_back(sorted[i].dst);
            m.count.push_back(sum);
            ++m.row_ptr[static_cast<std::size_t>(sorted[i].src) + 1];
        }
        i = j;
    }
    for (std::size_t r = 1; r <= rows; ++r) m.row_ptr[r] += m.row_ptr[r - 1];
    return m;
}

SparseCountMatrix sp_multiply(const SparseCountMatrix& x, const SparseCountMatrix& y, int threads) {
    if (x.cols != y.rows) throw std::invalid_argument("sp_multiply: inner dimensions differ");

    SparseCountMatrix z;
    z.rows = x.rows;
    z.cols = y.cols;

    // Pass 1: per-row result sizes, found by running the accumulation
    // into per-chunk scratch and counting the touched columns.
    std::vector<std::uint64_t> row_nnz(x.rows, 0);
    parallel_for_chunks(x.rows, threads, [&](std::size_t b, std::size_t e) {
        std::vector<std::uint64_t> acc(y.cols, 0);
        std::vector<std::uint32_t> touched;
        for (std::size_t i = b; i < e; ++i) {
            accumulate_product_row(x, y, i, acc, touched);
            row_nnz[i] = touched.size();
            for (const std::uint32_t j : touched) acc[j] = 0;
            touched.clear();
        }
    });
    fill_row_ptr(z, row_nnz, threads);

    // Pass 2: repeat the accumulation and write each row, columns sorted.
    parallel_for_chunks(x.rows, threads, [&](std::size_t b, std::size_t e) {
        std::vector<std::uint64_t> acc(y.cols, 0);
        std::vector<std::uint32_t> touched;
        for (std::size_t i = b; i < e; ++i) {
            accumulate_product_row(x, y, i, acc, touched);
            std::sort(touched.begin(), touched.end());
            std::uint64_t at = z.row_ptr[i];
            for (const std::uint32_t j : touched) {
                z.col_idx[at] = j;
                z.count[at] = acc[j];
                acc[j] = 0;
                ++at;
            }
            touched.clear();
        }
    });
    return z;
}

SparseCountMatrix sp_add(const SparseCountMatrix& x, const SparseCountMatrix& y, int threads) {
    if (x.rows != y.rows || x.cols != y.cols)
        throw std::invalid_argument("sp_add: dimensions differ");

    SparseCountMatrix z;
    z.rows = x.rows;
    z.cols = x.cols;

    std::vector<std::uint64_t> row_nnz(x.rows, 0);
    parallel_for_chunks(x.rows, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            std::uint64_t k = 0;
            merge_sum_row(x, y, i, [&](std::uint32_t, std::uint64_t) { ++k; });
            row_nnz[i] = k;
        }
    });
    fill_row_ptr(z, row_nnz, threads);

    parallel_for_chunks(x.rows, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            std::uint64_t at = z.row_ptr[i];
            merge_sum_row(x, y, i, [&](std::uint32_t col, std::uint64_t sum) {
                z.col_idx[at] = col;
                z.count[at] = sum;
                ++at;
            });
        }
    });
    return z;
}

std::vector<SaddleConnection> count_paths(const DagMinor& minor, int threads) {
    const std::uint32_t n1 = static_cast<std::uint32_t>(minor.one_saddles.size());
    const std::uint32_t nj = static_cast<std::uint32_t>(minor.junctions.size());
    const std::uint32_t n2 = static_cast<std::uint32_t>(minor.two_saddles.size());

    const SparseCountMatrix b = from_edges(minor.j_to_j, nj, nj);
    const SparseCountMatrix bstar = from_edges(minor.j_to_s2, nj, n2);
    SparseCountMatrix a = from_edges(minor.s1_to_j, n1, nj);
    SparseCountMatrix astar = empty_matrix(n1, nj);

    // astar accumulates a·(I + b + b² + …); the frontier a·bᵏ must die
    // out within |junctions| rounds because b is nilpotent on a DAG.
    std::uint64_t rounds = 0;
    while (a.nnz() != 0) {
        if (++rounds > static_cast<std::uint64_t>(nj) + 1)
            throw std::runtime_error("count_paths: junction graph has a cycle");
        SparseCountMatrix next = sp_multiply(a, b, threads);
        astar = sp_add(astar, a, threads);
        a = std::move(next);
    }

    const SparseCountMatrix total =
        sp_add(sp_multiply(astar, bstar, threads), from_edges(minor.s1_to_s2, n1, n2), threads);

    std::vector<SaddleConnection> out;
    out.reserve(static_cast<std::size_t>(total.nnz()));
    for (std::uint32_t i = 0; i < n1; ++i)
        for (std::uint64_t p = total.row_ptr[i]; p < total.row_ptr[i + 1]; ++p)
            out.push_back({minor.one_saddles[i], minor.two_saddles[total.col_idx[p]],
                           total.count[p]});
    return out;
}

}  // namespace msc3d
