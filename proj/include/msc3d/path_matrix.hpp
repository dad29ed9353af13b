#pragma once

/*
 * Sparse nonnegative-integer matrices and the iterated-multiplication
 * path counter.
 *
 * The contracted saddle graph is loaded into four matrices: A (1-saddle
 * to junction), B (junction to junction), Bstar (junction to 2-saddle)
 * and D (direct 1-saddle to 2-saddle).  Repeatedly multiplying the
 * frontier A by B walks all junction chains simultaneously; summing the
 * frontiers gives Astar = A·(I + B + B² + …), which terminates because
 * the junction graph is acyclic (B is nilpotent).  Astar·Bstar + D is
 * then the full (1-saddle, 2-saddle) path-count table.
 *
 * Counts are exact 64-bit integers; any overflow throws instead of
 * wrapping, since path counts grow exponentially with grid size.
 */

#include <cstdint>
#include <vector>

#include "msc3d/saddle_graph.hpp"

namespace msc3d {

/** Compressed sparse rows of 64-bit counts.  Canonical form: columns
 *  strictly increasing within each row, no stored zeros. */
struct SparseCountMatrix {
    std::uint32_t rows = 0, cols = 0;
    std::vector<std::uint64_t> row_ptr;  // rows + 1 entries
    std::vector<std::uint32_t> col_idx;
    std::vector<std::uint64_t> count;

    std::uint64_t nnz() const { return col_idx.size(); }
    bool operator==(const SparseCountMatrix&) const = default;
};

/** Build a matrix from minor edges; duplicate (src, dst) pairs sum.
 *  Throws std::invalid_argument on out-of-range endpoints. */
SparseCountMatrix from_edges(const std::vector<MinorEdge>& edges, std::uint32_t rows,
                             std::uint32_t cols);

/** Integer matrix product.  Throws std::invalid_argument on dimension
 *  mismatch, std::overflow_error if any count leaves 64-bit range. */
SparseCountMatrix sp_multiply(const SparseCountMatrix& x, const SparseCountMatrix& y,
                              int threads = 0);

/** Entrywise sum, same error contract as sp_multiply. */
SparseCountMatrix sp_add(const SparseCountMatrix& x, const SparseCountMatrix& y,
                         int threads = 0);

struct SaddleConnection {
    CellIndex one_saddle = 0;
    CellIndex two_saddle = 0;
    std::uint64_t paths = 0;

    bool operator==(const SaddleConnection&) const = default;
};

/** All (1-saddle, 2-saddle) path counts of the minor, sorted by
 *  (one_saddle, two_saddle), zero-count pairs absent.  Throws
 *  std::runtime_error if the frontier outlives the junction count
 *  (non-nilpotent B: the minor was not acyclic). */
std::vector<SaddleConnection> count_paths(const DagMinor& minor, int threads = 0);

}  // namespace msc3d
