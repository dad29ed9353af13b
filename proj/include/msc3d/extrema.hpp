#pragma once

/*
 * Saddle-extremum arcs and extrema segmentation.
 *
 * Gradient paths that end at extrema merge but never split, so the
 * per-cell "next step" relation is a forest: every vertex walks down
 * through its paired edge toward a minimum, every cube walks up through
 * its paired quad toward a maximum.  Arcs then reduce to root finding,
 * done in logarithmically many pointer-doubling rounds instead of one
 * walk per cell.
 *
 * Vertices always reach a minimum.  Cube walks can also stop early when
 * a cube is paired with a boundary quad (no opposite cube to continue
 * into); such cells root at a non-critical cube and yield no arc.
 */

#include <cstdint>
#include <vector>

#include "msc3d/gradient.hpp"
#include "msc3d/grid.hpp"

namespace msc3d {

/** Number of d-cells (d = 0 or 3) in their own dense x-fastest grid. */
std::uint64_t dense_cell_count(const GridDims& d, int dim);

/** Cell id of the i-th d-cell, d = 0 or 3. */
CellIndex dense_to_cell(const GridDims& d, int dim, std::uint32_t i);

/** Dense index of a d-cell, d = 0 or 3. */
std::uint32_t cell_to_dense(const GridDims& d, int dim, CellIndex c);

/** One parent link per d-cell; parent[i] == i exactly at roots. */
struct ParentForest {
    GridDims dims;
    int dim = 0;  // 0 or 3
    std::vector<std::uint32_t> parent;
};

/** Next-cell-toward-the-extremum forest for d = 0 (minima) or 3 (maxima). */
ParentForest build_forest(const GradientField& g, int dim, int threads = 0);

struct RootLabels {
    std::vector<std::uint32_t> label;  // dense index of each cell's root
    int rounds = 0;                    // doubling rounds that changed a label
};

/** Resolve every cell to its root by pointer doubling. */
RootLabels find_roots(const ParentForest& forest, int threads = 0);

struct SaddleExtremumArc {
    CellIndex saddle = 0;          // critical 1-cell or 2-cell
    CellIndex extremum = 0;        // critical 0-cell or 3-cell
    std::uint32_t multiplicity = 0;  // 1 or 2

    bool operator==(const SaddleExtremumArc&) const = default;
};

/** Arcs from every 1-saddle to its minima and every 2-saddle to its
 *  maxima, duplicates merged into multiplicity 2, sorted by
 *  (saddle, extremum).  Cube walks that stop at the boundary emit
 *  nothing. */
std::vector<SaddleExtremumArc> saddle_extremum_arcs(const GradientField& g,
                                                    const RootLabels& labels0,
                                                    const RootLabels& labels3,
                                                    int threads = 0);

/** Per-vertex and per-cube destination labels (dense root indices). */
struct Segmentation {
    GridDims dims;
    std::vector<std::uint32_t> vertex_to_min;  // nx*ny*nz entries
    std::vector<std::uint32_t> cube_to_max;    // (nx-1)(ny-1)(nz-1) entries
};

Segmentation extremum_segmentation(const GridDims& dims, const RootLabels& labels0,
                                   const RootLabels& labels3);

}  // namespace msc3d
