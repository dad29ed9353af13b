#pragma once

/*
 * Discrete gradient field on the cubical complex.
 *
 * Every cell carries one byte describing its role in the pairing:
 * critical, paired with a facet (the partner is one step down in
 * dimension), or paired with a cofacet (one step up).  The direction is
 * encoded as axis + sign, so the partner id is recovered with one stride
 * add and no search.
 *
 * Pairs are built per vertex: each cell belongs to the lower star of its
 * maximal vertex, and the stars are processed independently (hence in
 * parallel, writes being owner-exclusive).  Within a star, cells are
 * expanded in simulated-simplicity order: the star's vertex pairs with
 * its lowest edge, then cells with exactly one unpaired face are paired
 * with that face, lowest first; when no such cell exists the lowest
 * remaining cell becomes critical and expansion resumes.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "msc3d/grid.hpp"

namespace msc3d {

namespace pair_code {
constexpr std::uint8_t kUnset = 0;
constexpr std::uint8_t kCritical = 1;
constexpr std::uint8_t kFacetBase = 2;    // 2..7:  paired with facet, axis*2 + (sign>0)
constexpr std::uint8_t kCofacetBase = 8;  // 8..13: paired with cofacet, axis*2 + (sign>0)

inline std::uint8_t with_facet(int axis, int sign) {
    return static_cast<std::uint8_t>(kFacetBase + axis * 2 + (sign > 0 ? 1 : 0));
}
inline std::uint8_t with_cofacet(int axis, int sign) {
    return static_cast<std::uint8_t>(kCofacetBase + axis * 2 + (sign > 0 ? 1 : 0));
}
}  // namespace pair_code

struct GradientField {
    GridDims dims;
    std::vector<std::uint8_t> code;  // one per cell, indexed by CellIndex

    bool is_critical(CellIndex c) const { return code[c] == pair_code::kCritical; }
    bool is_paired_with_facet(CellIndex c) const {
        return code[c] >= pair_code::kFacetBase && code[c] < pair_code::kCofacetBase;
    }
    bool is_paired_with_cofacet(CellIndex c) const { return code[c] >= pair_code::kCofacetBase; }

    /** Partner cell of a paired cell; meaningless for critical/unset codes. */
    CellIndex partner(CellIndex c) const {
        const std::uint8_t k = code[c];
        const int dir = (k - (k < pair_code::kCofacetBase ? pair_code::kFacetBase
                                                          : pair_code::kCofacetBase));
        const int axis = dir >> 1;
        const std::int64_t sign = (dir & 1) ? 1 : -1;
        const std::int64_t stride[3] = {1, dims.ex(), dims.ex() * dims.ey()};
        return static_cast<CellIndex>(static_cast<std::int64_t>(c) + sign * stride[axis]);
    }
};

/** Build the discrete gradient of a scalar field. */
GradientField assign_gradient(const ScalarField& f, int threads = 0);

/** Critical cells grouped by dimension, each list ascending by cell id. */
struct CriticalCells {
    std::vector<CellIndex> by_dim[4];

    std::int64_t euler() const {
        return static_cast<std::int64_t>(by_dim[0].size()) -
               static_cast<std::int64_t>(by_dim[1].size()) +
               static_cast<std::int64_t>(by_dim[2].size()) -
               static_cast<std::int64_t>(by_dim[3].size());
    }
};

CriticalCells extract_critical_cells(const GradientField& g, int threads = 0);

/** Structural audit of a gradient field. */
struct GradientReport {
    std::uint64_t matching_violations = 0;   // partner disagreements / malformed codes
    std::uint64_t cells_in_closed_vpath = 0; // 0 when the acyclicity check ran clean
    bool acyclicity_checked = false;         // only run for small grids
    bool degenerate = false;                 // no pairs at all (every cell critical)
    std::vector<CellIndex> samples;          // a few offending cells, for diagnostics

    bool ok() const { return matching_violations == 0 && cells_in_closed_vpath == 0; }
};

/** Check the matching property everywhere, and on grids of up to
 *  max_cells_for_cycles cells also search for closed V-paths. */
GradientReport validate_gradient(const GradientField& g,
                                 std::uint64_t max_cells_for_cycles = 100000);

}  // namespace msc3d
