#pragma once

/*
 * The assembled Morse-Smale complex: critical points plus multiplicity
 * arcs between consecutive Morse indices, with provenance enough to
 * reproduce the run (grid dims, input hash, tie-break rule version).
 *
 * compute() is the whole pipeline: gradient assignment, critical cell
 * extraction, extremum root finding, saddle-graph reachability and
 * contraction, then matrix path counting.  Every stage is deterministic
 * for a fixed input, whatever the thread count, so the complex is too.
 */

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msc3d/grid.hpp"

namespace msc3d {

struct CriticalPoint {
    std::uint32_t id = 0;  // position in the (index, cell)-sorted list
    CellIndex cell = 0;
    int index = 0;                         // Morse index = cell dimension
    CellCoord doubled;                     // lattice coordinates
    std::array<double, 3> midpoint{};      // doubled / 2: real-space anchor
    double value = 0;                      // field value at the owning vertex

    bool operator==(const CriticalPoint&) const = default;
};

struct Arc {
    std::uint32_t src = 0;  // lower Morse index endpoint
    std::uint32_t dst = 0;  // Morse index of src plus one
    std::uint64_t multiplicity = 0;

    bool operator==(const Arc&) const = default;
};

/** Critical-point-id labels per vertex and per cube.  kNoLabel marks
 *  cubes whose ascent stops at the boundary instead of a maximum. */
struct LabelVolumes {
    static constexpr std::uint32_t kNoLabel = 0xffffffffu;
    std::vector<std::uint32_t> vertex_to_min;  // nx*ny*nz, x-fastest
    std::vector<std::uint32_t> cube_to_max;    // (nx-1)(ny-1)(nz-1), x-fastest

    bool operator==(const LabelVolumes&) const = default;
};

struct MSComplex {
    GridDims dims;
    std::string dtype = "f64";  // sample type of the source volume
    std::uint64_t input_hash = 0;
    std::string tie_break = "vertex-index-v1";
    std::vector<CriticalPoint> critical_points;  // sorted by (index, cell)
    std::vector<Arc> arcs;                       // sorted by (src, dst)
    std::optional<LabelVolumes> labels;          // only when requested

    std::uint64_t count_by_index(int index) const;
    std::int64_t euler() const;  // c0 - c1 + c2 - c3

    bool operator==(const MSComplex&) const = default;
};

/** Wall-clock seconds per pipeline stage. */
struct StageTimings {
    double gradient = 0;      // pair assignment (plus audit when requested)
    double critical = 0;      // critical cell extraction
    double extrema = 0;       // forests, roots, saddle-extremum arcs
    double reachability = 0;  // saddle-graph marking and contraction
    double counting = 0;      // matrix path counting
};

struct ComputeOptions {
    int threads = 0;                 // 0: hardware default
    bool with_segmentation = false;  // fill MSComplex::labels
    bool validate = false;           // audit the gradient, throw if broken
    std::string source_dtype = "f64";
    StageTimings* timings = nullptr;  // filled when non-null
};

/** Run the full pipeline.  Throws std::runtime_error when validation is
 *  requested and fails; propagates overflow errors from path counting. */
MSComplex compute(const ScalarField& f, const ComputeOptions& opt = {});

/** 64-bit FNV-1a over the little-endian bytes of the widened samples. */
std::uint64_t field_hash(const ScalarField& f);

/** Mod-2 consistency of two-step arc multiplicities: over every middle
 *  saddle, paths from a 2-saddle down to a minimum and from a maximum
 *  down to a 1-saddle must pair up.  odd_pairs lists the (2-saddle,
 *  minimum) and (maximum, 1-saddle) id pairs where they do not. */
struct BoundaryReport {
    std::vector<std::array<std::uint32_t, 2>> odd_pairs;
    bool ok() const { return odd_pairs.empty(); }
};

BoundaryReport boundary_check(const MSComplex& m);

/** Arcs with cp_id as either endpoint, sorted by (src, dst).  Throws
 *  std::out_of_range for an id the complex does not contain. */
std::vector<Arc> query_arcs(const MSComplex& m, std::uint32_t cp_id);

}  // namespace msc3d
