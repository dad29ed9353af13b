#pragma once

/*
 * The saddle-connection DAG and its contraction.
 *
 * Nodes are 1-cells and 2-cells; from an edge e, each cofacet quad q
 * contributes the terminal 2-saddle q when q is critical, or the edge
 * paired with q when that edge differs from e.  Quads paired with cubes
 * lead nowhere.  The graph is acyclic because the gradient has no closed
 * V-paths, and out-degree is at most 4 (an edge has at most 4 cofacets).
 *
 * mark_reachable floods this graph from all 1-saddles at once: each
 * round expands the whole frontier into preallocated slots, compacts,
 * and claims unvisited cells.  build_minor then contracts every maximal
 * junction-free path into a single multiplicity-1 edge, merging parallel
 * results, which shrinks the graph to 1-saddles, junctions (out-degree
 * > 1) and 2-saddles while preserving path counts.
 */

#include <cstdint>
#include <vector>

#include "msc3d/gradient.hpp"
#include "msc3d/grid.hpp"

namespace msc3d {

struct DagSuccessor {
    enum Kind : std::uint8_t { kEdge, kTerminal2Saddle };
    Kind kind = kEdge;
    CellIndex cell = 0;

    bool operator==(const DagSuccessor&) const = default;
};

using SuccessorList = SmallList<DagSuccessor, 4>;

/** Successors of a 1-cell in the saddle-connection DAG, in cofacet order. */
SuccessorList successors(const GradientField& g, CellIndex e);

struct MarkedSubgraph {
    GridDims dims;
    std::vector<std::uint8_t> marked;    // per cell: reachable from some 1-saddle
    std::vector<CellIndex> one_saddles;  // the sources, ascending
    std::vector<CellIndex> two_saddles;  // discovered terminals, ascending
};

/** Multi-source frontier BFS over the DAG.  one_saddles must be critical
 *  1-cells; throws std::invalid_argument otherwise. */
MarkedSubgraph mark_reachable(const GradientField& g, const std::vector<CellIndex>& one_saddles,
                              int threads = 0);

struct MinorEdge {
    std::uint32_t src = 0;  // dense node id in the source class
    std::uint32_t dst = 0;  // dense node id in the destination class
    std::uint64_t multiplicity = 0;

    bool operator==(const MinorEdge&) const = default;
};

/** The contracted DAG: only 1-saddles, junctions and 2-saddles remain.
 *  Edges are per class pair, deduplicated, sorted by (src, dst), with
 *  multiplicity = number of contracted junction-free paths. */
struct DagMinor {
    std::vector<CellIndex> one_saddles;  // node ids 0..|1s|-1, ascending cells
    std::vector<CellIndex> junctions;    // node ids 0..|j|-1, ascending cells
    std::vector<CellIndex> two_saddles;  // node ids 0..|2s|-1, ascending cells
    std::vector<MinorEdge> s1_to_j, j_to_j, j_to_s2, s1_to_s2;
};

/** Contract all junction-free paths of the marked subgraph.  Throws
 *  std::runtime_error if a trace outlives the cell count (a cycle, i.e.
 *  an invalid gradient). */
DagMinor build_minor(const MarkedSubgraph& m, const GradientField& g, int threads = 0);

}  // namespace msc3d
