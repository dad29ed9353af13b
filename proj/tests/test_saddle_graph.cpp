#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "doctest.h"
#include "msc3d/gradient.hpp"
#include "msc3d/grid.hpp"
#include "msc3d/saddle_graph.hpp"
#include "oracles.hpp"

using namespace msc3d;

namespace {

ScalarField ramp_field(GridDims d) {
    std::vector<double> v(d.vertex_count());
    std::size_t i = 0;
    for (std::int64_t z = 0; z < d.nz; ++z)
        for (std::int64_t y = 0; y < d.ny; ++y)
            for (std::int64_t x = 0; x < d.nx; ++x)
                v[i++] = static_cast<double>(x + 2 * y + 4 * z);
    return ScalarField(d, std::move(v));
}

std::vector<CellIndex> one_saddles_of(const GradientField& g) {
    std::vector<CellIndex> out;
    for (CellIndex c = 0; c < g.dims.total_cells(); ++c)
        if (g.is_critical(c) && cell_dimension(g.dims, c) == 1) out.push_back(c);
    return out;
}

void set_pair(GradientField& g, CellCoord lo, CellCoord hi) {
    const int axis = lo.x != hi.x ? 0 : lo.y != hi.y ? 1 : 2;
    const int sign = (axis == 0 ? hi.x - lo.x : axis == 1 ? hi.y - lo.y : hi.z - lo.z);
    g.code[pack_cell(g.dims, lo)] = pair_code::with_cofacet(axis, sign);
    g.code[pack_cell(g.dims, hi)] = pair_code::with_facet(axis, -sign);
}

// A single straight V-path on the 2x2x2 complex:
//   1-saddle edge (1,0,0) -> quad (1,1,0) paired with edge (1,2,0)
//   -> critical quad (1,2,1).  The side quad (1,0,1) pairs with the
//   cube, so it contributes nothing.  Everything else is critical.
GradientField straight_path_field() {
    const GridDims d(2, 2, 2);
    GradientField g{d, std::vector<std::uint8_t>(d.total_cells(), pair_code::kCritical)};
    set_pair(g, {1, 2, 0}, {1, 1, 0});  // edge pulled up into the quad below it
    set_pair(g, {1, 0, 1}, {1, 1, 1});  // side quad consumed by the cube
    return g;
}

// Path counts through the minor, junction DP with edge multiplicities.
std::map<std::pair<CellIndex, CellIndex>, std::uint64_t> minor_counts(const DagMinor& m) {
    const std::size_t nj = m.junctions.size();
    std::vector<std::map<std::uint32_t, std::uint64_t>> from_j(nj);  // junction -> 2s counts
    std::vector<std::vector<std::pair<std::uint32_t, std::uint64_t>>> jj(nj), j2(nj);
    for (const MinorEdge& e : m.j_to_j) jj[e.src].push_back({e.dst, e.multiplicity});
    for (const MinorEdge& e : m.j_to_s2) j2[e.src].push_back({e.dst, e.multiplicity});

    std::vector<std::uint8_t> state(nj, 0);  // 0 new, 1 visiting, 2 done
    const auto resolve = [&](std::uint32_t start) {
        std::vector<std::pair<std::uint32_t, bool>> stack{{start, false}};
        while (!stack.empty()) {
            auto [j, expanded] = stack.back();
            stack.pop_back();
            if (state[j] == 2) continue;
            if (!expanded) {
                stack.push_back({j, true});
                for (const auto& [dst, mult] : jj[j])
                    if (state[dst] != 2) stack.push_back({dst, false});
                continue;
            }
            std::map<std::uint32_t, std::uint64_t> sum;
            for (const auto& [dst, mult] : j2[j]) sum[dst] += mult;
            for (const auto& [dst, mult] : jj[j])
                for (const auto& [t, n] : from_j[dst]) sum[t] += mult * n;
            from_j[j] = std::move(sum);
            state[j] = 2;
        }
    };
    for (std::uint32_t j = 0; j < nj; ++j) resolve(j);

    std::map<std::pair<CellIndex, CellIndex>, std::uint64_t> out;
    for (const MinorEdge& e : m.s1_to_s2)
        out[{m.one_saddles[e.src], m.two_saddles[e.dst]}] += e.multiplicity;
    for (const MinorEdge& e : m.s1_to_j)
        for (const auto& [t, n] : from_j[e.dst])
            out[{m.one_saddles[e.src], m.two_saddles[t]}] += e.multiplicity * n;
    return out;
}

}  // namespace

TEST_CASE("dag successors: classification and own-pair exclusion") {
    for (std::uint64_t seed : {61u, 62u}) {
        const GradientField g = assign_gradient(oracle::random_field(GridDims(8, 8, 8), seed));
        for (CellIndex e = 0; e < g.dims.total_cells(); ++e) {
            if (cell_dimension(g.dims, e) != 1) continue;
            const SuccessorList ss = successors(g, e);
            CHECK(ss.count <= 4);

            std::vector<std::pair<bool, CellIndex>> got;
            for (int k = 0; k < ss.count; ++k) {
                const DagSuccessor s = ss[k];
                got.push_back({s.kind == DagSuccessor::kTerminal2Saddle, s.cell});
                if (s.kind == DagSuccessor::kTerminal2Saddle) {
                    CHECK(g.is_critical(s.cell));
                    CHECK(cell_dimension(g.dims, s.cell) == 2);
                } else {
                    CHECK(s.cell != e);  // never continues back into itself
                    CHECK(cell_dimension(g.dims, s.cell) == 1);
                    CHECK(g.is_paired_with_cofacet(s.cell));
                }
            }
            CHECK(got == oracle::dag_successors(g, e));

            // The quad an edge is paired with never contributes.
            if (g.is_paired_with_cofacet(e)) {
                const CellIndex own = g.partner(e);
                for (int k = 0; k < ss.count; ++k) {
                    if (ss[k].kind == DagSuccessor::kTerminal2Saddle) CHECK(ss[k].cell != own);
                    else CHECK(g.partner(ss[k].cell) != own);
                }
            }
        }
    }
}

TEST_CASE("mark_reachable on a field with no 1-saddles") {
    const GradientField g = assign_gradient(ramp_field(GridDims(6, 4, 3)));
    const MarkedSubgraph m = mark_reachable(g, {});
    CHECK(std::count(m.marked.begin(), m.marked.end(), 1) == 0);
    CHECK(m.one_saddles.empty());
    CHECK(m.two_saddles.empty());
}

TEST_CASE("mark_reachable rejects non-saddle sources") {
    const GradientField g = assign_gradient(ramp_field(GridDims(2, 2, 2)));
    CHECK_THROWS_AS(mark_reachable(g, {pack_cell(g.dims, {0, 0, 0})}), std::invalid_argument);
    CHECK_THROWS_AS(mark_reachable(g, {pack_cell(g.dims, {1, 0, 0})}), std::invalid_argument);
}

TEST_CASE("a single straight V-path marks exactly its cells") {
    const GradientField g = straight_path_field();
    const GridDims d = g.dims;
    const CellIndex e0 = pack_cell(d, {1, 0, 0});

    const SuccessorList s0 = successors(g, e0);  // boundary edge: 1 EDGE, side quad consumed
    REQUIRE(s0.count == 1);
    CHECK(s0[0] == DagSuccessor{DagSuccessor::kEdge, pack_cell(d, {1, 2, 0})});
    const SuccessorList s1 = successors(g, pack_cell(d, {1, 2, 0}));
    REQUIRE(s1.count == 1);  // own pair excluded, terminal found
    CHECK(s1[0] == DagSuccessor{DagSuccessor::kTerminal2Saddle, pack_cell(d, {1, 2, 1})});

    const MarkedSubgraph m = mark_reachable(g, {e0});
    const std::set<CellIndex> want = {e0, pack_cell(d, {1, 1, 0}), pack_cell(d, {1, 2, 0}),
                                      pack_cell(d, {1, 2, 1})};
    for (CellIndex c = 0; c < d.total_cells(); ++c) CHECK(m.marked[c] == want.count(c));
    CHECK(m.one_saddles == std::vector<CellIndex>{e0});
    CHECK(m.two_saddles == std::vector<CellIndex>{pack_cell(d, {1, 2, 1})});

    const DagMinor minor = build_minor(m, g);
    CHECK(minor.junctions.empty());
    CHECK(minor.s1_to_j.empty());
    CHECK(minor.j_to_j.empty());
    CHECK(minor.j_to_s2.empty());
    REQUIRE(minor.s1_to_s2.size() == 1);
    CHECK(minor.s1_to_s2[0] == MinorEdge{0, 0, 1});
}

TEST_CASE("mark_reachable equals depth-first reachability") {
    for (GridDims d : {GridDims(8, 8, 8), GridDims(6, 7, 5)}) {
        for (std::uint64_t seed : {71u, 72u, 73u}) {
            CAPTURE(d.nx);
            CAPTURE(seed);
            const GradientField g = assign_gradient(oracle::random_field(d, seed));
            const std::vector<CellIndex> sources = one_saddles_of(g);
            const MarkedSubgraph m = mark_reachable(g, sources);

            const std::set<CellIndex> want = oracle::reach_by_dfs(g, sources);
            for (CellIndex c = 0; c < d.total_cells(); ++c)
                CHECK(m.marked[c] == (want.count(c) ? 1 : 0));

            CHECK(m.one_saddles == sources);  // every source is marked
            for (const CellIndex t : m.two_saddles) {
                CHECK(g.is_critical(t));
                CHECK(cell_dimension(d, t) == 2);
            }

            // Every marked non-source cell has a marked predecessor.
            std::set<CellIndex> has_pred;
            for (CellIndex e = 0; e < d.total_cells(); ++e) {
                if (!m.marked[e] || cell_dimension(d, e) != 1) continue;
                for (const auto& [terminal, c] : oracle::dag_successors(g, e)) {
                    has_pred.insert(c);
                    if (!terminal) has_pred.insert(g.partner(c));  // the traversed quad
                }
            }
            for (CellIndex c = 0; c < d.total_cells(); ++c) {
                if (!m.marked[c]) continue;
                const bool source = g.is_critical(c) && cell_dimension(d, c) == 1;
                if (!source) CHECK(has_pred.count(c) == 1);
            }
        }
    }
}

TEST_CASE("minor preserves path counts (junction DP vs exhaustive DFS)") {
    for (GridDims d : {GridDims(8, 8, 8), GridDims(10, 9, 8)}) {
        for (std::uint64_t seed : {81u, 82u, 83u}) {
            CAPTURE(d.nx);
            CAPTURE(seed);
            const GradientField g = assign_gradient(oracle::random_field(d, seed));
            const MarkedSubgraph m = mark_reachable(g, one_saddles_of(g));
            const DagMinor minor = build_minor(m, g);

            for (const CellIndex j : minor.junctions) {  // junctions split
                CHECK_FALSE(g.is_critical(j));
                CHECK(successors(g, j).count > 1);
            }
            for (const std::vector<MinorEdge>* edges :
                 {&minor.s1_to_j, &minor.j_to_j, &minor.j_to_s2, &minor.s1_to_s2}) {
                CHECK(std::is_sorted(edges->begin(), edges->end(),
                                     [](const MinorEdge& a, const MinorEdge& b) {
                                         return std::pair(a.src, a.dst) < std::pair(b.src, b.dst);
                                     }));
                for (const MinorEdge& e : *edges) CHECK(e.multiplicity >= 1);
            }

            CHECK(minor_counts(minor) == oracle::count_paths_by_dfs(g));
        }
    }
}

TEST_CASE("saddle graph outputs are identical for every thread count") {
    const GradientField g = assign_gradient(oracle::random_field(GridDims(7, 7, 7), 91));
    const std::vector<CellIndex> sources = one_saddles_of(g);
    const MarkedSubgraph m1 = mark_reachable(g, sources, 1);
    const MarkedSubgraph m8 = mark_reachable(g, sources, 8);
    CHECK(m1.marked == m8.marked);
    CHECK(m1.two_saddles == m8.two_saddles);
    const DagMinor a = build_minor(m1, g, 1);
    const DagMinor b = build_minor(m8, g, 8);
    CHECK(a.one_saddles == b.one_saddles);
    CHECK(a.junctions == b.junctions);
    CHECK(a.two_saddles == b.two_saddles);
    CHECK(a.s1_to_j == b.s1_to_j);
    CHECK(a.j_to_j == b.j_to_j);
    CHECK(a.j_to_s2 == b.j_to_s2);
    CHECK(a.s1_to_s2 == b.s1_to_s2);
}
