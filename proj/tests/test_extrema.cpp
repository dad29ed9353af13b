#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "doctest.h"
#include "msc3d/extrema.hpp"
#include "msc3d/gradient.hpp"
#include "msc3d/grid.hpp"
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

// Serial root chase, the oracle for find_roots.
std::uint32_t chase(const ParentForest& f, std::uint32_t i) {
    std::uint32_t steps = 0;
    while (f.parent[i] != i) {
        i = f.parent[i];
        REQUIRE(++steps <= f.parent.size());  // acyclicity guard
    }
    return i;
}

std::map<std::pair<CellIndex, CellIndex>, std::uint32_t> as_map(
    const std::vector<SaddleExtremumArc>& arcs) {
    std::map<std::pair<CellIndex, CellIndex>, std::uint32_t> m;
    for (const SaddleExtremumArc& a : arcs) m[{a.saddle, a.extremum}] += a.multiplicity;
    return m;
}

}  // namespace

TEST_CASE("dense d-cell indexing round-trips") {
    const GridDims d(3, 4, 5);
    for (int dim : {0, 3}) {
        const std::uint64_t n = dense_cell_count(d, dim);
        for (std::uint32_t i = 0; i < n; ++i) {
            const CellIndex c = dense_to_cell(d, dim, i);
            CHECK(cell_dimension(d, c) == dim);
            CHECK(cell_to_dense(d, dim, c) == i);
        }
    }
    CHECK(dense_cell_count(d, 0) == 60);
    CHECK(dense_cell_count(d, 3) == 24);
}

TEST_CASE("vertex forest on a ramp: everything drains to the one minimum") {
    const GridDims d(5, 2, 2);
    const GradientField g = assign_gradient(ramp_field(d));
    const ParentForest f = build_forest(g, 0);
    const RootLabels r = find_roots(f);
    for (std::uint32_t i = 0; i < d.vertex_count(); ++i) CHECK(r.label[i] == 0);
    CHECK(f.parent[0] == 0);  // the minimum is its own root
}

TEST_CASE("forest roots are exactly the allowed cells") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const GradientField g = assign_gradient(oracle::random_field(GridDims(8, 8, 8), seed));

        const ParentForest f0 = build_forest(g, 0);
        for (std::uint32_t i = 0; i < f0.parent.size(); ++i) {
            const bool root = f0.parent[i] == i;
            CHECK(root == g.is_critical(dense_to_cell(g.dims, 0, i)));
        }

        const ParentForest f3 = build_forest(g, 3);
        for (std::uint32_t i = 0; i < f3.parent.size(); ++i) {
            const CellIndex c = dense_to_cell(g.dims, 3, i);
            const bool root = f3.parent[i] == i;
            const bool dead_end =
                !g.is_critical(c) && cofacets(g.dims, g.partner(c)).count == 1;
            CHECK(root == (g.is_critical(c) || dead_end));
        }
    }
}

TEST_CASE("find_roots: doubling rounds and serial-chase equality") {
    ParentForest chain;
    chain.dims = GridDims(2, 2, 2);  // dims unused by find_roots
    chain.dim = 0;
    chain.parent = {1, 2, 3, 4, 5, 5};
    const RootLabels r = find_roots(chain);
    CHECK(r.rounds == 3);  // ceil(log2(chain length 5))
    for (std::uint32_t l : r.label) CHECK(l == 5);

    ParentForest flat;
    flat.dims = chain.dims;
    flat.dim = 0;
    flat.parent = {0, 1, 2, 3};
    const RootLabels rf = find_roots(flat);
    CHECK(rf.rounds == 0);
    CHECK(rf.label == flat.parent);

    for (std::uint64_t seed : {21u, 22u}) {
        const GradientField g = assign_gradient(oracle::random_field(GridDims(7, 6, 5), seed));
        for (int dim : {0, 3}) {
            const ParentForest f = build_forest(g, dim);
            const RootLabels labels = find_roots(f);
            for (std::uint32_t i = 0; i < f.parent.size(); ++i)
                CHECK(labels.label[i] == chase(f, i));

            // Idempotence: resolved labels are their own fixpoint.
            ParentForest resolved;
            resolved.dims = f.dims;
            resolved.dim = f.dim;
            resolved.parent = labels.label;
            const RootLabels again = find_roots(resolved);
            CHECK(again.rounds == 0);
            CHECK(again.label == labels.label);
        }
    }
}

TEST_CASE("saddle-extremum arcs equal serial path walking") {
    for (GridDims d : {GridDims(8, 8, 8), GridDims(6, 5, 7)}) {
        for (std::uint64_t seed : {31u, 32u, 33u}) {
            CAPTURE(d.nx);
            CAPTURE(seed);
            const GradientField g = assign_gradient(oracle::random_field(d, seed));
            const RootLabels l0 = find_roots(build_forest(g, 0));
            const RootLabels l3 = find_roots(build_forest(g, 3));
            const std::vector<SaddleExtremumArc> arcs = saddle_extremum_arcs(g, l0, l3);

            CHECK(as_map(arcs) == oracle::arcs_by_walking(g));

            CHECK(std::is_sorted(arcs.begin(), arcs.end(),
                                 [](const SaddleExtremumArc& a, const SaddleExtremumArc& b) {
                                     return std::pair(a.saddle, a.extremum) <
                                            std::pair(b.saddle, b.extremum);
                                 }));
            for (std::size_t i = 1; i < arcs.size(); ++i)  // merged: no duplicate pairs
                CHECK(std::pair(arcs[i - 1].saddle, arcs[i - 1].extremum) !=
                      std::pair(arcs[i].saddle, arcs[i].extremum));

            std::map<CellIndex, std::uint32_t> per_saddle;
            for (const SaddleExtremumArc& a : arcs) {
                const int sdim = cell_dimension(d, a.saddle);
                const int edim = cell_dimension(d, a.extremum);
                CHECK(g.is_critical(a.saddle));
                CHECK(g.is_critical(a.extremum));
                CHECK((sdim == 1 || sdim == 2));
                CHECK(edim == (sdim == 1 ? 0 : 3));
                CHECK((a.multiplicity == 1 || a.multiplicity == 2));
                per_saddle[a.saddle] += a.multiplicity;
            }

            // Every 1-saddle descends twice; both walks always land on minima.
            for (const auto& [saddle, sum] : per_saddle)
                if (cell_dimension(d, saddle) == 1) CHECK(sum == 2);

            // 2-saddle ascent starts that reach a maximum, counted serially.
            for (CellIndex c = 0; c < d.total_cells(); ++c) {
                if (!g.is_critical(c) || cell_dimension(d, c) != 2) continue;
                std::uint32_t want = 0;
                const CellList cof = cofacets(d, c);
                for (int k = 0; k < cof.count; ++k)
                    want += oracle::walk_to_max(g, cof[k]) != oracle::kNoCell;
                const auto it = per_saddle.find(c);
                CHECK((it == per_saddle.end() ? 0u : it->second) == want);
            }
        }
    }
}

TEST_CASE("segmentation: extrema own themselves, labels are roots") {
    const GridDims d(8, 8, 8);
    const GradientField g = assign_gradient(oracle::random_field(d, 41));
    const RootLabels l0 = find_roots(build_forest(g, 0));
    const RootLabels l3 = find_roots(build_forest(g, 3));
    const Segmentation seg = extremum_segmentation(d, l0, l3);

    REQUIRE(seg.vertex_to_min.size() == d.vertex_count());
    REQUIRE(seg.cube_to_max.size() == d.cube_count());

    std::set<std::uint32_t> vroots, croots;
    for (std::uint32_t i = 0; i < seg.vertex_to_min.size(); ++i) {
        const std::uint32_t r = seg.vertex_to_min[i];
        CHECK(g.is_critical(dense_to_cell(d, 0, r)));  // minima only
        vroots.insert(r);
        if (g.is_critical(dense_to_cell(d, 0, i))) CHECK(r == i);  // minima label themselves
    }
    std::uint64_t dead_end_roots = 0;
    for (std::uint32_t i = 0; i < seg.cube_to_max.size(); ++i) {
        const std::uint32_t r = seg.cube_to_max[i];
        const CellIndex rc = dense_to_cell(d, 3, r);
        CHECK((g.is_critical(rc) || cofacets(d, g.partner(rc)).count == 1));
        croots.insert(r);
        if (g.is_critical(dense_to_cell(d, 3, i))) CHECK(r == i);  // maxima label themselves
    }
    const CriticalCells crit = extract_critical_cells(g);
    CHECK(vroots.size() == crit.by_dim[0].size());  // every minimum owns a region
    for (std::uint32_t r : croots)
        dead_end_roots += !g.is_critical(dense_to_cell(d, 3, r));
    CHECK(croots.size() == crit.by_dim[3].size() + dead_end_roots);
    for (CellIndex c : crit.by_dim[3])  // every maximum owns a region
        CHECK(croots.count(cell_to_dense(d, 3, c)) == 1);
}

TEST_CASE("segmentation of the 2x2x2 ramp: one region each way") {
    // The single cube pairs with a boundary quad, so its ascent dead-ends:
    // one cube region, zero maxima.
    const GridDims d(2, 2, 2);
    const GradientField g = assign_gradient(ramp_field(d));
    const RootLabels l0 = find_roots(build_forest(g, 0));
    const RootLabels l3 = find_roots(build_forest(g, 3));
    const Segmentation seg = extremum_segmentation(d, l0, l3);

    for (std::uint32_t l : seg.vertex_to_min) CHECK(l == 0);
    REQUIRE(seg.cube_to_max.size() == 1);
    CHECK(seg.cube_to_max[0] == 0);                       // its own dead-end root
    CHECK_FALSE(g.is_critical(dense_to_cell(d, 3, 0)));   // which is not a maximum
    CHECK(extract_critical_cells(g).by_dim[3].empty());
}

TEST_CASE("extrema pipeline is identical for every thread count") {
    const GradientField g = assign_gradient(oracle::random_field(GridDims(6, 7, 5), 51));
    const ParentForest f0a = build_forest(g, 0, 1), f0b = build_forest(g, 0, 5);
    const ParentForest f3a = build_forest(g, 3, 1), f3b = build_forest(g, 3, 5);
    CHECK(f0a.parent == f0b.parent);
    CHECK(f3a.parent == f3b.parent);
    const RootLabels l0a = find_roots(f0a, 1), l0b = find_roots(f0b, 4);
    const RootLabels l3a = find_roots(f3a, 1), l3b = find_roots(f3b, 4);
    CHECK(l0a.label == l0b.label);
    CHECK(l3a.label == l3b.label);
    CHECK(saddle_extremum_arcs(g, l0a, l3a, 1) == saddle_extremum_arcs(g, l0b, l3b, 6));
}
