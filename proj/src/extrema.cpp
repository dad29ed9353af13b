#include "msc3d/extrema.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

#include "msc3d/primitives.hpp"

namespace msc3d {

std::uint64_t dense_cell_count(const GridDims& d, int dim) {
    if (dim == 0) return d.vertex_count();
    if (dim == 3) return d.cube_count();
    throw std::invalid_argument("dense_cell_count: dim must be 0 or 3");
}

CellIndex dense_to_cell(const GridDims& d, int dim, std::uint32_t i) {
    if (dim == 0) {
        const std::int64_t x = i % d.nx, y = (i / d.nx) % d.ny, z = i / (d.nx * d.ny);
        return pack_cell(d, {static_cast<std::int32_t>(2 * x), static_cast<std::int32_t>(2 * y),
                             static_cast<std::int32_t>(2 * z)});
    }
    const std::int64_t mx = d.nx - 1, my = d.ny - 1;
    const std::int64_t x = i % mx, y = (i / mx) % my, z = i / (mx * my);
    return pack_cell(d, {static_cast<std::int32_t>(2 * x + 1), static_cast<std::int32_t>(2 * y + 1),
                         static_cast<std::int32_t>(2 * z + 1)});
}

std::uint32_t cell_to_dense(const GridDims& d, int dim, CellIndex c) {
    const CellCoord cc = unpack_cell(d, c);
    if (dim == 0)
        return static_cast<std::uint32_t>(cc.x / 2 + d.nx * (cc.y / 2 + d.ny * (cc.z / 2)));
    return static_cast<std::uint32_t>(cc.x / 2 +
                                      (d.nx - 1) * (cc.y / 2 + (d.ny - 1) * (cc.z / 2)));
}

/*
 * d=0: a non-critical vertex is paired with an edge; the walk continues
 * at the edge's other endpoint.  d=3: a non-critical cube is paired with
 * one of its quads; the walk continues at that quad's other cofacet
 * cube, unless the quad lies on the boundary and has no other cofacet.
 */
ParentForest build_forest(const GradientField& g, int dim, int threads) {
    if (dim != 0 && dim != 3) throw std::invalid_argument("build_forest: dim must be 0 or 3");
    const GridDims& d = g.dims;
    const std::uint64_t n = dense_cell_count(d, dim);

    ParentForest f;
    f.dims = d;
    f.dim = dim;
    f.parent.resize(n);

    parallel_for(n, threads, [&](std::size_t i) {
        const std::uint32_t di = static_cast<std::uint32_t>(i);
        const CellIndex c = dense_to_cell(d, dim, di);
        if (g.is_critical(c)) {
            f.parent[i] = di;
            return;
        }
        if (dim == 0) {
            const CellIndex e = g.partner(c);  // the vertex's paired edge
            const CellIndex other = static_cast<CellIndex>(
                static_cast<std::int64_t>(e) + (static_cast<std::int64_t>(e) - c));
            f.parent[i] = cell_to_dense(d, 0, other);
            return;
        }
        const CellIndex q = g.partner(c);  // the cube's paired quad
        const CellList cof = cofacets(d, q);
        if (cof.count == 1) {
            f.parent[i] = di;  // boundary quad: the walk stops here
            return;
        }
        const CellIndex other = cof[0] == c ? cof[1] : cof[0];
        f.parent[i] = cell_to_dense(d, 3, other);
    });
    return f;
}

RootLabels find_roots(const ParentForest& forest, int threads) {
    const std::size_t n = forest.parent.size();
    RootLabels r;
    r.label = forest.parent;
    if (n == 0) return r;

    std::vector<std::uint32_t> next(n);
    for (;;) {
        std::atomic<bool> changed{false};
        parallel_for_chunks(n, threads, [&](std::size_t b, std::size_t e) {
            bool any = false;
            for (std::size_t i = b; i < e; ++i) {
                next[i] = r.label[r.label[i]];
                any |= next[i] != r.label[i];
            }
            if (any) changed.store(true, std::memory_order_relaxed);
        });
        if (!changed.load(std::memory_order_relaxed)) break;
        ++r.rounds;
        r.label.swap(next);
    }
    return r;
}

std::vector<SaddleExtremumArc> saddle_extremum_arcs(const GradientField& g,
                                                    const RootLabels& labels0,
                                                    const RootLabels& labels3, int threads) {
    const GridDims& d = g.dims;
    const std::uint64_t n = d.total_cells();

    const std::vector<std::uint32_t> saddles =
        stream_compact_indices(n,
                               [&](std::uint64_t c) {
                                   if (g.code[c] != pair_code::kCritical) return false;
                                   const int dim = cell_dimension(d, static_cast<CellIndex>(c));
                                   return dim == 1 || dim == 2;
                               },
                               threads);

    // Two endpoint slots per saddle; kNone marks "no arc from this slot".
    constexpr CellIndex kNone = 0xffffffffu;
    std::vector<CellIndex> slot(2 * saddles.size(), kNone);
    parallel_for(saddles.size(), threads, [&](std::size_t i) {
        const CellIndex s = saddles[i];
        if (cell_dimension(d, s) == 1) {
            const VertexList vs = cell_vertices(d, s);  // walks down from both endpoints
            for (int k = 0; k < vs.count; ++k)
                slot[2 * i + k] = dense_to_cell(d, 0, labels0.label[vs[k]]);
        } else {
            const CellList cof = cofacets(d, s);  // walks up from each cofacet cube
            for (int k = 0; k < cof.count; ++k) {
                const CellIndex root = dense_to_cell(d, 3, labels3.label[cell_to_dense(d, 3, cof[k])]);
                if (g.is_critical(root)) slot[2 * i + k] = root;
            }
        }
    });

    std::vector<SaddleExtremumArc> arcs;
    arcs.reserve(slot.size());
    for (std::size_t i = 0; i < saddles.size(); ++i) {
        const CellIndex a = slot[2 * i], b = slot[2 * i + 1];
        if (a != kNone && a == b) {
            arcs.push_back({saddles[i], a, 2});
            continue;
        }
        for (const CellIndex x : {std::min(a, b), std::max(a, b)})
            if (x != kNone) arcs.push_back({saddles[i], x, 1});
    }
    return arcs;  // saddles ascend already, extrema ordered within each saddle
}

Segmentation extremum_segmentation(const GridDims& dims, const RootLabels& labels0,
                                   const RootLabels& labels3) {
    if (labels0.label.size() != dims.vertex_count() || labels3.label.size() != dims.cube_count())
        throw std::invalid_argument("extremum_segmentation: label sizes do not match dims");
    return Segmentation{dims, labels0.label, labels3.label};
}

}  // namespace msc3d
