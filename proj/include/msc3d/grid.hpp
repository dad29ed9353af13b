#pragma once

/*
 * Cubical cell complex over a regular 3D vertex grid.
 *
 * Conventions used throughout the library:
 *
 *  - A grid of nx*ny*nz vertices induces a cell lattice of extents
 *    (2*nx-1, 2*ny-1, 2*nz-1) in "doubled" coordinates: a cell coordinate
 *    is even where the cell is flat on that axis and odd where it spans
 *    an axis interval.  The number of odd coordinates is the cell's
 *    dimension (0 = vertex, 1 = edge, 2 = quad, 3 = cube).
 *  - Cells are identified by a single linear index over that lattice,
 *    x-fastest:  id = cx + ex*(cy + ey*cz).
 *  - Vertices are separately indexed x-fastest over nx*ny*nz; a vertex
 *    cell at doubled coords (2vx,2vy,2vz) has vertex id vx + nx*(vy + ny*vz).
 *  - Scalar data lives on vertices, widened to double on ingestion.
 *
 * Facets of a d-cell are the (d-1)-cells obtained by moving one odd
 * coordinate by +-1; they always exist.  Cofacets move one even
 * coordinate by +-1 and are clipped at the lattice boundary, so interior
 * d-cells have 2*(3-d) cofacets and boundary cells fewer.
 */

#include <array>
#include <compare>
#include <cstdint>
#include <cstddef>
#include <vector>

namespace msc3d {

using CellIndex = std::uint32_t;
using VertexIndex = std::uint32_t;

/** Up-to-N list of indices returned by incidence queries; no allocation. */
template <typename T, int N>
struct SmallList {
    std::array<T, N> item{};
    int count = 0;

    void push(T v) { item[static_cast<std::size_t>(count++)] = v; }
    const T* begin() const { return item.data(); }
    const T* end() const { return item.data() + count; }
    T operator[](int i) const { return item[static_cast<std::size_t>(i)]; }
};

using CellList = SmallList<CellIndex, 6>;
using VertexList = SmallList<VertexIndex, 8>;

struct GridDims {
    std::int64_t nx = 0, ny = 0, nz = 0;

    GridDims() = default;
    GridDims(std::int64_t nx_, std::int64_t ny_, std::int64_t nz_);

    std::int64_t ex() const { return 2 * nx - 1; }
    std::int64_t ey() const { return 2 * ny - 1; }
    std::int64_t ez() const { return 2 * nz - 1; }

    std::uint64_t vertex_count() const {
        return static_cast<std::uint64_t>(nx) * static_cast<std::uint64_t>(ny) *
               static_cast<std::uint64_t>(nz);
    }
    std::uint64_t cube_count() const {
        return static_cast<std::uint64_t>(nx - 1) * static_cast<std::uint64_t>(ny - 1) *
               static_cast<std::uint64_t>(nz - 1);
    }
    std::uint64_t total_cells() const {
        return static_cast<std::uint64_t>(ex()) * static_cast<std::uint64_t>(ey()) *
               static_cast<std::uint64_t>(ez());
    }

    bool operator==(const GridDims&) const = default;
};

/** Doubled lattice coordinates of one cell. */
struct CellCoord {
    std::int32_t x = 0, y = 0, z = 0;
    bool operator==(const CellCoord&) const = default;
};

inline CellIndex pack_cell(const GridDims& d, CellCoord c) {
    return static_cast<CellIndex>(
        c.x + d.ex() * (c.y + d.ey() * static_cast<std::int64_t>(c.z)));
}

inline CellCoord unpack_cell(const GridDims& d, CellIndex id) {
    const std::int64_t ex = d.ex(), ey = d.ey();
    const std::int64_t i = id;
    return CellCoord{static_cast<std::int32_t>(i % ex),
                     static_cast<std::int32_t>((i / ex) % ey),
                     static_cast<std::int32_t>(i / (ex * ey))};
}

inline int cell_dimension(CellCoord c) {
    return (c.x & 1) + (c.y & 1) + (c.z & 1);
}

inline int cell_dimension(const GridDims& d, CellIndex id) {
    return cell_dimension(unpack_cell(d, id));
}

/** Facets: flip one odd coordinate by +-1.  Always inside the lattice. */
CellList facets(const GridDims& d, CellIndex id);

/** Cofacets: flip one even coordinate by +-1, clipped at the boundary. */
CellList cofacets(const GridDims& d, CellIndex id);

/** Vertex ids of the cell's corners (1, 2, 4 or 8 of them). */
VertexList cell_vertices(const GridDims& d, CellIndex id);

/** True if the cell lies in a face of the box (some coordinate is 0 or max). */
bool cell_on_boundary(const GridDims& d, CellIndex id);

/** Scalar values on the vertex grid, widened to double. */
struct ScalarField {
    GridDims dims;
    std::vector<double> values;  // nx*ny*nz, x-fastest

    ScalarField() = default;
    ScalarField(GridDims d, std::vector<double> v);

    double operator[](VertexIndex v) const { return values[v]; }
};

/*
 * Simulated-simplicity order.  A cell's key is its vertex values sorted
 * descending; ties between equal value lists break on the vertex ids,
 * also sorted descending.  Prefix rule: if one list exhausts first it
 * compares less.  This is a strict total order on all cells, and within
 * one dimension it never declares two distinct cells equal.
 */
struct CellOrderKey {
    std::array<double, 8> value{};
    std::array<VertexIndex, 8> vertex{};
    int count = 0;
};

CellOrderKey cell_order_key(const ScalarField& f, CellIndex id);

std::strong_ordering compare_keys(const CellOrderKey& a, const CellOrderKey& b);

/** Total order over cells used everywhere ties must break deterministically. */
std::strong_ordering compare_cells(const ScalarField& f, CellIndex a, CellIndex b);

/** Vertex order (value, then id): the vertex of the cell that owns its
 *  lower star.  Every cell belongs to exactly one owner's star. */
VertexIndex max_vertex_of(const ScalarField& f, CellIndex id);

}  // namespace msc3d
