#include "msc3d/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace msc3d {

GridDims::GridDims(std::int64_t nx_, std::int64_t ny_, std::int64_t nz_)
    : nx(nx_), ny(ny_), nz(nz_) {
    if (nx < 2 || ny < 2 || nz < 2)
        throw std::invalid_argument("grid dims must be at least 2 per axis, got " +
                                    std::to_string(nx) + "x" + std::to_string(ny) + "x" +
                                    std::to_string(nz));
    const std::uint64_t cells = total_cells();
    if (cells > std::numeric_limits<CellIndex>::max())
        throw std::invalid_argument("grid too large: " + std::to_string(cells) +
                                    " cells exceed 32-bit cell indexing");
}

CellList facets(const GridDims& d, CellIndex id) {
    const CellCoord c = unpack_cell(d, id);
    CellList out;
    const std::int64_t ex = d.ex(), exy = d.ex() * d.ey();
    if (c.x & 1) {
        out.push(id - 1);
        out.push(id + 1);
    }
    if (c.y & 1) {
        out.push(static_cast<CellIndex>(id - ex));
        out.push(static_cast<CellIndex>(id + ex));
    }
    if (c.z & 1) {
        out.push(static_cast<CellIndex>(id - exy));
        out.push(static_cast<CellIndex>(id + exy));
    }
    return out;
}

CellList cofacets(const GridDims& d, CellIndex id) {
    const CellCoord c = unpack_cell(d, id);
    CellList out;
    const std::int64_t ex = d.ex(), exy = d.ex() * d.ey();
    if (!(c.x & 1)) {
        if (c.x > 0) out.push(id - 1);
        if (c.x < d.ex() - 1) out.push(id + 1);
    }
    if (!(c.y & 1)) {
        if (c.y > 0) out.push(static_cast<CellIndex>(id - ex));
        if (c.y < d.ey() - 1) out.push(static_cast<CellIndex>(id + ex));
    }
    if (!(c.z & 1)) {
        if (c.z > 0) out.push(static_cast<CellIndex>(id - exy));
        if (c.z < d.ez() - 1) out.push(static_cast<CellIndex>(id + exy));
    }
    return out;
}

VertexList cell_vertices(const GridDims& d, CellIndex id) {
    const CellCoord c = unpack_cell(d, id);
    const std::int32_t x0 = c.x / 2, y0 = c.y / 2, z0 = c.z / 2;
    // An odd coordinate (2k+1) spans vertices k and k+1; an even one (2k) pins k.
    const int sx = (c.x & 1) ? 2 : 1, sy = (c.y & 1) ? 2 : 1, sz = (c.z & 1) ? 2 : 1;
    VertexList out;
    for (int dz = 0; dz < sz; ++dz)
        for (int dy = 0; dy < sy; ++dy)
            for (int dx = 0; dx < sx; ++dx)
                out.push(static_cast<VertexIndex>(
                    (x0 + dx) + d.nx * ((y0 + dy) + d.ny * static_cast<std::int64_t>(z0 + dz))));
    return out;
}

bool cell_on_boundary(const GridDims& d, CellIndex id) {
    const CellCoord c = unpack_cell(d, id);
    return c.x == 0 || c.x == d.ex() - 1 || c.y == 0 || c.y == d.ey() - 1 || c.z == 0 ||
           c.z == d.ez() - 1;
}

ScalarField::ScalarField(GridDims d, std::vector<double> v) : dims(d), values(std::move(v)) {
    if (values.size() != dims.vertex_count())
        throw std::invalid_argument("scalar field size " + std::to_string(values.size()) +
                                    " does not match vertex count " +
                                    std::to_string(dims.vertex_count()));
    for (double x : values)
        if (!std::isfinite(x))
            throw std::invalid_argument("scalar field contains a non-finite value");
}

CellOrderKey cell_order_key(const ScalarField& f, CellIndex id) {
    const VertexList vs = cell_vertices(f.dims, id);
    CellOrderKey k;
    k.count = vs.count;
    // The two halves of the key sort independently: values descending, and
    // (for the tie-break) vertex ids descending.
    for (int i = 0; i < vs.count; ++i) {
        k.value[static_cast<std::size_t>(i)] = f[vs[i]];
        k.vertex[static_cast<std::size_t>(i)] = vs[i];
    }
    std::sort(k.value.begin(), k.value.begin() + vs.count, std::greater<double>());
    std::sort(k.vertex.begin(), k.vertex.begin() + vs.count, std::greater<VertexIndex>());
    return k;
}

std::strong_ordering compare_keys(const CellOrderKey& a, const CellOrderKey& b) {
    const int n = std::min(a.count, b.count);
    for (int i = 0; i < n; ++i) {
        const double va = a.value[static_cast<std::size_t>(i)];
        const double vb = b.value[static_cast<std::size_t>(i)];
        if (va < vb) return std::strong_ordering::less;
        if (va > vb) return std::strong_ordering::greater;
    }
    if (a.count != b.count)  // prefix rule: the shorter list is smaller
        return a.count < b.count ? std::strong_ordering::less : std::strong_ordering::greater;
    for (int i = 0; i < n; ++i) {
        const VertexIndex va = a.vertex[static_cast<std::size_t>(i)];
        const VertexIndex vb = b.vertex[static_cast<std::size_t>(i)];
        if (va != vb) return va < vb ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

std::strong_ordering compare_cells(const ScalarField& f, CellIndex a, CellIndex b) {
    if (a == b) return std::strong_ordering::equal;
    return compare_keys(cell_order_key(f, a), cell_order_key(f, b));
}

VertexIndex max_vertex_of(const ScalarField& f, CellIndex id) {
    const VertexList vs = cell_vertices(f.dims, id);
    VertexIndex best = vs[0];
    for (int i = 1; i < vs.count; ++i) {
        const VertexIndex v = vs[i];
        if (f[v] > f[best] || (f[v] == f[best] && v > best)) best = v;
    }
    return best;
}

}  // namespace msc3d
