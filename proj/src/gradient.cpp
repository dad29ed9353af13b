#include "msc3d/gradient.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include "msc3d/primitives.hpp"

namespace msc3d {

namespace {

/*
 * A vertex's star lives in the 3x3x3 block of doubled coordinates around
 * it.  Cells (and neighbor vertices) are addressed by slot = (dx+1) +
 * 3*(dy+1) + 9*(dz+1), dx/dy/dz in {-1,0,+1}; slot 13 is the vertex
 * itself.  The offsets double as both cell offsets in the lattice and
 * vertex offsets in the grid, which keeps the whole expansion on 27-entry
 * stack arrays.
 */
struct Slot {
    std::int8_t d[3];
    std::uint8_t dim;
};

constexpr std::array<Slot, 27> kSlots = [] {
    std::array<Slot, 27> s{};
    for (int i = 0; i < 27; ++i) {
        const std::int8_t dx = static_cast<std::int8_t>(i % 3 - 1);
        const std::int8_t dy = static_cast<std::int8_t>((i / 3) % 3 - 1);
        const std::int8_t dz = static_cast<std::int8_t>(i / 9 - 1);
        s[static_cast<std::size_t>(i)] = {
            {dx, dy, dz},
            static_cast<std::uint8_t>((dx != 0) + (dy != 0) + (dz != 0))};
    }
    return s;
}();

constexpr int kCenter = 13;
constexpr int kStep[3] = {1, 3, 9};  // slot stride per axis

inline int zero_axis(int slot, int axis) {
    return slot - kSlots[static_cast<std::size_t>(slot)].d[axis] * kStep[axis];
}

/** Sort key of one star cell: vertex values then vertex ids, both descending. */
struct StarKey {
    double val[8];
    VertexIndex vid[8];
    int n = 0;
};

inline bool key_less(const StarKey& a, const StarKey& b) {
    const int n = std::min(a.n, b.n);
    for (int i = 0; i < n; ++i) {
        if (a.val[i] != b.val[i]) return a.val[i] < b.val[i];
    }
    if (a.n != b.n) return a.n < b.n;
    for (int i = 0; i < n; ++i) {
        if (a.vid[i] != b.vid[i]) return a.vid[i] < b.vid[i];
    }
    return false;
}

struct StarScratch {
    bool in_range[27];
    bool in_star[27];  // member of the lower star of this vertex
    double nval[27];
    VertexIndex nid[27];
    StarKey key[27];
    CellIndex cell[27];
    std::uint8_t cnt[27];  // unassigned facets of the slot inside the star
    bool assigned[27];
    bool inq1[27];
    int q1[27], q0[27];
    int n1, n0;
};

void process_vertex(const ScalarField& f, GradientField& g, std::int64_t vx, std::int64_t vy,
                    std::int64_t vz, StarScratch& s) {
    const GridDims& d = f.dims;
    const VertexIndex vi =
        static_cast<VertexIndex>(vx + d.nx * (vy + d.ny * vz));
    const double fv = f[vi];

    // Neighbor data and one "strictly below v" flag per offset.
    bool below[27];
    for (int t = 0; t < 27; ++t) {
        const Slot& sl = kSlots[static_cast<std::size_t>(t)];
        const std::int64_t ux = vx + sl.d[0], uy = vy + sl.d[1], uz = vz + sl.d[2];
        if (ux < 0 || ux >= d.nx || uy < 0 || uy >= d.ny || uz < 0 || uz >= d.nz) {
            s.in_range[t] = false;
            below[t] = false;
            continue;
        }
        s.in_range[t] = true;
        const VertexIndex u = static_cast<VertexIndex>(ux + d.nx * (uy + d.ny * uz));
        s.nval[t] = f[u];
        s.nid[t] = u;
        below[t] = f[u] < fv || (f[u] == fv && u < vi);
    }
    below[kCenter] = true;

    // in_star via the subset rule: a cell is owned by v iff every other
    // vertex offset it contains is below v.  Offsets are processed in
    // dimension order so the zeroed-axis results are ready.
    static constexpr int kByDim[27] = {13, 4,  10, 12, 14, 16, 22, 1,  3,  5,  7,  9, 11,
                                       15, 17, 19, 21, 23, 25, 0,  2,  6,  8,  18, 20, 24, 26};
    for (int k = 0; k < 27; ++k) {
        const int t = kByDim[k];
        if (!s.in_range[t] || !below[t]) {
            s.in_star[t] = t == kCenter;
            continue;
        }
        bool ok = true;
        const Slot& sl = kSlots[static_cast<std::size_t>(t)];
        for (int a = 0; a < 3 && ok; ++a)
            if (sl.d[a] != 0) ok = s.in_star[zero_axis(t, a)];
        s.in_star[t] = ok;
    }

    int star_size = 0;
    for (int t = 0; t < 27; ++t) star_size += s.in_star[t];

    const CellCoord vcell{static_cast<std::int32_t>(2 * vx), static_cast<std::int32_t>(2 * vy),
                          static_cast<std::int32_t>(2 * vz)};
    const CellIndex vcid = pack_cell(d, vcell);
    if (star_size == 1) {
        g.code[vcid] = pair_code::kCritical;
        return;
    }

    // Cell ids, sort keys and facet counters for the star members.
    for (int t = 0; t < 27; ++t) {
        if (!s.in_star[t]) continue;
        const Slot& sl = kSlots[static_cast<std::size_t>(t)];
        s.cell[t] = pack_cell(d, CellCoord{vcell.x + sl.d[0], vcell.y + sl.d[1],
                                           vcell.z + sl.d[2]});
        StarKey& k = s.key[t];
        k.n = 0;
        // The cell's vertices are the sub-offsets of t (center included).
        int subs[8];
        int nsubs = 1;
        subs[0] = kCenter;
        for (int a = 0; a < 3; ++a) {
            if (sl.d[a] == 0) continue;
            for (int j = 0, m = nsubs; j < m; ++j) subs[nsubs++] = subs[j] + sl.d[a] * kStep[a];
        }
        for (int j = 0; j < nsubs; ++j) {
            k.val[k.n] = s.nval[subs[j]];
            k.vid[k.n] = s.nid[subs[j]];
            ++k.n;
        }
        std::sort(k.val, k.val + k.n, std::greater<double>());
        std::sort(k.vid, k.vid + k.n, std::greater<VertexIndex>());
        s.cnt[t] = sl.dim;
        s.assigned[t] = false;
        s.inq1[t] = false;
    }
    s.n1 = s.n0 = 0;

    auto write_pair = [&](int lo, int hi) {
        // lo and hi differ on exactly one axis; hi is the higher cell.
        const Slot& a = kSlots[static_cast<std::size_t>(lo)];
        const Slot& b = kSlots[static_cast<std::size_t>(hi)];
        for (int ax = 0; ax < 3; ++ax) {
            if (a.d[ax] == b.d[ax]) continue;
            const int sign = b.d[ax] - a.d[ax];
            g.code[s.cell[lo]] = pair_code::with_cofacet(ax, sign);
            g.code[s.cell[hi]] = pair_code::with_facet(ax, -sign);
            return;
        }
        assert(false && "pair slots do not differ on one axis");
    };

    // Settle a slot (assign a pair half or mark critical) and update the
    // unpaired-facet counters of its star cofacets.
    auto settle = [&](int t) {
        s.assigned[t] = true;
        const Slot& sl = kSlots[static_cast<std::size_t>(t)];
        for (int a = 0; a < 3; ++a) {
            if (sl.d[a] != 0) continue;
            for (int dir = -1; dir <= 1; dir += 2) {
                const int cof = t + dir * kStep[a];
                if (cof < 0 || cof >= 27 || !s.in_star[cof] || s.assigned[cof]) continue;
                if (--s.cnt[cof] == 1 && !s.inq1[cof]) {
                    s.inq1[cof] = true;
                    s.q1[s.n1++] = cof;
                }
            }
        }
    };

    // The vertex pairs with its lowest star edge; other edges queue as
    // critical candidates.
    int delta = -1;
    for (int t = 0; t < 27; ++t) {
        if (!s.in_star[t] || kSlots[static_cast<std::size_t>(t)].dim != 1) continue;
        if (delta < 0 || key_less(s.key[t], s.key[delta])) delta = t;
    }
    assert(delta >= 0 && "star larger than {v} always contains an edge");
    for (int t = 0; t < 27; ++t)
        if (s.in_star[t] && t != delta && kSlots[static_cast<std::size_t>(t)].dim == 1)
            s.q0[s.n0++] = t;
    write_pair(kCenter, delta);
    settle(kCenter);
    settle(delta);

    auto pop_min = [&](int* q, int& n) {
        int best = -1, at = -1;
        for (int i = 0; i < n; ++i) {
            const int t = q[i];
            if (s.assigned[t]) {  // lazily drop settled entries
                q[i--] = q[--n];
                continue;
            }
            if (best < 0 || key_less(s.key[t], s.key[best])) {
                best = t;
                at = i;
            }
        }
        if (best >= 0) q[at] = q[--n];
        return best;
    };

    int remaining = star_size - 2;
    while (remaining > 0) {
        bool worked = false;
        while (s.n1 > 0) {
            const int t = pop_min(s.q1, s.n1);
            if (t < 0) break;
            s.inq1[t] = false;
            if (s.cnt[t] != 1) {  // facets settled in the meantime: critical candidate
                s.q0[s.n0++] = t;
                continue;
            }
            // Pair t with its unique unassigned facet inside the star.
            const Slot& sl = kSlots[static_cast<std::size_t>(t)];
            int facet = -1;
            for (int a = 0; a < 3 && facet < 0; ++a) {
                if (sl.d[a] == 0) continue;
                const int fs = zero_axis(t, a);
                if (s.in_star[fs] && !s.assigned[fs]) facet = fs;
            }
            assert(facet >= 0);
            write_pair(facet, t);
            settle(facet);
            settle(t);
            remaining -= 2;
            worked = true;
        }
        if (remaining == 0) break;
        const int t = pop_min(s.q0, s.n0);
        if (t >= 0) {
            g.code[s.cell[t]] = pair_code::kCritical;
            settle(t);
            --remaining;
            worked = true;
        }
        if (!worked) {
            assert(false && "lower-star expansion stalled");
            break;
        }
    }
}

}  // namespace

GradientField assign_gradient(const ScalarField& f, int threads) {
    const GridDims& d = f.dims;
    GradientField g{d, std::vector<std::uint8_t>(d.total_cells(), pair_code::kUnset)};
    const std::size_t nvert = static_cast<std::size_t>(d.vertex_count());
    parallel_for_chunks(nvert, threads, [&](std::size_t lo, std::size_t hi) {
        StarScratch scratch;
        for (std::size_t v = lo; v < hi; ++v) {
            const std::int64_t vx = static_cast<std::int64_t>(v) % d.nx;
            const std::int64_t vy = (static_cast<std::int64_t>(v) / d.nx) % d.ny;
            const std::int64_t vz = static_cast<std::int64_t>(v) / (d.nx * d.ny);
            process_vertex(f, g, vx, vy, vz, scratch);
        }
    });
    return g;
}

CriticalCells extract_critical_cells(const GradientField& g, int threads) {
    CriticalCells out;
    for (int dim = 0; dim < 4; ++dim) {
        out.by_dim[dim] = stream_compact_indices(
            g.dims.total_cells(),
            [&](std::size_t i) {
                return g.code[i] == pair_code::kCritical &&
                       cell_dimension(g.dims, static_cast<CellIndex>(i)) == dim;
            },
            threads);
    }
    return out;
}

GradientReport validate_gradient(const GradientField& g, std::uint64_t max_cells_for_cycles) {
    GradientReport rep;
    const GridDims& d = g.dims;
    const std::uint64_t n = d.total_cells();
    if (g.code.size() != n) throw std::invalid_argument("gradient code array size mismatch");

    std::uint64_t pairs = 0;
    auto flag = [&](CellIndex c) {
        ++rep.matching_violations;
        if (rep.samples.size() < 32) rep.samples.push_back(c);
    };

    for (CellIndex c = 0; c < n; ++c) {
        const std::uint8_t k = g.code[c];
        if (k == pair_code::kCritical) continue;
        if (k == pair_code::kUnset || k >= pair_code::kCofacetBase + 6) {
            flag(c);
            continue;
        }
        ++pairs;
        const bool up = k >= pair_code::kCofacetBase;
        const int dir = k - (up ? pair_code::kCofacetBase : pair_code::kFacetBase);
        const int axis = dir >> 1;
        const int sign = (dir & 1) ? 1 : -1;
        const CellCoord cc = unpack_cell(d, c);
        const std::int32_t coord[3] = {cc.x, cc.y, cc.z};
        const std::int64_t extent[3] = {d.ex(), d.ey(), d.ez()};
        // Paired-with-cofacet moves along an even axis (gaining a span);
        // paired-with-facet along an odd one.  Either way the partner must
        // exist and point straight back.
        if (((coord[axis] & 1) != 0) != !up || coord[axis] + sign < 0 ||
            coord[axis] + sign >= extent[axis]) {
            flag(c);
            continue;
        }
        const CellIndex p = g.partner(c);
        const std::uint8_t want = up ? pair_code::with_facet(axis, -sign)
                                     : pair_code::with_cofacet(axis, -sign);
        if (g.code[p] != want) flag(c);
    }
    rep.degenerate = pairs == 0;

    if (n <= max_cells_for_cycles) {
        rep.acyclicity_checked = true;
        // V-path successor relation per dimension d: alpha -> other facets
        // of alpha's cofacet partner that are themselves paired upward.
        // Kahn peeling; whatever survives sits on a closed V-path.
        std::vector<std::uint32_t> indeg(n, 0);
        auto for_succ = [&](CellIndex a, auto&& fn) {
            const CellIndex b = g.partner(a);
            for (CellIndex x : facets(d, b))
                if (x != a && x < n && g.is_paired_with_cofacet(x)) fn(x);
        };
        std::vector<CellIndex> stack;
        for (CellIndex c = 0; c < n; ++c)
            if (g.is_paired_with_cofacet(c))
                for_succ(c, [&](CellIndex x) { ++indeg[x]; });
        for (CellIndex c = 0; c < n; ++c)
            if (g.is_paired_with_cofacet(c) && indeg[c] == 0) stack.push_back(c);
        std::uint64_t peeled = 0;
        std::uint64_t total_up = 0;
        for (CellIndex c = 0; c < n; ++c)
            if (g.is_paired_with_cofacet(c)) ++total_up;
        while (!stack.empty()) {
            const CellIndex c = stack.back();
            stack.pop_back();
            ++peeled;
            for_succ(c, [&](CellIndex x) {
                if (--indeg[x] == 0) stack.push_back(x);
            });
        }
        rep.cells_in_closed_vpath = total_up - peeled;
        if (rep.cells_in_closed_vpath && rep.samples.size() < 32) {
            for (CellIndex c = 0; c < n && rep.samples.size() < 32; ++c)
                if (g.is_paired_with_cofacet(c) && indeg[c] > 0) rep.samples.push_back(c);
        }
    }
    return rep;
}

}  // namespace msc3d
