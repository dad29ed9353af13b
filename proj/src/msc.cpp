#include "msc3d/msc.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <map>
#include <stdexcept>
#include <utility>

#include "msc3d/extrema.hpp"
#include "msc3d/gradient.hpp"
#include "msc3d/path_matrix.hpp"
#include "msc3d/primitives.hpp"
#include "msc3d/saddle_graph.hpp"

namespace msc3d {

std::uint64_t MSComplex::count_by_index(int index) const {
    std::uint64_t n = 0;
    for (const CriticalPoint& cp : critical_points) n += cp.index == index;
    return n;
}

std::int64_t MSComplex::euler() const {
    std::int64_t e = 0;
    for (const CriticalPoint& cp : critical_points)
        e += (cp.index & 1) ? -1 : 1;
    return e;
}

std::uint64_t field_hash(const ScalarField& f) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const double v : f.values) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        for (int b = 0; b < 64; b += 8) {
            h ^= (bits >> b) & 0xffu;
            h *= 0x100000001b3ull;
        }
    }
    return h;
}

namespace {

/** id of the critical cell c, given the per-dimension cell lists and the
 *  id offset of each dimension block. */
std::uint32_t cp_id_of(const CriticalCells& crit, const std::uint32_t offset[4], int dim,
                       CellIndex c) {
    const std::vector<CellIndex>& cells = crit.by_dim[dim];
    const auto it = std::lower_bound(cells.begin(), cells.end(), c);
    return offset[dim] + static_cast<std::uint32_t>(it - cells.begin());
}

}  // namespace

MSComplex compute(const ScalarField& f, const ComputeOptions& opt) {
    const int threads = opt.threads;
    auto mark = std::chrono::steady_clock::now();
    const auto lap = [&](double StageTimings::*slot) {
        const auto now = std::chrono::steady_clock::now();
        if (opt.timings) opt.timings->*slot = std::chrono::duration<double>(now - mark).count();
        mark = now;
    };

    const GradientField g = assign_gradient(f, threads);
    if (opt.validate) {
        const GradientReport report = validate_gradient(g);
        if (!report.ok()) throw std::runtime_error("compute: gradient failed validation");
    }
    lap(&StageTimings::gradient);

    const CriticalCells crit = extract_critical_cells(g, threads);
    lap(&StageTimings::critical);

    const RootLabels labels0 = find_roots(build_forest(g, 0, threads), threads);
    const RootLabels labels3 = find_roots(build_forest(g, 3, threads), threads);
    const std::vector<SaddleExtremumArc> extremum_arcs =
        saddle_extremum_arcs(g, labels0, labels3, threads);
    lap(&StageTimings::extrema);

    const MarkedSubgraph marked = mark_reachable(g, crit.by_dim[1], threads);
    const DagMinor minor = build_minor(marked, g, threads);
    lap(&StageTimings::reachability);

    const std::vector<SaddleConnection> saddle_arcs = count_paths(minor, threads);
    lap(&StageTimings::counting);

    MSComplex m;
    m.dims = f.dims;
    m.dtype = opt.source_dtype;
    m.input_hash = field_hash(f);

    std::uint32_t offset[4] = {0, 0, 0, 0};
    for (int dim = 1; dim < 4; ++dim)
        offset[dim] = offset[dim - 1] + static_cast<std::uint32_t>(crit.by_dim[dim - 1].size());

    for (int dim = 0; dim < 4; ++dim)
        for (const CellIndex c : crit.by_dim[dim]) {
            CriticalPoint cp;
            cp.id = static_cast<std::uint32_t>(m.critical_points.size());
            cp.cell = c;
            cp.index = dim;
            cp.doubled = unpack_cell(f.dims, c);
            cp.midpoint = {cp.doubled.x / 2.0, cp.doubled.y / 2.0, cp.doubled.z / 2.0};
            cp.value = f[max_vertex_of(f, c)];
            m.critical_points.push_back(cp);
        }

    for (const SaddleExtremumArc& a : extremum_arcs) {
        if (cell_dimension(f.dims, a.saddle) == 1)
            m.arcs.push_back({cp_id_of(crit, offset, 0, a.extremum),
                              cp_id_of(crit, offset, 1, a.saddle), a.multiplicity});
        else
            m.arcs.push_back({cp_id_of(crit, offset, 2, a.saddle),
                              cp_id_of(crit, offset, 3, a.extremum), a.multiplicity});
    }
    for (const SaddleConnection& s : saddle_arcs)
        m.arcs.push_back({cp_id_of(crit, offset, 1, s.one_saddle),
                          cp_id_of(crit, offset, 2, s.two_saddle), s.paths});
    std::sort(m.arcs.begin(), m.arcs.end(), [](const Arc& a, const Arc& b) {
        return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });

    if (opt.with_segmentation) {
        const Segmentation seg = extremum_segmentation(f.dims, labels0, labels3);

        // Root dense index -> critical point id; cube roots that are not
        // maxima (boundary deadterminations) keep kNoLabel.
        std::vector<std::uint32_t> remap0(dense_cell_count(f.dims, 0), LabelVolumes::kNoLabel);
        for (const CellIndex c : crit.by_dim[0])
            remap0[cell_to_dense(f.dims, 0, c)] = cp_id_of(crit, offset, 0, c);
        std::vector<std::uint32_t> remap3(dense_cell_count(f.dims, 3), LabelVolumes::kNoLabel);
        for (const CellIndex c : crit.by_dim[3])
            remap3[cell_to_dense(f.dims, 3, c)] = cp_id_of(crit, offset, 3, c);

        LabelVolumes lv;
        lv.vertex_to_min.resize(seg.vertex_to_min.size());
        lv.cube_to_max.resize(seg.cube_to_max.size());
        parallel_for(seg.vertex_to_min.size(), threads,
                     [&](std::size_t i) { lv.vertex_to_min[i] = remap0[seg.vertex_to_min[i]]; });
        parallel_for(seg.cube_to_max.size(), threads,
                     [&](std::size_t i) { lv.cube_to_max[i] = remap3[seg.cube_to_max[i]]; });
        m.labels = std::move(lv);
    }
    return m;
}

BoundaryReport boundary_check(const MSComplex& m) {
    // Incoming arcs per critical point: down[t] holds (source id, mult)
    // for every arc ending at t, i.e. the index layer below t.
    std::vector<std::vector<std::pair<std::uint32_t, std::uint64_t>>> down(
        m.critical_points.size());
    for (const Arc& a : m.arcs) down[a.dst].push_back({a.src, a.multiplicity});

    BoundaryReport r;
    for (const CriticalPoint& top : m.critical_points) {
        if (top.index != 2 && top.index != 3) continue;
        std::map<std::uint32_t, unsigned> parity;  // bottom cp -> mod-2 sum
        for (const auto& [mid, m_top] : down[top.id])
            for (const auto& [bottom, m_mid] : down[mid])
                parity[bottom] ^= static_cast<unsigned>(m_top & m_mid & 1);
        for (const auto& [bottom, odd] : parity)
            if (odd) r.odd_pairs.push_back({top.id, bottom});
    }
    return r;
}

std::vector<Arc> query_arcs(const MSComplex& m, std::uint32_t cp_id) {
    if (cp_id >= m.critical_points.size())
        throw std::out_of_range("query_arcs: unknown critical point id");
    std::vector<Arc> out;
    for (const Arc& a : m.arcs)
        if (a.src == cp_id || a.dst == cp_id) out.push_back(a);
    return out;
}

}  // namespace msc3d
