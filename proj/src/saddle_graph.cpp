#include "msc3d/saddle_graph.hpp"

#include <algorithm>
#include <stdexcept>

#include "msc3d/primitives.hpp"

namespace msc3d {

SuccessorList successors(const GradientField& g, CellIndex e) {
    SuccessorList out;
    const CellList cof = cofacets(g.dims, e);
    for (int k = 0; k < cof.count; ++k) {
        const CellIndex q = cof[k];
        if (g.is_critical(q)) {
            out.push(DagSuccessor{DagSuccessor::kTerminal2Saddle, q});
        } else if (g.is_paired_with_facet(q)) {
            const CellIndex other = g.partner(q);
            if (other != e) out.push(DagSuccessor{DagSuccessor::kEdge, other});
        }
        // paired with a cube: no continuation through q
    }
    return out;
}

MarkedSubgraph mark_reachable(const GradientField& g, const std::vector<CellIndex>& one_saddles,
                              int threads) {
    const GridDims& d = g.dims;
    for (const CellIndex e : one_saddles)
        if (!g.is_critical(e) || cell_dimension(d, e) != 1)
            throw std::invalid_argument("mark_reachable: sources must be critical 1-cells");

    MarkedSubgraph m;
    m.dims = d;
    m.marked.assign(d.total_cells(), 0);

    constexpr CellIndex kEmpty = 0xffffffffu;
    std::vector<CellIndex> frontier;
    frontier.reserve(one_saddles.size());
    for (const CellIndex e : one_saddles) {
        if (m.marked[e]) continue;  // duplicate source
        m.marked[e] = 1;
        frontier.push_back(e);
    }

    std::vector<CellIndex> slots, candidates, next;
    while (!frontier.empty()) {
        slots.assign(frontier.size() * 4, kEmpty);
        parallel_for(frontier.size(), threads, [&](std::size_t i) {
            const SuccessorList ss = successors(g, frontier[i]);
            for (int k = 0; k < ss.count; ++k) slots[4 * i + k] = ss[k].cell;
        });
        candidates = stream_compact<CellIndex>(
            slots, [](CellIndex c) { return c != kEmpty; }, threads);

        // Claiming runs serially in slot order; the resulting set is the
        // same whatever the expansion schedule was.
        next.clear();
        for (const CellIndex c : candidates) {
            if (m.marked[c]) continue;
            m.marked[c] = 1;
            if (cell_dimension(d, c) == 1) {
                m.marked[g.partner(c)] = 1;  // the quad the path came through
                next.push_back(c);
            }
            // discovered 2-saddles stay unexpanded
        }
        frontier.swap(next);
    }

    m.one_saddles = stream_compact_indices(
        d.total_cells(),
        [&](std::uint64_t c) {
            return m.marked[c] && g.is_critical(static_cast<CellIndex>(c)) &&
                   cell_dimension(d, static_cast<CellIndex>(c)) == 1;
        },
        threads);
    m.two_saddles = stream_compact_indices(
        d.total_cells(),
        [&](std::uint64_t c) {
            return m.marked[c] && g.is_critical(static_cast<CellIndex>(c)) &&
                   cell_dimension(d, static_cast<CellIndex>(c)) == 2;
        },
        threads);
    return m;
}

namespace {

std::uint32_t index_of(const std::vector<CellIndex>& sorted, CellIndex c) {
    return static_cast<std::uint32_t>(
        std::lower_bound(sorted.begin(), sorted.end(), c) - sorted.begin());
}

struct Trace {
    std::uint8_t from_junction = 0;  // source class: 1-saddle or junction
    std::uint32_t origin = 0;        // dense id within its class
    CellIndex at = 0;                // current interior edge
};

struct Finished {
    std::uint8_t from_junction = 0;
    std::uint8_t to_terminal = 0;  // destination class: junction or 2-saddle
    std::uint32_t src = 0;
    std::uint32_t dst = 0;
};

void merge_into(std::vector<MinorEdge>& out, std::vector<std::pair<std::uint32_t, std::uint32_t>>& raw) {
    std::sort(raw.begin(), raw.end());
    for (std::size_t i = 0; i < raw.size();) {
        std::size_t j = i;
        while (j < raw.size() && raw[j] == raw[i]) ++j;
        out.push_back({raw[i].first, raw[i].second, j - i});
        i = j;
    }
    raw.clear();
}

}  // namespace

DagMinor build_minor(const MarkedSubgraph& m, const GradientField& g, int threads) {
    const GridDims& d = g.dims;
    DagMinor minor;
    minor.one_saddles = m.one_saddles;
    minor.two_saddles = m.two_saddles;
    minor.junctions = stream_compact_indices(
        d.total_cells(),
        [&](std::uint64_t c) {
            const CellIndex e = static_cast<CellIndex>(c);
            return m.marked[c] && !g.is_critical(e) && cell_dimension(d, e) == 1 &&
                   successors(g, e).count > 1;
        },
        threads);

    // Junction membership test for the tracing loop.
    const auto is_junction = [&](CellIndex e) {
        const auto it = std::lower_bound(minor.junctions.begin(), minor.junctions.end(), e);
        return it != minor.junctions.end() && *it == e;
    };

    // One trace per outgoing branch of every 1-saddle and junction.  A
    // branch that immediately hits a terminal or junction finishes on
    // the spot; the rest advance one step per round below.
    std::vector<Trace> active;
    std::vector<Finished> done;
    const auto launch = [&](std::uint8_t from_junction, std::uint32_t origin, const DagSuccessor& s) {
        if (s.kind == DagSuccessor::kTerminal2Saddle) {
            done.push_back({from_junction, 1, origin, index_of(minor.two_saddles, s.cell)});
        } else if (is_junction(s.cell)) {
            done.push_back({from_junction, 0, origin, index_of(minor.junctions, s.cell)});
        } else {
            active.push_back({from_junction, origin, s.cell});
        }
    };
    for (std::uint32_t i = 0; i < minor.one_saddles.size(); ++i) {
        const SuccessorList ss = successors(g, minor.one_saddles[i]);
        for (int k = 0; k < ss.count; ++k) launch(0, i, ss[k]);
    }
    for (std::uint32_t i = 0; i < minor.junctions.size(); ++i) {
        const SuccessorList ss = successors(g, minor.junctions[i]);
        for (int k = 0; k < ss.count; ++k) launch(1, i, ss[k]);
    }

    // Round-based advancement: every active trace sits on an interior
    // edge (out-degree <= 1).  Step results land in per-trace slots, the
    // survivors are compacted, finished traces append in trace order.
    enum : std::uint8_t { kStep, kFinish, kDiscard };
    std::vector<std::uint8_t> outcome;
    std::vector<Trace> stepped;
    std::vector<Finished> fin;
    std::uint64_t rounds = 0;
    while (!active.empty()) {
        if (++rounds > d.total_cells())
            throw std::runtime_error("build_minor: trace outlived the grid (cycle)");
        const std::size_t n = active.size();
        outcome.assign(n, kDiscard);
        stepped.assign(n, Trace{});
        fin.assign(n, Finished{});
        parallel_for(n, threads, [&](std::size_t i) {
            const Trace t = active[i];
            const SuccessorList ss = successors(g, t.at);
            if (ss.count == 0) return;  // dead end: discard the trace
            const DagSuccessor s = ss[0];
            if (s.kind == DagSuccessor::kTerminal2Saddle) {
                outcome[i] = kFinish;
                fin[i] = {t.from_junction, 1, t.origin, index_of(minor.two_saddles, s.cell)};
            } else if (is_junction(s.cell)) {
                outcome[i] = kFinish;
                fin[i] = {t.from_junction, 0, t.origin, index_of(minor.junctions, s.cell)};
            } else {
                outcome[i] = kStep;
                stepped[i] = {t.from_junction, t.origin, s.cell};
            }
        });
        std::vector<Trace> next;
        next.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (outcome[i] == kStep) next.push_back(stepped[i]);
            else if (outcome[i] == kFinish) done.push_back(fin[i]);
        }
        active.swap(next);
    }

    std::vector<std::pair<std::uint32_t, std::uint32_t>> raw;
    const auto collect = [&](std::uint8_t from_junction, std::uint8_t to_terminal,
                             std::vector<MinorEdge>& out) {
        for (const Finished& f : done)
            if (f.from_junction == from_junction && f.to_terminal == to_terminal)
                raw.push_back({f.src, f.dst});
        merge_into(out, raw);
    };
    collect(0, 0, minor.s1_to_j);
    collect(1, 0, minor.j_to_j);
    collect(1, 1, minor.j_to_s2);
    collect(0, 1, minor.s1_to_s2);
    return minor;
}

}  // namespace msc3d
