#include "msc3d/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "json.hpp"

namespace msc3d {

namespace {

using json = nlohmann::ordered_json;

std::string hex16(std::uint64_t v) {
    static const char digits[] = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    return s;
}

[[noreturn]] void fail(const std::string& what) {
    throw ParseError("deserialize_json: " + what, 0);
}

const json& member(const json& j, const char* key) {
    if (!j.is_object()) fail("expected an object around field '" + std::string(key) + "'");
    const auto it = j.find(key);
    if (it == j.end()) fail("missing field '" + std::string(key) + "'");
    return *it;
}

std::uint64_t get_uint(const json& j, const char* key, std::uint64_t max_value) {
    const json& v = member(j, key);
    if (!v.is_number_unsigned()) fail("field '" + std::string(key) + "' is not a nonnegative integer");
    const std::uint64_t x = v.get<std::uint64_t>();
    if (x > max_value) fail("field '" + std::string(key) + "' out of range");
    return x;
}

double get_double(const json& j, const char* key) {
    const json& v = member(j, key);
    if (!v.is_number()) fail("field '" + std::string(key) + "' is not a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail("field '" + std::string(key) + "' is not finite");
    return x;
}

const json& get_array(const json& j, const char* key, std::size_t size) {
    const json& v = member(j, key);
    if (!v.is_array()) fail("field '" + std::string(key) + "' is not an array");
    if (size != 0 && v.size() != size)
        fail("field '" + std::string(key) + "' must have " + std::to_string(size) + " entries");
    return v;
}

std::string get_string(const json& j, const char* key) {
    const json& v = member(j, key);
    if (!v.is_string() || v.get<std::string>().empty())
        fail("field '" + std::string(key) + "' is not a nonempty string");
    return v.get<std::string>();
}

void append_double(std::string& out, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

}  // namespace

std::string serialize_json(const MSComplex& m) {
    json j;
    j["dims"] = {m.dims.nx, m.dims.ny, m.dims.nz};
    j["dtype"] = m.dtype;
    j["provenance"] = {{"input_hash", hex16(m.input_hash)}, {"tie_break", m.tie_break}};

    json cps = json::array();
    for (const CriticalPoint& cp : m.critical_points)
        cps.push_back({{"id", cp.id},
                       {"cell", cp.cell},
                       {"index", cp.index},
                       {"position",
                        {{"doubled", {cp.doubled.x, cp.doubled.y, cp.doubled.z}},
                         {"midpoint", {cp.midpoint[0], cp.midpoint[1], cp.midpoint[2]}}}},
                       {"value", cp.value}});
    j["critical_points"] = std::move(cps);

    json arcs = json::array();
    for (const Arc& a : m.arcs)
        arcs.push_back({{"src", a.src}, {"dst", a.dst}, {"multiplicity", a.multiplicity}});
    j["arcs"] = std::move(arcs);

    return j.dump(2) + "\n";
}

MSComplex deserialize_json(std::string_view bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), e.byte);
    }
    if (!j.is_object()) fail("top level is not an object");

    MSComplex m;

    const json& dims = get_array(j, "dims", 3);
    std::int64_t d[3];
    for (int k = 0; k < 3; ++k) {
        if (!dims[static_cast<std::size_t>(k)].is_number_unsigned())
            fail("dims entries must be nonnegative integers");
        const std::uint64_t v = dims[static_cast<std::size_t>(k)].get<std::uint64_t>();
        if (v > (1ull << 31)) fail("dims entry out of range");
        d[k] = static_cast<std::int64_t>(v);
    }
    const bool empty_grid = d[0] == 0 && d[1] == 0 && d[2] == 0;
    if (!empty_grid) {
        try {
            m.dims = GridDims(d[0], d[1], d[2]);
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }

    m.dtype = get_string(j, "dtype");
    if (m.dtype != "u8" && m.dtype != "u16" && m.dtype != "f32" && m.dtype != "f64")
        fail("unknown dtype '" + m.dtype + "'");

    const json& prov = member(j, "provenance");
    const std::string hash = get_string(prov, "input_hash");
    if (hash.size() != 16) fail("input_hash must be 16 hex digits");
    const auto res = std::from_chars(hash.data(), hash.data() + 16, m.input_hash, 16);
    if (res.ec != std::errc() || res.ptr != hash.data() + 16)
        fail("input_hash must be 16 hex digits");
    m.tie_break = get_string(prov, "tie_break");

    const json& cps = get_array(j, "critical_points", 0);
    if (empty_grid && !cps.empty()) fail("critical points on an empty grid");
    const std::uint64_t total = empty_grid ? 0 : m.dims.total_cells();
    m.critical_points.reserve(cps.size());
    for (std::size_t i = 0; i < cps.size(); ++i) {
        const json& c = cps[i];
        CriticalPoint cp;
        cp.id = static_cast<std::uint32_t>(get_uint(c, "id", 0xffffffffu));
        if (cp.id != i) fail("critical point ids must be 0..n-1 in order");
        cp.cell = static_cast<CellIndex>(get_uint(c, "cell", total - 1));
        cp.index = static_cast<int>(get_uint(c, "index", 3));
        if (cp.index != cell_dimension(m.dims, cp.cell))
            fail("critical point index does not match its cell dimension");

        const json& pos = member(c, "position");
        const json& doubled = get_array(pos, "doubled", 3);
        const json& midpoint = get_array(pos, "midpoint", 3);
        const CellCoord want = unpack_cell(m.dims, cp.cell);
        const std::int32_t wc[3] = {want.x, want.y, want.z};
        for (std::size_t k = 0; k < 3; ++k) {
            if (!doubled[k].is_number_unsigned() ||
                doubled[k].get<std::uint64_t>() != static_cast<std::uint64_t>(wc[k]))
                fail("doubled coordinates do not match the cell id");
            if (!midpoint[k].is_number() || midpoint[k].get<double>() != wc[k] / 2.0)
                fail("midpoint does not match the doubled coordinates");
        }
        cp.doubled = want;
        cp.midpoint = {want.x / 2.0, want.y / 2.0, want.z / 2.0};
        cp.value = get_double(c, "value");

        if (i > 0) {
            const CriticalPoint& prev = m.critical_points.back();
            if (std::pair(prev.index, prev.cell) >= std::pair(cp.index, cp.cell))
                fail("critical points must be sorted by (index, cell)");
        }
        m.critical_points.push_back(cp);
    }

    const json& arcs = get_array(j, "arcs", 0);
    m.arcs.reserve(arcs.size());
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        const json& a = arcs[i];
        if (m.critical_points.empty()) fail("arcs without critical points");
        Arc arc;
        arc.src = static_cast<std::uint32_t>(
            get_uint(a, "src", m.critical_points.size() - 1));
        arc.dst = static_cast<std::uint32_t>(
            get_uint(a, "dst", m.critical_points.size() - 1));
        arc.multiplicity = get_uint(a, "multiplicity", ~0ull);
        if (arc.multiplicity == 0) fail("arc multiplicity must be positive");
        if (m.critical_points[arc.dst].index != m.critical_points[arc.src].index + 1)
            fail("arc endpoints must have consecutive Morse indices");
        if (i > 0) {
            const Arc& prev = m.arcs.back();
            if (std::pair(prev.src, prev.dst) >= std::pair(arc.src, arc.dst))
                fail("arcs must be sorted by (src, dst)");
        }
        m.arcs.push_back(arc);
    }
    return m;
}

std::string critical_points_csv(const MSComplex& m) {
    std::string out =
        "id,cell,index,doubled_x,doubled_y,doubled_z,midpoint_x,midpoint_y,midpoint_z,value\n";
    for (const CriticalPoint& cp : m.critical_points) {
        out += std::to_string(cp.id) + ',' + std::to_string(cp.cell) + ',' +
               std::to_string(cp.index) + ',' + std::to_string(cp.doubled.x) + ',' +
               std::to_string(cp.doubled.y) + ',' + std::to_string(cp.doubled.z) + ',';
        append_double(out, cp.midpoint[0]);
        out += ',';
        append_double(out, cp.midpoint[1]);
        out += ',';
        append_double(out, cp.midpoint[2]);
        out += ',';
        append_double(out, cp.value);
        out += '\n';
    }
    return out;
}

std::string arcs_csv(const MSComplex& m) {
    std::string out = "src,dst,multiplicity\n";
    for (const Arc& a : m.arcs)
        out += std::to_string(a.src) + ',' + std::to_string(a.dst) + ',' +
               std::to_string(a.multiplicity) + '\n';
    return out;
}

std::string label_volume_bytes(const std::vector<std::uint32_t>& labels) {
    std::string out;
    out.reserve(labels.size() * 4);
    for (const std::uint32_t v : labels) {
        out += static_cast<char>(v & 0xff);
        out += static_cast<char>((v >> 8) & 0xff);
        out += static_cast<char>((v >> 16) & 0xff);
        out += static_cast<char>((v >> 24) & 0xff);
    }
    return out;
}

}  // namespace msc3d
