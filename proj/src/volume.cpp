#include "msc3d/volume.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

namespace msc3d {

SampleType parse_sample_type(const std::string& name) {
    if (name == "u8") return SampleType::u8;
    if (name == "u16") return SampleType::u16;
    if (name == "f32") return SampleType::f32;
    if (name == "f64") return SampleType::f64;
    throw std::invalid_argument("unknown sample type '" + name + "' (want u8|u16|f32|f64)");
}

const char* sample_type_name(SampleType t) {
    switch (t) {
        case SampleType::u8: return "u8";
        case SampleType::u16: return "u16";
        case SampleType::f32: return "f32";
        default: return "f64";
    }
}

std::size_t sample_size(SampleType t) {
    switch (t) {
        case SampleType::u8: return 1;
        case SampleType::u16: return 2;
        case SampleType::f32: return 4;
        default: return 8;
    }
}

namespace {

/** Assemble one unsigned integer from width bytes in file order. */
std::uint64_t load_uint(const unsigned char* p, std::size_t width, bool big_endian) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) {
        const std::size_t byte = big_endian ? width - 1 - i : i;
        v |= static_cast<std::uint64_t>(p[byte]) << (8 * i);
    }
    return v;
}

double widen(const unsigned char* p, SampleType t, bool big_endian) {
    switch (t) {
        case SampleType::u8:
            return static_cast<double>(p[0]);
        case SampleType::u16:
            return static_cast<double>(load_uint(p, 2, big_endian));
        case SampleType::f32:
            return static_cast<double>(
                std::bit_cast<float>(static_cast<std::uint32_t>(load_uint(p, 4, big_endian))));
        default:
            return std::bit_cast<double>(load_uint(p, 8, big_endian));
    }
}

}  // namespace

ScalarField read_volume(const VolumeSpec& spec) {
    std::error_code ec;
    const std::uintmax_t actual = std::filesystem::file_size(spec.path, ec);
    if (ec) throw IoError("cannot read '" + spec.path + "': " + ec.message());

    const std::size_t width = sample_size(spec.dtype);
    const std::uint64_t want = spec.dims.vertex_count() * width;
    if (actual != want)
        throw std::invalid_argument(
            "volume size mismatch for '" + spec.path + "': file has " + std::to_string(actual) +
            " bytes, dims " + std::to_string(spec.dims.nx) + "x" + std::to_string(spec.dims.ny) +
            "x" + std::to_string(spec.dims.nz) + " " + sample_type_name(spec.dtype) + " need " +
            std::to_string(want));

    std::ifstream in(spec.path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + spec.path + "' for reading");
    std::vector<unsigned char> bytes(want);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(want));
    if (static_cast<std::uint64_t>(in.gcount()) != want)
        throw IoError("short read on '" + spec.path + "'");

    std::vector<double> values(spec.dims.vertex_count());
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = widen(bytes.data() + i * width, spec.dtype, spec.big_endian);
        if (!std::isfinite(values[i]))
            throw std::invalid_argument("volume '" + spec.path + "' holds a non-finite sample at index " +
                                        std::to_string(i));
    }
    return ScalarField(spec.dims, std::move(values));
}

void write_volume_f64(const std::string& path, const ScalarField& f) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    for (const double v : f.values) {
        const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
        out.write(reinterpret_cast<const char*>(b), 8);
    }
    out.flush();
    if (!out) throw IoError("write failed on '" + path + "'");
}

FieldKind parse_field_kind(const std::string& name) {
    if (name == "ramp") return FieldKind::ramp;
    if (name == "two-bumps") return FieldKind::two_bumps;
    if (name == "random-smooth") return FieldKind::random_smooth;
    if (name == "white-noise") return FieldKind::white_noise;
    throw std::invalid_argument("unknown field kind '" + name +
                                "' (want ramp|two-bumps|random-smooth|white-noise)");
}

namespace {

ScalarField ramp(GridDims d) {
    std::vector<double> v(d.vertex_count());
    std::size_t i = 0;
    for (std::int64_t z = 0; z < d.nz; ++z)
        for (std::int64_t y = 0; y < d.ny; ++y)
            for (std::int64_t x = 0; x < d.nx; ++x)
                v[i++] = static_cast<double>(x + 2 * y + 4 * z);
    return ScalarField(d, std::move(v));
}

ScalarField two_bumps(GridDims d) {
    const double cx1 = 0.25 * static_cast<double>(d.nx - 1);
    const double cx2 = 0.75 * static_cast<double>(d.nx - 1);
    const double cy = 0.5 * static_cast<double>(d.ny - 1);
    const double cz = 0.5 * static_cast<double>(d.nz - 1);
    const double sigma = std::max(1.0, static_cast<double>(d.nx) / 8.0);
    const double inv = 1.0 / (2.0 * sigma * sigma);

    std::vector<double> v(d.vertex_count());
    std::size_t i = 0;
    for (std::int64_t z = 0; z < d.nz; ++z)
        for (std::int64_t y = 0; y < d.ny; ++y)
            for (std::int64_t x = 0; x < d.nx; ++x) {
                const double dy = static_cast<double>(y) - cy, dz = static_cast<double>(z) - cz;
                const double r1 = (static_cast<double>(x) - cx1) * (static_cast<double>(x) - cx1) +
                                  dy * dy + dz * dz;
                const double r2 = (static_cast<double>(x) - cx2) * (static_cast<double>(x) - cx2) +
                                  dy * dy + dz * dz;
                v[i++] = std::exp(-r1 * inv) + std::exp(-r2 * inv);
            }
    return ScalarField(d, std::move(v));
}

std::vector<double> seeded_noise(GridDims d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> v(d.vertex_count());
    for (double& x : v) x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return v;
}

/** One [1/4, 1/2, 1/4] pass along an axis, boundary clamped. */
void blur_axis(std::vector<double>& v, GridDims d, int axis) {
    const std::int64_t n[3] = {d.nx, d.ny, d.nz};
    const std::int64_t stride[3] = {1, d.nx, d.nx * d.ny};
    std::vector<double> out(v.size());
    for (std::int64_t z = 0; z < d.nz; ++z)
        for (std::int64_t y = 0; y < d.ny; ++y)
            for (std::int64_t x = 0; x < d.nx; ++x) {
                const std::int64_t at = x + d.nx * (y + d.ny * z);
                const std::int64_t c[3] = {x, y, z};
                const std::int64_t lo = c[axis] > 0 ? at - stride[axis] : at;
                const std::int64_t hi = c[axis] < n[axis] - 1 ? at + stride[axis] : at;
                out[static_cast<std::size_t>(at)] =
                    0.25 * v[static_cast<std::size_t>(lo)] + 0.5 * v[static_cast<std::size_t>(at)] +
                    0.25 * v[static_cast<std::size_t>(hi)];
            }
    v.swap(out);
}

}  // namespace

ScalarField generate_field(FieldKind kind, GridDims dims, std::uint64_t seed) {
    switch (kind) {
        case FieldKind::ramp:
            return ramp(dims);
        case FieldKind::two_bumps:
            return two_bumps(dims);
        case FieldKind::white_noise:
            return ScalarField(dims, seeded_noise(dims, seed));
        default: {
            std::vector<double> v = seeded_noise(dims, seed);
            for (int pass = 0; pass < 2; ++pass)
                for (int axis = 0; axis < 3; ++axis) blur_axis(v, dims, axis);
            return ScalarField(dims, std::move(v));
        }
    }
}

}  // namespace msc3d
