#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "msc3d/grid.hpp"
#include "msc3d/msc.hpp"
#include "msc3d/volume.hpp"
#include "oracles.hpp"

using namespace msc3d;

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

void write_bytes(const std::string& path, const std::vector<unsigned char>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

struct FileGuard {
    std::string path;
    ~FileGuard() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("sample type and kind names parse both ways") {
    for (const char* name : {"u8", "u16", "f32", "f64"})
        CHECK(sample_type_name(parse_sample_type(name)) == std::string(name));
    CHECK_THROWS_AS((void)parse_sample_type("i32"), std::invalid_argument);
    CHECK(sample_size(SampleType::u8) == 1);
    CHECK(sample_size(SampleType::u16) == 2);
    CHECK(sample_size(SampleType::f32) == 4);
    CHECK(sample_size(SampleType::f64) == 8);

    CHECK(parse_field_kind("ramp") == FieldKind::ramp);
    CHECK(parse_field_kind("two-bumps") == FieldKind::two_bumps);
    CHECK(parse_field_kind("random-smooth") == FieldKind::random_smooth);
    CHECK(parse_field_kind("white-noise") == FieldKind::white_noise);
    CHECK_THROWS_AS((void)parse_field_kind("bumps"), std::invalid_argument);
}

TEST_CASE("f64 volume write/read round-trip") {
    const GridDims dims(5, 4, 3);
    const ScalarField f = oracle::random_field(dims, 201);
    const FileGuard guard{temp_path("msc3d_roundtrip.raw")};
    write_volume_f64(guard.path, f);

    VolumeSpec spec;
    spec.path = guard.path;
    spec.dims = dims;
    spec.dtype = SampleType::f64;
    const ScalarField back = read_volume(spec);
    CHECK(back.dims == dims);
    CHECK(back.values == f.values);
}

TEST_CASE("integer and f32 samples widen exactly, both endiannesses") {
    const GridDims dims(2, 2, 2);
    VolumeSpec spec;
    spec.dims = dims;

    {
        const FileGuard guard{temp_path("msc3d_u8.raw")};
        write_bytes(guard.path, {0, 1, 2, 3, 250, 251, 252, 253});
        spec.path = guard.path;
        spec.dtype = SampleType::u8;
        const ScalarField f = read_volume(spec);
        CHECK(f.values == std::vector<double>{0, 1, 2, 3, 250, 251, 252, 253});
    }

    {
        // 0x0102 = 258 little-endian; the same bytes big-endian read 0x0201.
        const FileGuard guard{temp_path("msc3d_u16.raw")};
        std::vector<unsigned char> bytes;
        for (int i = 0; i < 8; ++i) {
            bytes.push_back(0x02);
            bytes.push_back(0x01);
        }
        write_bytes(guard.path, bytes);
        spec.path = guard.path;
        spec.dtype = SampleType::u16;
        spec.big_endian = false;
        CHECK(read_volume(spec).values == std::vector<double>(8, 258.0));
        spec.big_endian = true;
        CHECK(read_volume(spec).values == std::vector<double>(8, 513.0));
        spec.big_endian = false;
    }

    {
        // 1.5f = 0x3FC00000.
        const FileGuard guard{temp_path("msc3d_f32.raw")};
        std::vector<unsigned char> bytes;
        for (int i = 0; i < 8; ++i)
            for (const unsigned char b : {0x00, 0x00, 0xC0, 0x3F}) bytes.push_back(b);
        write_bytes(guard.path, bytes);
        spec.path = guard.path;
        spec.dtype = SampleType::f32;
        CHECK(read_volume(spec).values == std::vector<double>(8, 1.5));
    }
}

TEST_CASE("volume loading failures are told apart") {
    VolumeSpec spec;
    spec.dims = GridDims(4, 4, 4);
    spec.dtype = SampleType::u8;

    spec.path = temp_path("msc3d_does_not_exist.raw");
    CHECK_THROWS_AS((void)read_volume(spec), IoError);

    const FileGuard guard{temp_path("msc3d_short.raw")};
    write_bytes(guard.path, std::vector<unsigned char>(63, 7));  // need 64
    spec.path = guard.path;
    CHECK_THROWS_AS((void)read_volume(spec), std::invalid_argument);

    // Non-finite samples are rejected at ingestion: comparisons on NaN
    // would silently break the whole ordering machinery.
    const FileGuard nan_guard{temp_path("msc3d_nan.raw")};
    std::vector<unsigned char> bytes(8 * 8, 0);
    bytes[7] = 0x7f;
    bytes[6] = 0xf8;  // quiet NaN in the first f64
    write_bytes(nan_guard.path, bytes);
    VolumeSpec nan_spec;
    nan_spec.path = nan_guard.path;
    nan_spec.dims = GridDims(2, 2, 2);
    nan_spec.dtype = SampleType::f64;
    CHECK_THROWS_AS((void)read_volume(nan_spec), std::invalid_argument);
}

TEST_CASE("generated fields are deterministic and well-formed") {
    const GridDims dims(8, 8, 8);

    // ramp matches its closed form.
    const ScalarField r = generate_field(FieldKind::ramp, dims, 99);
    std::size_t i = 0;
    bool ramp_ok = true;
    for (std::int64_t z = 0; z < dims.nz; ++z)
        for (std::int64_t y = 0; y < dims.ny; ++y)
            for (std::int64_t x = 0; x < dims.nx; ++x)
                ramp_ok = ramp_ok && r.values[i++] == static_cast<double>(x + 2 * y + 4 * z);
    CHECK(ramp_ok);

    // Seeded kinds: same seed same field, different seed different field.
    for (const FieldKind kind : {FieldKind::white_noise, FieldKind::random_smooth}) {
        const ScalarField a = generate_field(kind, dims, 5);
        const ScalarField b = generate_field(kind, dims, 5);
        const ScalarField c = generate_field(kind, dims, 6);
        CHECK(a.values == b.values);
        CHECK(a.values != c.values);
        for (const double v : a.values) {
            CHECK(v >= 0.0);
            CHECK(v < 1.0);
        }
    }

    // Blurring must actually smooth: neighbor jumps shrink a lot.
    const ScalarField noise = generate_field(FieldKind::white_noise, dims, 5);
    const ScalarField smooth = generate_field(FieldKind::random_smooth, dims, 5);
    const auto mean_jump = [&](const ScalarField& f) {
        double sum = 0;
        std::size_t n = 0;
        for (std::size_t v = 0; v + 1 < f.values.size(); ++v, ++n)
            sum += std::abs(f.values[v + 1] - f.values[v]);
        return sum / static_cast<double>(n);
    };
    CHECK(mean_jump(smooth) < 0.5 * mean_jump(noise));
}

TEST_CASE("two-bumps carries exactly two maxima") {
    for (const std::int64_t n : {16, 32}) {
        const MSComplex m =
            compute(generate_field(FieldKind::two_bumps, GridDims(n, n, n), 0));
        CHECK(m.count_by_index(3) == 2);
        CHECK(m.euler() == 1);
    }
}

TEST_CASE("generate-write-read-compute pipeline holds together") {
    const GridDims dims(8, 8, 8);
    const ScalarField f = generate_field(FieldKind::white_noise, dims, 11);
    const FileGuard guard{temp_path("msc3d_pipeline.raw")};
    write_volume_f64(guard.path, f);

    VolumeSpec spec;
    spec.path = guard.path;
    spec.dims = dims;
    spec.dtype = SampleType::f64;
    const MSComplex m = compute(read_volume(spec));
    CHECK(m.euler() == 1);
    CHECK(m.input_hash == field_hash(f));
}
