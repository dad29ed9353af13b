#pragma once

/*
 * Raw-volume ingestion and synthetic test fields.
 *
 * Volumes are headerless sample arrays, x-fastest, described entirely by
 * flags (dims, sample type, endianness) in the Open SciVis style.  All
 * samples widen to double on load.  Generated fields are deterministic
 * functions of (kind, dims, seed) and are written as little-endian f64.
 */

#include <cstdint>
#include <stdexcept>
#include <string>

#include "msc3d/grid.hpp"

namespace msc3d {

/** Filesystem trouble: missing input, unreadable/unwritable path. */
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class SampleType : std::uint8_t { u8, u16, f32, f64 };

/** Parse "u8" / "u16" / "f32" / "f64"; throws std::invalid_argument. */
SampleType parse_sample_type(const std::string& name);
const char* sample_type_name(SampleType t);
std::size_t sample_size(SampleType t);

struct VolumeSpec {
    std::string path;
    GridDims dims;
    SampleType dtype = SampleType::f64;
    bool big_endian = false;
};

/** Load a raw volume.  Throws IoError when the file cannot be read and
 *  std::invalid_argument when its size is not dims * sample size. */
ScalarField read_volume(const VolumeSpec& spec);

/** Write samples as little-endian f64, x-fastest. */
void write_volume_f64(const std::string& path, const ScalarField& f);

enum class FieldKind : std::uint8_t { ramp, two_bumps, random_smooth, white_noise };

/** Parse "ramp" / "two-bumps" / "random-smooth" / "white-noise". */
FieldKind parse_field_kind(const std::string& name);

/** Deterministic synthetic field.  ramp and two_bumps ignore the seed:
 *  ramp is x + 2y + 4z; two_bumps is a pair of equal Gaussians centered
 *  at 25% and 75% of the x extent.  random_smooth is seeded noise
 *  blurred twice per axis with the [1/4, 1/2, 1/4] kernel; white_noise
 *  is raw seeded uniforms in [0, 1). */
ScalarField generate_field(FieldKind kind, GridDims dims, std::uint64_t seed);

}  // namespace msc3d
