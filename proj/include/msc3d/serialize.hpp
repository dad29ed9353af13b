#pragma once

/*
 * On-disk formats for the complex.
 *
 * JSON carries the full 1-skeleton plus provenance and round-trips
 * exactly (doubles are printed shortest-round-trip).  CSV is a flat
 * export of the same two tables.  Label volumes are raw little-endian
 * 32-bit ids, x-fastest, one file per extremum dimension — they are too
 * large for a text format and never travel inside the JSON document.
 */

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "msc3d/msc.hpp"

namespace msc3d {

/** Rejected input; byte_offset locates the first offending byte when the
 *  document is not even JSON, and is 0 for schema-level violations. */
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what), byte_offset(offset) {}

    std::size_t byte_offset = 0;
};

std::string serialize_json(const MSComplex& m);

/** Parse and fully validate a document produced by serialize_json.
 *  Throws ParseError; never returns a partially filled complex. */
MSComplex deserialize_json(std::string_view bytes);

/** Tables as CSV, fixed column order, one header line each. */
std::string critical_points_csv(const MSComplex& m);
std::string arcs_csv(const MSComplex& m);

/** Raw little-endian encoding of one label volume. */
std::string label_volume_bytes(const std::vector<std::uint32_t>& labels);

}  // namespace msc3d
