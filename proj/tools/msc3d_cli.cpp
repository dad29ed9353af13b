#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "msc3d/msc.hpp"
#include "msc3d/serialize.hpp"
#include "msc3d/volume.hpp"

namespace {

using namespace msc3d;

void write_text(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("write failed on '" + path + "'");
}

void print_timings(const StageTimings& t) {
    std::fprintf(stderr, "stage         seconds\n");
    std::fprintf(stderr, "gradient      %9.3f\n", t.gradient);
    std::fprintf(stderr, "critical      %9.3f\n", t.critical);
    std::fprintf(stderr, "extrema       %9.3f\n", t.extrema);
    std::fprintf(stderr, "reachability  %9.3f\n", t.reachability);
    std::fprintf(stderr, "counting      %9.3f\n", t.counting);
}

int run_generate(const std::string& kind, const std::vector<std::int64_t>& dims,
                 const std::string& out, std::uint64_t seed) {
    const GridDims gd(dims[0], dims[1], dims[2]);
    write_volume_f64(out, generate_field(parse_field_kind(kind), gd, seed));
    std::fprintf(stderr, "wrote %s: %s %lldx%lldx%lld f64 little-endian\n", out.c_str(),
                 kind.c_str(), static_cast<long long>(gd.nx), static_cast<long long>(gd.ny),
                 static_cast<long long>(gd.nz));
    return 0;
}

int run_compute(const VolumeSpec& spec, const std::string& out, const std::string& format,
                const std::string& labels_prefix, bool check, int threads) {
    const ScalarField f = read_volume(spec);

    StageTimings timings;
    ComputeOptions opt;
    opt.threads = threads;
    opt.with_segmentation = !labels_prefix.empty();
    opt.validate = check;
    opt.source_dtype = sample_type_name(spec.dtype);
    opt.timings = &timings;
    const MSComplex m = compute(f, opt);

    print_timings(timings);
    std::fprintf(stderr,
                 "critical points: %zu (minima %llu, 1-saddles %llu, 2-saddles %llu, "
                 "maxima %llu); arcs: %zu\n",
                 m.critical_points.size(), static_cast<unsigned long long>(m.count_by_index(0)),
                 static_cast<unsigned long long>(m.count_by_index(1)),
                 static_cast<unsigned long long>(m.count_by_index(2)),
                 static_cast<unsigned long long>(m.count_by_index(3)), m.arcs.size());

    if (check) {
        // Gradient matching/acyclicity already ran inside compute.
        bool ok = true;
        if (m.euler() != 1) {
            std::fprintf(stderr, "check: Euler characteristic is %lld, want 1\n",
                         static_cast<long long>(m.euler()));
            ok = false;
        }
        const BoundaryReport report = boundary_check(m);
        if (!report.ok()) {
            std::fprintf(stderr, "check: %zu critical point pairs fail mod-2 boundary consistency\n",
                         report.odd_pairs.size());
            ok = false;
        }
        std::fprintf(stderr, "check: gradient ok, euler %s, boundary %s\n",
                     m.euler() == 1 ? "ok" : "BAD", report.ok() ? "ok" : "BAD");
        if (!ok) return 3;
    }

    if (format == "json") {
        write_text(out, serialize_json(m));
    } else {
        write_text(out + "_critical_points.csv", critical_points_csv(m));
        write_text(out + "_arcs.csv", arcs_csv(m));
    }
    if (!labels_prefix.empty()) {
        write_text(labels_prefix + "_min.raw", label_volume_bytes(m.labels->vertex_to_min));
        write_text(labels_prefix + "_max.raw", label_volume_bytes(m.labels->cube_to_max));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"combinatorial Morse-Smale complex of a regular-grid scalar volume"};
    app.require_subcommand(0, 1);

    std::string input, out, format = "json", dtype = "f64", labels_prefix;
    std::vector<std::int64_t> dims;
    bool big_endian = false, check = false;
    int threads = 0;
    std::uint64_t seed = 0;

    app.add_option("--input", input, "raw volume file, x-fastest samples");
    app.add_option("--dims", dims, "grid vertices per axis: NX NY NZ")->expected(3);
    app.add_option("--dtype", dtype, "sample type")
        ->check(CLI::IsMember({"u8", "u16", "f32", "f64"}));
    app.add_flag("--big-endian", big_endian, "samples are big-endian (default little)");
    app.add_option("--out", out, "output path: the JSON file, or the prefix for CSV");
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--labels", labels_prefix,
                   "also write <prefix>_min.raw / <prefix>_max.raw segmentation volumes");
    app.add_flag("--check", check, "audit the gradient, Euler and mod-2 boundary sums");
    app.add_option("--threads", threads, "worker threads, 0 = all hardware")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--seed", seed, "accepted for symmetry; only generate uses seeds");

    auto* gen = app.add_subcommand("generate", "write a synthetic volume as f64 little-endian");
    std::string kind;
    std::vector<std::int64_t> gen_dims;
    std::string gen_out;
    std::uint64_t gen_seed = 0;
    gen->add_option("--kind", kind, "field kind")
        ->required()
        ->check(CLI::IsMember({"ramp", "two-bumps", "random-smooth", "white-noise"}));
    gen->add_option("--dims", gen_dims, "grid vertices per axis: NX NY NZ")
        ->required()
        ->expected(3);
    gen->add_option("--out", gen_out, "output volume path")->required();
    gen->add_option("--seed", gen_seed, "noise seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) return run_generate(kind, gen_dims, gen_out, gen_seed);

        if (input.empty() || out.empty() || dims.size() != 3) {
            std::fprintf(stderr, "usage: need --input, --dims and --out (or the generate subcommand); see --help\n");
            return 1;
        }
        VolumeSpec spec;
        spec.path = input;
        spec.dims = GridDims(dims[0], dims[1], dims[2]);
        spec.dtype = parse_sample_type(dtype);
        spec.big_endian = big_endian;
        return run_compute(spec, out, format, labels_prefix, check, threads);
    } catch (const IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return 2;
    } catch (const std::overflow_error& e) {
        std::fprintf(stderr, "overflow: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return 3;
    }
}
