/*
 * Copyright 2026 The Schrodiff Authors
 * This file is licensed to you under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License. You may obtain a copy
 * of the License at http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software distributed under
 * the License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR REPRESENTATIONS
 * OF ANY KIND, either express or implied. See the License for the specific language
 * governing permissions and limitations under the License.
 */

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "schrodiff/atomic_file.hpp"
#include "schrodiff/mesh_io.hpp"
#include "schrodiff/retrieval.hpp"

namespace {

using namespace schrodiff;

int log_level() {
    static const int level = [] {
        const char* raw = std::getenv("SCHRODIFF_LOG");
        return raw ? std::atoi(raw) : 0;
    }();
    return level;
}

void info(const std::string& message) {
    if (log_level() >= 1) std::fprintf(stderr, "[schrodiff] %s\n", message.c_str());
}

// Documented exit-code map, stable for scripting.
int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::parse: return 1;
        case ErrorKind::assembly: return 2;
        case ErrorKind::eigensolve: return 3;
        case ErrorKind::io: return 4;
        case ErrorKind::bin_mismatch: return 5;
        case ErrorKind::empty_database: return 6;
        case ErrorKind::hypothesis_violated: return 7;
    }
    return 70;
}

// Raw flag values; "auto" sentinels are resolved in to_config.
struct Options {
    double s_factor = 0.2;
    std::string potential = "log_grad";
    double alpha = 1.0;
    std::string beta = "auto";
    int k = 100;
    std::string time = "auto";
    int samples = 100;
    int bins = 120;
    std::string range = "auto";
    int jobs = 1;
};

void add_pipeline_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--s-factor", o.s_factor,
                    "Gaussian bandwidth as a multiple of the median edge length")
        ->capture_default_str();
    cmd->add_option("--potential", o.potential,
                    "Potential kind: none, raw, log_raw, grad, log_grad")
        ->capture_default_str();
    cmd->add_option("--alpha", o.alpha, "Potential strength multiplier")->capture_default_str();
    cmd->add_option("--beta", o.beta, "Log-potential contrast, 'auto' = 1/mean positive |grad I|")
        ->capture_default_str();
    cmd->add_option("--k", o.k, "Number of eigenpairs (clamped to the vertex count)")
        ->capture_default_str();
    cmd->add_option("--time", o.time, "Diffusion time, 'auto' = ln 2 / (2 lambda_2)")
        ->capture_default_str();
    cmd->add_option("--samples", o.samples, "Farthest-point sample count")->capture_default_str();
    cmd->add_option("--bins", o.bins, "Histogram bin count")->capture_default_str();
    cmd->add_option("--range", o.range, "Histogram range, 'auto' = per-shape maximum distance")
        ->capture_default_str();
    cmd->add_option("--jobs", o.jobs, "Worker thread cap for batch commands")
        ->capture_default_str();
}

[[noreturn]] void usage_error(const std::string& what) {
    throw Error(ErrorKind::parse, "Usage", what);
}

double parse_real(const std::string& text, const char* flag) {
    try {
        size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        usage_error(std::string(flag) + " expects 'auto' or a real number, got '" + text + "'");
    }
}

PipelineConfig to_config(const Options& o) {
    PipelineConfig config;
    if (o.s_factor <= 0.0) usage_error("--s-factor must be positive");
    config.s_factor = o.s_factor;

    const auto kind = potential_kind_from_string(o.potential);
    if (!kind) usage_error("unknown potential kind '" + o.potential + "'");
    config.potential.kind = *kind;
    if (o.alpha < 0.0) usage_error("--alpha must be nonnegative");
    config.potential.alpha = o.alpha;
    if (o.beta == "auto") {
        config.potential.beta = std::nullopt;
    } else {
        const double beta = parse_real(o.beta, "--beta");
        if (beta <= 0.0) usage_error("--beta must be positive");
        config.potential.beta = beta;
    }

    if (o.k < 1) usage_error("--k must be at least 1");
    config.k = o.k;
    if (o.time == "auto") {
        config.time = DiffusionTime::automatic();
    } else {
        const double t = parse_real(o.time, "--time");
        if (t < 0.0) usage_error("--time must be nonnegative");
        config.time = DiffusionTime::fixed(t);
    }
    if (o.samples < 1) usage_error("--samples must be at least 1");
    config.samples = o.samples;
    if (o.bins < 2) usage_error("--bins must be at least 2");
    config.bins = o.bins;
    if (o.range == "auto") {
        config.fixed_range = std::nullopt;
    } else {
        const double r = parse_real(o.range, "--range");
        if (r <= 0.0) usage_error("--range must be positive");
        config.fixed_range = r;
    }
    if (o.jobs < 1) usage_error("--jobs must be at least 1");
    config.jobs = o.jobs;
    return config;
}

void write_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        write_file_atomically(out_path, text);
        info("wrote " + out_path);
    }
}

void cmd_signature(const std::string& mesh_path, const std::string& out_path,
                   const PipelineConfig& config) {
    const TriangleMesh mesh = load_mesh(mesh_path);
    info("loaded " + mesh_path + ": " + std::to_string(mesh.vertex_count()) + " vertices, " +
         std::to_string(mesh.triangle_count()) + " triangles");
    const DiffusionSignature sig = compute_signature(mesh, config);
    info("signature: t = " + std::to_string(sig.t) + ", d_max = " + std::to_string(sig.d_max));
    save_signature(sig, out_path);
    info("wrote " + out_path);
}

void cmd_compare(const std::string& path_a, const std::string& path_b, bool normalized) {
    const DiffusionSignature a = load_signature(path_a);
    const DiffusionSignature b = load_signature(path_b);
    std::printf("%.15g\n", emd_1d(a, b, normalized));
}

void cmd_retrieve(const std::string& manifest_path, const std::string& out_dir,
                  const PipelineConfig& config) {
    const auto manifest = read_manifest(manifest_path);
    info("manifest lists " + std::to_string(manifest.size()) + " shapes");
    const ShapeDatabase db = build_database(manifest, config);
    for (const auto& f : db.failures)
        std::fprintf(stderr, "warning: skipped %s (%s stage): %s\n", f.path.c_str(),
                     f.stage.c_str(), f.message.c_str());

    RetrievalReport report = pairwise_matrix(db);
    evaluate(report);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());

    const std::filesystem::path dir(out_dir);
    save_report(report, dir / "report.json");
    write_file_atomically(dir / "matrix.pgm", matrix_to_pgm(report.distances));
    const std::string table = metrics_to_text(report.metrics, static_cast<int>(db.entries.size()));
    write_file_atomically(dir / "metrics.txt", table);
    std::fputs(table.c_str(), stdout);
}

void cmd_stability(const std::string& mesh_path, const PipelineConfig& config,
                   std::vector<double> eps_list) {
    constexpr int kSteps = 2048;
    const TriangleMesh mesh = load_mesh(mesh_path);
    const int n = mesh.vertex_count();
    const auto laplacian = assemble_mesh_laplacian(mesh, config.s_factor);

    const VertexScalarField texture = luminance(mesh);
    VertexScalarField V = VertexScalarField::zero(n);
    double beta = 0.0;
    if (config.potential.uses_texture()) {
        auto built = build_potential(mesh, &texture, config.potential);
        V = std::move(built.field);
        beta = built.resolved_beta;
    }
    const auto H = assemble_schrodinger(laplacian, V, config.potential.kind,
                                        config.potential.alpha, beta);
    const auto dec = eigendecompose(H, std::min(config.k, n));
    const double t = config.time.resolve(dec);
    const VertexScalarField N = gradient_norm_field(mesh, texture);

    const int seed = farthest_point_sample(mesh, 1).vertex_ids[0];
    VertexScalarField u0 = VertexScalarField::zero(n);
    u0[seed] = 1.0;
    info("t = " + std::to_string(t) + ", seed vertex = " + std::to_string(seed));

    const auto rows = stability_experiment(laplacian, V, N, std::move(eps_list), u0, t, kSteps);

    std::printf("%-14s %-22s %s\n", "eps", "error", "slope");
    for (size_t i = 0; i < rows.size(); ++i) {
        char slope[32] = "--";
        if (i > 0) {
            const auto& p = rows[i - 1];
            const auto& r = rows[i];
            if (p.eps > 0 && r.eps > 0 && p.error > 0 && r.error > 0 && p.eps != r.eps)
                std::snprintf(slope, sizeof slope, "%.6f",
                              std::log(p.error / r.error) / std::log(p.eps / r.eps));
            else
                std::snprintf(slope, sizeof slope, "n/a");
        }
        std::printf("%-14.6e %-22.12e %s\n", rows[i].eps, rows[i].error, slope);
    }
    const double fit = log_log_slope(rows);
    if (std::isfinite(fit))
        std::printf("least-squares slope: %.6f\n", fit);
    else
        std::printf("least-squares slope: n/a\n");
}

void cmd_dump_operator(const std::string& mesh_path, const std::string& out_path,
                       const PipelineConfig& config) {
    const TriangleMesh mesh = load_mesh(mesh_path);
    const auto H = build_operator(mesh, config);
    std::ostringstream os;
    dump_operator(H, os);
    write_text(os.str(), out_path);
}

void cmd_dump_distance_map(const std::string& mesh_path, const std::string& out_path,
                           const PipelineConfig& config, int source, bool kernel) {
    const TriangleMesh mesh = load_mesh(mesh_path);
    const int n = mesh.vertex_count();
    const auto H = build_operator(mesh, config);
    const auto dec = eigendecompose(H, std::min(config.k, n));
    const double t = config.time.resolve(dec);

    int x = source;
    if (x < 0) x = farthest_point_sample(mesh, 1).vertex_ids[0];
    if (x >= n) usage_error("--source " + std::to_string(x) + " out of range [0, " +
                            std::to_string(n) + ")");
    info("time " + std::to_string(t) + ", source vertex " + std::to_string(x));

    const VertexScalarField field = kernel ? kernel_slice(dec, t, x) : distance_map(dec, t, x);
    std::ostringstream os;
    write_field_dump(field, os);
    write_text(os.str(), out_path);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"schrodiff: texture-aware Schrodinger diffusion signatures for shape retrieval"};
    app.require_subcommand(1);
    Options o;

    std::string mesh_path, out_path, path_a, path_b;
    bool normalized = false;
    bool kernel = false;
    int source = -1;
    std::vector<double> eps_list = {1e-1, 1e-2, 1e-3, 1e-4};

    auto* sig = app.add_subcommand("signature", "Compute a diffusion-distance signature");
    sig->add_option("mesh", mesh_path, "Input mesh (.off/.coff/.ply/.obj)")->required();
    sig->add_option("-o,--out", out_path, "Output signature JSON")->required();
    add_pipeline_flags(sig, o);

    auto* cmp = app.add_subcommand("compare", "Earth mover's distance between two signatures");
    cmp->add_option("a", path_a, "First signature JSON")->required();
    cmp->add_option("b", path_b, "Second signature JSON")->required();
    cmp->add_flag("--normalized", normalized, "Divide by (bins - 1) to land in [0, 1]");

    auto* ret = app.add_subcommand("retrieve", "Pairwise distances and retrieval metrics");
    ret->add_option("manifest", mesh_path, "Manifest of 'path<TAB>label' lines")->required();
    ret->add_option("-o,--out", out_path, "Output directory")->required();
    add_pipeline_flags(ret, o);

    auto* stab = app.add_subcommand("stability", "Potential-perturbation stability experiment");
    stab->add_option("mesh", mesh_path, "Input mesh (textured)")->required();
    stab->add_option("--eps", eps_list, "Perturbation magnitudes")->capture_default_str();
    add_pipeline_flags(stab, o);

    auto* dop = app.add_subcommand("dump-operator", "Dump the operator as 'i j value' triplets");
    dop->add_option("mesh", mesh_path, "Input mesh")->required();
    dop->add_option("-o,--out", out_path, "Output text file (stdout if omitted)");
    add_pipeline_flags(dop, o);

    auto* dmap = app.add_subcommand("dump-distance-map",
                                    "Dump per-vertex diffusion distances from one source");
    dmap->add_option("mesh", mesh_path, "Input mesh")->required();
    dmap->add_option("-o,--out", out_path, "Output text file (stdout if omitted)");
    dmap->add_option("--source", source, "Source vertex id (default: the FPS seed)")
        ->capture_default_str();
    dmap->add_flag("--kernel", kernel, "Dump the kernel slice h_t(x, .) instead of distances");
    add_pipeline_flags(dmap, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints the message or the help text
        return code == 0 ? 0 : 1;     // usage problems share the parse exit code
    }

    try {
        if (sig->parsed()) cmd_signature(mesh_path, out_path, to_config(o));
        if (cmp->parsed()) cmd_compare(path_a, path_b, normalized);
        if (ret->parsed()) cmd_retrieve(mesh_path, out_path, to_config(o));
        if (stab->parsed()) cmd_stability(mesh_path, to_config(o), eps_list);
        if (dop->parsed()) cmd_dump_operator(mesh_path, out_path, to_config(o));
        if (dmap->parsed()) cmd_dump_distance_map(mesh_path, out_path, to_config(o), source, kernel);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 70;
    }
    return 0;
}
