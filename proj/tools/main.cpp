#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "lapmet/edge_file.hpp"
#include "lapmet/energy.hpp"
#include "lapmet/laplace.hpp"
#include "lapmet/mesh.hpp"
#include "lapmet/metric.hpp"
#include "lapmet/recover.hpp"

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitInputError = 2;

lapmet::PolyhedralMetric resolve_metric(const lapmet::LoadedMesh& loaded,
                                        const std::string& metric_path) {
    if (!metric_path.empty()) {
        return lapmet::read_metric_file(metric_path, loaded.mesh);
    }
    if (loaded.positions.empty()) {
        throw std::invalid_argument(
            "mesh has no vertex positions and no metric file was given");
    }
    return lapmet::induced_metric(loaded.mesh, loaded.positions);
}

void print_value(const char* label, double value) {
    std::printf("%s: %.17g\n", label, value);
}

int cmd_weights(const std::string& mesh_path, const std::string& metric_path,
                const std::string& output) {
    const lapmet::LoadedMesh loaded = lapmet::load_obj(mesh_path);
    const lapmet::PolyhedralMetric metric = resolve_metric(loaded, metric_path);
    const lapmet::EdgeWeights weights =
        lapmet::cotangent_weights(loaded.mesh, metric);
    lapmet::write_weight_file(output, loaded.mesh, weights);
    std::printf("edges: %d\n", loaded.mesh.edge_count());
    print_value("min weight", weights.w.minCoeff());
    print_value("max weight", weights.w.maxCoeff());
    return kExitSuccess;
}

int cmd_laplacian(const std::string& mesh_path, const std::string& metric_path,
                  const std::string& output) {
    const lapmet::LoadedMesh loaded = lapmet::load_obj(mesh_path);
    const lapmet::PolyhedralMetric metric = resolve_metric(loaded, metric_path);
    if (!lapmet::is_connected(loaded.mesh)) {
        std::fprintf(stderr,
                     "warning: mesh is disconnected; eigenvalue 0 has "
                     "multiplicity greater than 1\n");
    }
    const lapmet::LaplaceMatrix laplace = lapmet::laplace_matrix(
        loaded.mesh, lapmet::cotangent_weights(loaded.mesh, metric));
    lapmet::write_matrix_market(output, laplace);
    std::printf("vertices: %d\n", loaded.mesh.vertex_count);
    std::printf("nonzeros: %d\n",
                static_cast<int>(laplace.matrix.nonZeros()));
    return kExitSuccess;
}

int cmd_heat_kernel(const std::string& mesh_path,
                    const std::string& metric_path, double t,
                    const std::string& output) {
    const lapmet::LoadedMesh loaded = lapmet::load_obj(mesh_path);
    const lapmet::PolyhedralMetric metric = resolve_metric(loaded, metric_path);
    const lapmet::LaplaceMatrix laplace = lapmet::laplace_matrix(
        loaded.mesh, lapmet::cotangent_weights(loaded.mesh, metric));
    const lapmet::SpectralData spectral =
        lapmet::spectral_decomposition(laplace);
    const lapmet::HeatKernelMatrix kernel = lapmet::heat_kernel(spectral, t);
    lapmet::write_heat_kernel(output, kernel);
    std::printf("vertices: %d\n", loaded.mesh.vertex_count);
    print_value("t", t);
    return kExitSuccess;
}

void write_report_json(const std::string& path,
                       const lapmet::SolveReport& report) {
    nlohmann::json j;
    j["converged"] = report.converged;
    j["iterations"] = report.iterations;
    j["final_gradient_norm"] = report.final_gradient_norm;
    j["stop_reason"] = report.stop_reason;
    j["energy_trace"] = report.energy_trace;
    j["gradient_norms"] = report.gradient_norms;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

int cmd_recover(const std::string& mesh_path, const std::string& weights_path,
                const std::string& output, const std::string& report_path,
                const std::string& init_path, double tol, int max_iters,
                bool gradient_descent) {
    const lapmet::LoadedMesh loaded = lapmet::load_obj(mesh_path);
    const lapmet::EdgeWeights target =
        lapmet::read_weight_file(weights_path, loaded.mesh);

    lapmet::SolverOptions opts;
    opts.gradient_tolerance = tol;
    opts.max_iterations = max_iters;
    opts.gradient_descent = gradient_descent;
    if (!init_path.empty()) {
        const lapmet::PolyhedralMetric init =
            lapmet::read_metric_file(init_path, loaded.mesh);
        opts.initial_u = lapmet::to_u(init).values;
    }

    const lapmet::SolveReport report =
        lapmet::recover_metric(loaded.mesh, target, opts);
    lapmet::write_metric_file(output, loaded.mesh,
                              lapmet::from_u(report.recovered));
    if (!report_path.empty()) {
        write_report_json(report_path, report);
    }
    std::printf("converged: %s\n", report.converged ? "true" : "false");
    std::printf("iterations: %d\n", report.iterations);
    print_value("final gradient norm", report.final_gradient_norm);
    std::printf("stop reason: %s\n", report.stop_reason.c_str());
    return report.converged ? kExitSuccess : kExitVerificationFailure;
}

int cmd_verify(const std::string& reference_path,
               const std::string& recovered_path, double threshold) {
    std::ifstream ref_in(reference_path);
    if (!ref_in) {
        throw std::runtime_error("cannot open metric file: " + reference_path);
    }
    std::ifstream rec_in(recovered_path);
    if (!rec_in) {
        throw std::runtime_error("cannot open metric file: " + recovered_path);
    }
    const auto ref_lines = lapmet::read_edge_value_lines(ref_in);
    const auto rec_lines = lapmet::read_edge_value_lines(rec_in);
    if (ref_lines.size() != rec_lines.size()) {
        throw std::invalid_argument("metric files have different edge counts");
    }
    lapmet::PolyhedralMetric reference, recovered;
    reference.lengths.resize(static_cast<int>(ref_lines.size()));
    recovered.lengths.resize(static_cast<int>(rec_lines.size()));
    for (int k = 0; k < static_cast<int>(ref_lines.size()); ++k) {
        if (ref_lines[k].vi != rec_lines[k].vi ||
            ref_lines[k].vj != rec_lines[k].vj) {
            throw std::invalid_argument("metric files list different edges");
        }
        reference.lengths[k] = ref_lines[k].value;
        recovered.lengths[k] = rec_lines[k].value;
    }
    const lapmet::ScalingReport scaling =
        lapmet::verify_scaling(recovered, reference);
    print_value("scale", scaling.scale);
    print_value("max relative deviation", scaling.max_relative_deviation);
    return scaling.max_relative_deviation <= threshold
               ? kExitSuccess
               : kExitVerificationFailure;
}

int cmd_double_cover(const std::string& mesh_path, const std::string& output,
                     const std::string& correspondence_path) {
    const lapmet::LoadedMesh loaded = lapmet::load_obj(mesh_path);
    const lapmet::DoubleCover cover = lapmet::double_cover(loaded.mesh);

    lapmet::VertexPositions cover_positions;
    if (!loaded.positions.empty()) {
        cover_positions.coords.resize(cover.mesh.vertex_count);
        for (int v = 0; v < cover.mesh.vertex_count; ++v) {
            cover_positions.coords[v] =
                loaded.positions.coords[cover.vertex_origin[v]];
        }
    } else {
        cover_positions.coords.assign(cover.mesh.vertex_count,
                                      {0.0, 0.0, 0.0});
    }

    std::ofstream obj_out(output);
    if (!obj_out) throw std::runtime_error("cannot open for writing: " + output);
    lapmet::write_obj(obj_out, cover.mesh, cover_positions);

    const std::string corr_path =
        correspondence_path.empty() ? output + ".corr" : correspondence_path;
    std::ofstream corr_out(corr_path);
    if (!corr_out) {
        throw std::runtime_error("cannot open for writing: " + corr_path);
    }
    for (int e = 0; e < static_cast<int>(cover.edge_map.size()); ++e) {
        corr_out << e;
        for (const int ce : cover.edge_map[e]) corr_out << ' ' << ce;
        corr_out << '\n';
    }

    std::printf("cover vertices: %d\n", cover.mesh.vertex_count);
    std::printf("cover edges: %d\n", cover.mesh.edge_count());
    std::printf("cover faces: %d\n", cover.mesh.face_count());
    std::printf("cover euler characteristic: %d\n",
                lapmet::euler_characteristic(cover.mesh));
    return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Discrete Laplace operator, heat kernel, and metric recovery for "
        "polyhedral surfaces"};
    app.require_subcommand(1);

    std::string mesh_path;
    std::string metric_path;
    std::string weights_path;
    std::string reference_path;
    std::string recovered_path;
    std::string output;
    std::string report_path;
    std::string init_path;
    std::string correspondence_path;
    double t = 0.0;
    double tol = 1e-10;
    int max_iters = 100;
    double threshold = 1e-6;
    bool gradient_descent = false;

    CLI::App* weights = app.add_subcommand(
        "weights", "Cotangent edge weights of a mesh metric");
    weights->add_option("mesh", mesh_path, "input OBJ")->required();
    weights->add_option("metric", metric_path,
                        "edge-length file overriding vertex positions");
    weights->add_option("-o,--output", output, "weight file to write")
        ->required();

    CLI::App* laplacian =
        app.add_subcommand("laplacian", "Discrete Laplace matrix");
    laplacian->add_option("mesh", mesh_path, "input OBJ")->required();
    laplacian->add_option("metric", metric_path,
                          "edge-length file overriding vertex positions");
    laplacian->add_option("-o,--output", output, "Matrix Market file to write")
        ->required();

    CLI::App* heat = app.add_subcommand("heat-kernel", "Heat kernel matrix");
    heat->add_option("mesh", mesh_path, "input OBJ")->required();
    heat->add_option("metric", metric_path,
                     "edge-length file overriding vertex positions");
    heat->add_option("--t", t, "diffusion time, nonnegative")->required();
    heat->add_option("-o,--output", output, "dense matrix file to write")
        ->required();

    CLI::App* recover = app.add_subcommand(
        "recover", "Recover the metric realizing prescribed edge weights");
    recover->add_option("mesh", mesh_path, "input OBJ")->required();
    recover->add_option("weights", weights_path, "target weight file")
        ->required();
    recover->add_option("-o,--output", output, "metric file to write")
        ->required();
    recover->add_option("--report", report_path, "JSON solve report path");
    recover->add_option("--init", init_path, "initial metric file");
    recover->add_option("--tol", tol, "projected gradient tolerance");
    recover->add_option("--max-iters", max_iters, "iteration cap");
    recover->add_flag("--gd", gradient_descent,
                      "use gradient descent instead of Newton");

    CLI::App* verify = app.add_subcommand(
        "verify", "Compare two metrics up to one global scale");
    verify->add_option("reference", reference_path, "reference metric file")
        ->required();
    verify->add_option("recovered", recovered_path, "metric file to check")
        ->required();
    verify->add_option("--threshold", threshold,
                       "largest accepted relative deviation");

    CLI::App* cover = app.add_subcommand(
        "double-cover", "Closed double of a mesh with boundary");
    cover->add_option("mesh", mesh_path, "input OBJ")->required();
    cover->add_option("-o,--output", output, "cover OBJ to write")->required();
    cover->add_option("--correspondence", correspondence_path,
                      "edge correspondence file (default: <output>.corr)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    try {
        if (weights->parsed()) {
            return cmd_weights(mesh_path, metric_path, output);
        }
        if (laplacian->parsed()) {
            return cmd_laplacian(mesh_path, metric_path, output);
        }
        if (heat->parsed()) {
            return cmd_heat_kernel(mesh_path, metric_path, t, output);
        }
        if (recover->parsed()) {
            return cmd_recover(mesh_path, weights_path, output, report_path,
                               init_path, tol, max_iters, gradient_descent);
        }
        if (verify->parsed()) {
            return cmd_verify(reference_path, recovered_path, threshold);
        }
        if (cover->parsed()) {
            return cmd_double_cover(mesh_path, output, correspondence_path);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInputError;
    }
    return kExitInputError;
}
