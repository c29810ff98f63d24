// Acceptance gate: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>
#include <string>
#include <vector>

#include "lapmet/energy.hpp"
#include "lapmet/laplace.hpp"
#include "lapmet/mesh.hpp"
#include "lapmet/metric.hpp"
#include "lapmet/recover.hpp"
#include "test_meshes.hpp"

using namespace lapmet;

namespace {

constexpr double kRoundTripTol = 1e-8;
constexpr double kRoundTripSeconds = 5.0;
constexpr double kGradientRelTol = 1e-5;
constexpr double kHessianRelTol = 1e-5;
constexpr double kHessianKernelTol = 1e-8;
constexpr double kTangentNegativeTol = 1e-10;
constexpr double kTangentPositiveTol = 1e-8;
constexpr double kPathTol = 1e-8;
constexpr double kScaleInvarianceTol = 1e-12;
constexpr double kHeatIdentityTol = 1e-12;
constexpr double kHeatSemigroupTol = 1e-8;
constexpr double kHeatDifferenceTol = 1e-5;
constexpr double kHeatDifferenceStep = 1e-6;
constexpr double kTriangleSolverTol = 1e-12;
constexpr double kTriangleRoundTripTol = 1e-10;
constexpr double kCoverAgreeTol = 1e-6;
constexpr double kUniquenessTol = 1e-7;

int failures = 0;

void report(int index, const char* name, bool ok, const std::string& detail) {
    if (ok) {
        std::printf("PASS criterion %d: %s\n", index, name);
    } else {
        std::printf("FAIL criterion %d: %s (%s)\n", index, name,
                    detail.c_str());
        ++failures;
    }
}

struct MeshCase {
    std::string name;
    MeshConnectivity mesh;
    PolyhedralMetric base;
};

std::vector<MeshCase> test_meshes() {
    std::vector<MeshCase> cases;
    {
        MeshConnectivity mesh = fixtures::single_triangle();
        cases.push_back({"triangle", mesh, fixtures::constant_metric(mesh)});
    }
    {
        MeshConnectivity mesh = fixtures::square_with_diagonal();
        cases.push_back({"square", mesh, fixtures::constant_metric(mesh)});
    }
    {
        MeshConnectivity mesh = fixtures::tetrahedron();
        cases.push_back({"tetrahedron", mesh, fixtures::constant_metric(mesh)});
    }
    {
        LoadedMesh icosa = fixtures::icosahedron();
        cases.push_back({"icosahedron", icosa.mesh,
                         induced_metric(icosa.mesh, icosa.positions)});
    }
    {
        MeshConnectivity mesh = fixtures::flat_torus_4x4();
        cases.push_back({"torus", mesh, fixtures::flat_torus_metric(mesh)});
    }
    return cases;
}

std::string format_double(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.3g", v);
    return buffer;
}

// Orthonormal basis of the zero-sum hyperplane via a Householder reflector
// that swaps e_1 with the normalized all-ones vector.
Eigen::MatrixXd tangent_basis(int m) {
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(m) / std::sqrt(double(m));
    Eigen::VectorXd h = Eigen::VectorXd::Zero(m);
    h[0] = 1.0;
    h -= ones;
    const double norm = h.norm();
    if (norm < 1e-14) {
        return Eigen::MatrixXd::Identity(m, m).rightCols(m - 1);
    }
    h /= norm;
    const Eigen::MatrixXd reflector =
        Eigen::MatrixXd::Identity(m, m) - 2.0 * h * h.transpose();
    return reflector.rightCols(m - 1);
}

void criterion_round_trip() {
    bool ok = true;
    std::string detail;
    unsigned seed = 211;
    for (const MeshCase& c : test_meshes()) {
        const PolyhedralMetric truth =
            fixtures::perturbed_metric(c.mesh, c.base, seed++);
        const EdgeWeights target = cotangent_weights(c.mesh, truth);
        const auto start = std::chrono::steady_clock::now();
        const SolveReport solved = recover_metric(c.mesh, target);
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        if (!solved.converged || solved.iterations > 100) {
            ok = false;
            detail += c.name + ": no convergence in 100 iterations; ";
            continue;
        }
        const ScalingReport scaling =
            verify_scaling(from_u(solved.recovered), truth);
        if (scaling.max_relative_deviation > kRoundTripTol) {
            ok = false;
            detail += c.name + ": deviation " +
                      format_double(scaling.max_relative_deviation) + "; ";
        }
        if (seconds >= kRoundTripSeconds) {
            ok = false;
            detail += c.name + ": took " + format_double(seconds) + "s; ";
        }
    }
    report(1, "round-trip rigidity on the five test meshes", ok, detail);
}

void criterion_gradient() {
    bool ok = true;
    std::string detail;
    unsigned seed = 977;
    for (const MeshCase& c : test_meshes()) {
        const UCoordinates u_ref = to_u(c.base);
        const EdgeWeights target = cotangent_weights(c.mesh, c.base);
        double worst = 0.0;
        for (int point = 0; point < 20; ++point) {
            const UCoordinates u = to_u(
                fixtures::perturbed_metric(c.mesh, c.base, seed++));
            const EnergyGradient g = assemble_gradient(c.mesh, u, target);
            const double h = 1e-6 * u.values.norm();
            const double floor = 1e-6 * (g.g.cwiseAbs().maxCoeff() + 1e-30);
            for (int k = 0; k < c.mesh.edge_count(); ++k) {
                UCoordinates up = u;
                UCoordinates down = u;
                up.values[k] += h;
                down.values[k] -= h;
                const double fd =
                    (energy_value(c.mesh, up, target, u_ref) -
                     energy_value(c.mesh, down, target, u_ref)) /
                    (2.0 * h);
                const double rel = std::abs(fd - g.g[k]) /
                                   std::max(std::abs(g.g[k]), floor);
                worst = std::max(worst, rel);
            }
        }
        if (worst > kGradientRelTol) {
            ok = false;
            detail += c.name + ": rel error " + format_double(worst) + "; ";
        }
    }
    report(2, "assembled gradient matches finite differences of the energy",
           ok, detail);
}

void criterion_hessian() {
    bool ok = true;
    std::string detail;
    std::mt19937 rng(1229);
    double worst_fd = 0.0;
    double worst_kernel = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto u =
            fixtures::u_of_lengths(fixtures::random_triangle_lengths(rng));
        const FaceHessianBlock block = face_hessian(u);
        for (int a = 0; a < 3 && ok; ++a) {
            for (int b = a + 1; b < 3; ++b) {
                if (block.values(a, b) != block.values(b, a)) {
                    ok = false;
                    detail += "block not exactly symmetric; ";
                    break;
                }
            }
        }
        const Eigen::Vector3d uv(u[0], u[1], u[2]);
        const double kernel_rel =
            (block.values * uv).cwiseAbs().maxCoeff() /
            (block.values.cwiseAbs().maxCoeff() * uv.cwiseAbs().maxCoeff());
        worst_kernel = std::max(worst_kernel, kernel_rel);

        const double norm =
            std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
        const double h = 1e-6 * norm;
        const double floor = 1e-6 * block.values.cwiseAbs().maxCoeff();
        for (int b = 0; b < 3; ++b) {
            auto up = u;
            auto down = u;
            up[b] += h;
            down[b] -= h;
            const auto gp = face_gradient(up);
            const auto gm = face_gradient(down);
            for (int a = 0; a < 3; ++a) {
                const double fd = (gp[a] - gm[a]) / (2.0 * h);
                const double rel =
                    std::abs(fd - block.values(a, b)) /
                    std::max(std::abs(block.values(a, b)), floor);
                worst_fd = std::max(worst_fd, rel);
            }
        }
    }
    if (worst_fd > kHessianRelTol) {
        ok = false;
        detail += "fd rel error " + format_double(worst_fd) + "; ";
    }
    if (worst_kernel > kHessianKernelTol) {
        ok = false;
        detail += "kernel residual " + format_double(worst_kernel) + "; ";
    }
    report(3, "face hessian matches finite differences, exactly symmetric",
           ok, detail);
}

void criterion_tangent_convexity() {
    bool ok = true;
    std::string detail;
    unsigned seed = 1373;

    auto tangent_lambda_min = [](const MeshConnectivity& mesh,
                                 const UCoordinates& u, double& lambda_min,
                                 double& hessian_norm) {
        const Eigen::MatrixXd dense(assemble_hessian(mesh, u).matrix);
        const Eigen::MatrixXd basis = tangent_basis(mesh.edge_count());
        const Eigen::MatrixXd restricted =
            basis.transpose() * dense * basis;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full(dense);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tangent(restricted);
        hessian_norm = full.eigenvalues().cwiseAbs().maxCoeff();
        lambda_min = tangent.eigenvalues().minCoeff();
    };

    for (const MeshCase& c : test_meshes()) {
        const UCoordinates u =
            to_u(fixtures::perturbed_metric(c.mesh, c.base, seed++));
        double lambda_min = 0.0;
        double norm = 0.0;
        tangent_lambda_min(c.mesh, u, lambda_min, norm);
        if (lambda_min < -kTangentNegativeTol * norm) {
            ok = false;
            detail += c.name + ": lambda_min " + format_double(lambda_min) +
                      "; ";
        }
        if (lambda_min <= kTangentPositiveTol * norm) {
            ok = false;
            detail += c.name + " (connected): lambda_min " +
                      format_double(lambda_min) + " not positive enough; ";
        }
    }

    // Disconnected pair: semidefinite only; the second kernel direction is
    // tangent, so positivity is not required.
    const MeshConnectivity disjoint =
        build_connectivity(6, {{0, 1, 2}, {3, 4, 5}});
    UCoordinates u;
    u.values = Eigen::VectorXd::Constant(6, 0.7);
    double lambda_min = 0.0;
    double norm = 0.0;
    tangent_lambda_min(disjoint, u, lambda_min, norm);
    if (lambda_min < -kTangentNegativeTol * norm) {
        ok = false;
        detail += "disjoint pair: lambda_min " + format_double(lambda_min) +
                  "; ";
    }
    report(4, "energy hessian is positive semidefinite on the tangent space",
           ok, detail);
}

void criterion_path_independence() {
    bool ok = true;
    std::string detail;
    unsigned seed = 1531;
    for (const MeshCase& c : test_meshes()) {
        if (c.name != "triangle" && c.name != "tetrahedron") continue;
        const EdgeWeights target = cotangent_weights(c.mesh, c.base);
        for (int trial = 0; trial < 5; ++trial) {
            const UCoordinates a =
                to_u(fixtures::perturbed_metric(c.mesh, c.base, seed++));
            const UCoordinates b =
                to_u(fixtures::perturbed_metric(c.mesh, c.base, seed++));
            const UCoordinates p =
                to_u(fixtures::perturbed_metric(c.mesh, c.base, seed++));
            const UCoordinates q =
                to_u(fixtures::perturbed_metric(c.mesh, c.base, seed++));
            const double direct = energy_value(c.mesh, b, target, a);
            const double polyline = energy_value(c.mesh, p, target, a) +
                                    energy_value(c.mesh, q, target, p) +
                                    energy_value(c.mesh, b, target, q);
            const double err =
                std::abs(direct - polyline) / (1.0 + std::abs(direct));
            if (err > kPathTol) {
                ok = false;
                detail += c.name + ": paths differ by " + format_double(err) +
                          "; ";
            }
        }
    }
    report(5, "energy is path independent", ok, detail);
}

void criterion_scale_invariance() {
    bool ok = true;
    std::string detail;
    unsigned seed = 1733;
    for (const MeshCase& c : test_meshes()) {
        const PolyhedralMetric d =
            fixtures::perturbed_metric(c.mesh, c.base, seed++);
        const EdgeWeights w = cotangent_weights(c.mesh, d);
        const Eigen::MatrixXd L(laplace_matrix(c.mesh, w).matrix);
        const Eigen::MatrixXd K =
            heat_kernel(spectral_decomposition(laplace_matrix(c.mesh, w)), 0.7)
                .values;
        for (const double factor : {0.1, 7.3}) {
            PolyhedralMetric scaled = d;
            scaled.lengths *= factor;
            const EdgeWeights ws = cotangent_weights(c.mesh, scaled);
            const Eigen::MatrixXd Ls(laplace_matrix(c.mesh, ws).matrix);
            const Eigen::MatrixXd Ks =
                heat_kernel(
                    spectral_decomposition(laplace_matrix(c.mesh, ws)), 0.7)
                    .values;
            const double w_rel = (ws.w - w.w).cwiseAbs().maxCoeff() /
                                 w.w.cwiseAbs().maxCoeff();
            const double l_rel =
                (Ls - L).cwiseAbs().maxCoeff() / L.cwiseAbs().maxCoeff();
            const double k_rel =
                (Ks - K).cwiseAbs().maxCoeff() / K.cwiseAbs().maxCoeff();
            const double rel = std::max({w_rel, l_rel, k_rel});
            if (rel > kScaleInvarianceTol) {
                ok = false;
                detail += c.name + " x" + format_double(factor) + ": rel " +
                          format_double(rel) + "; ";
            }
        }
    }
    report(6, "weights, laplacian, and heat kernel are scale invariant", ok,
           detail);
}

void criterion_heat_kernel() {
    bool ok = true;
    std::string detail;
    unsigned seed = 1933;
    for (const MeshCase& c : test_meshes()) {
        const PolyhedralMetric d =
            fixtures::perturbed_metric(c.mesh, c.base, seed++);
        const LaplaceMatrix L =
            laplace_matrix(c.mesh, cotangent_weights(c.mesh, d));
        const SpectralData spectral = spectral_decomposition(L);
        const int n = c.mesh.vertex_count;

        const Eigen::MatrixXd identity_err =
            heat_kernel(spectral, 0.0).values -
            Eigen::MatrixXd::Identity(n, n);
        if (identity_err.cwiseAbs().maxCoeff() > kHeatIdentityTol) {
            ok = false;
            detail += c.name + ": K(0) is not the identity; ";
        }

        const Eigen::MatrixXd semigroup_err =
            heat_kernel(spectral, 0.3).values *
                heat_kernel(spectral, 0.5).values -
            heat_kernel(spectral, 0.8).values;
        if (semigroup_err.cwiseAbs().maxCoeff() > kHeatSemigroupTol) {
            ok = false;
            detail += c.name + ": semigroup residual " +
                      format_double(semigroup_err.cwiseAbs().maxCoeff()) +
                      "; ";
        }

        const Eigen::MatrixXd dense(L.matrix);
        const double l_norm = dense.cwiseAbs().maxCoeff();
        const double fd_err =
            (heat_kernel_to_laplacian(spectral, kHeatDifferenceStep) - dense)
                .cwiseAbs()
                .maxCoeff();
        if (fd_err > kHeatDifferenceTol * l_norm) {
            ok = false;
            detail += c.name + ": finite difference error " +
                      format_double(fd_err) + "; ";
        }
    }

    const MeshConnectivity tetra = fixtures::tetrahedron();
    const SpectralData spectral = spectral_decomposition(laplace_matrix(
        tetra, cotangent_weights(tetra, fixtures::constant_metric(tetra))));
    const Eigen::MatrixXd J = Eigen::MatrixXd::Ones(4, 4);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(4, 4);
    for (const double t : {0.4, 1.0}) {
        const Eigen::MatrixXd closed =
            0.25 * J + std::exp(-4.0 * t / std::sqrt(3.0)) * (I - 0.25 * J);
        const double err = (heat_kernel(spectral, t).values - closed)
                               .cwiseAbs()
                               .maxCoeff();
        if (err > kHeatSemigroupTol) {
            ok = false;
            detail += "tetrahedron closed form error " + format_double(err) +
                      "; ";
        }
    }
    report(7, "heat kernel identities", ok, detail);
}

void criterion_triangle_solver() {
    bool ok = true;
    std::string detail;

    const double c = 1.0 / std::sqrt(3.0);
    const auto equilateral = solve_triangle({c, c, c});
    for (int i = 0; i < 3; ++i) {
        if (std::abs(equilateral[i] - 1.0) > kTriangleSolverTol) {
            ok = false;
            detail += "equilateral; ";
            break;
        }
    }
    const auto right = solve_triangle({4.0 / 3.0, 0.75, 0.0});
    const std::array<double, 3> expected = {0.75, 1.0, 1.25};
    for (int i = 0; i < 3; ++i) {
        if (std::abs(right[i] - expected[i]) > kTriangleSolverTol) {
            ok = false;
            detail += "3-4-5 normalization; ";
            break;
        }
    }

    std::mt19937 rng(2311);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        auto d = fixtures::random_triangle_lengths(rng);
        const double perimeter = d[0] + d[1] + d[2];
        for (double& x : d) x *= 3.0 / perimeter;
        const auto back = solve_triangle(face_gradient(
            fixtures::u_of_lengths(d)));
        for (int i = 0; i < 3; ++i) {
            worst = std::max(worst, std::abs(back[i] - d[i]));
        }
    }
    if (worst > kTriangleRoundTripTol) {
        ok = false;
        detail += "round trip error " + format_double(worst) + "; ";
    }
    report(8, "single-triangle solver", ok, detail);
}

void criterion_double_cover() {
    bool ok = true;
    std::string detail;
    for (const MeshCase& c : test_meshes()) {
        if (c.name != "triangle" && c.name != "square") continue;
        const DoubleCover cover = double_cover(c.mesh);
        if (!boundary_edges(cover.mesh).empty()) {
            ok = false;
            detail += c.name + ": cover is not closed; ";
        }
        if (euler_characteristic(cover.mesh) !=
            2 * euler_characteristic(c.mesh)) {
            ok = false;
            detail += c.name + ": euler characteristic did not double; ";
        }

        const PolyhedralMetric truth =
            fixtures::perturbed_metric(c.mesh, c.base, 2477);
        const EdgeWeights target = cotangent_weights(c.mesh, truth);
        const SolveReport direct = recover_metric(c.mesh, target);
        const SolveReport covered = recover_via_double_cover(c.mesh, target);
        if (!direct.converged || !covered.converged) {
            ok = false;
            detail += c.name + ": a recovery did not converge; ";
            continue;
        }
        const ScalingReport agreement = verify_scaling(
            from_u(covered.recovered), from_u(direct.recovered));
        if (agreement.max_relative_deviation > kCoverAgreeTol) {
            ok = false;
            detail += c.name + ": paths deviate by " +
                      format_double(agreement.max_relative_deviation) + "; ";
        }
    }
    report(9, "double cover recovery agrees with direct recovery", ok,
           detail);
}

void criterion_uniqueness() {
    bool ok = true;
    std::string detail;
    unsigned seed = 2657;
    for (const MeshCase& c : test_meshes()) {
        const PolyhedralMetric truth =
            fixtures::perturbed_metric(c.mesh, c.base, seed++);
        const EdgeWeights target = cotangent_weights(c.mesh, truth);
        const SolveReport first = recover_metric(c.mesh, target);
        SolverOptions opts;
        opts.initial_u =
            to_u(fixtures::perturbed_metric(c.mesh, c.base, seed++)).values;
        const SolveReport second = recover_metric(c.mesh, target, opts);
        if (!first.converged || !second.converged) {
            ok = false;
            detail += c.name + ": a solve did not converge; ";
            continue;
        }
        const double diff = (first.recovered.values - second.recovered.values)
                                .cwiseAbs()
                                .maxCoeff();
        if (diff > kUniquenessTol) {
            ok = false;
            detail += c.name + ": optima differ by " + format_double(diff) +
                      "; ";
        }
    }
    report(10, "the recovered optimum is independent of the starting point",
           ok, detail);
}

void run(int index, const char* name, void (*criterion)()) {
    try {
        criterion();
    } catch (const std::exception& e) {
        report(index, name, false, std::string("exception: ") + e.what());
    }
}

}  // namespace

int main() {
    run(1, "round-trip rigidity on the five test meshes", criterion_round_trip);
    run(2, "assembled gradient matches finite differences of the energy",
        criterion_gradient);
    run(3, "face hessian matches finite differences, exactly symmetric",
        criterion_hessian);
    run(4, "energy hessian is positive semidefinite on the tangent space",
        criterion_tangent_convexity);
    run(5, "energy is path independent", criterion_path_independence);
    run(6, "weights, laplacian, and heat kernel are scale invariant",
        criterion_scale_invariance);
    run(7, "heat kernel identities", criterion_heat_kernel);
    run(8, "single-triangle solver", criterion_triangle_solver);
    run(9, "double cover recovery agrees with direct recovery",
        criterion_double_cover);
    run(10, "the recovered optimum is independent of the starting point",
        criterion_uniqueness);
    return failures == 0 ? 0 : 1;
}
