#include "lapmet/recover.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lapmet/energy.hpp"

namespace lapmet {

namespace {

void validate_options(const SolverOptions& opts) {
    if (!(opts.gradient_tolerance > 0.0) || opts.max_iterations < 1 ||
        !(opts.backtracking_factor > 0.0) ||
        !(opts.backtracking_factor < 1.0) ||
        !(opts.sufficient_decrease > 0.0) ||
        !(opts.admissibility_slack > 0.0)) {
        throw std::invalid_argument("invalid solver options");
    }
}

std::optional<Eigen::VectorXd> solve_kkt(const Eigen::SparseMatrix<double>& hess,
                                         const Eigen::VectorXd& g,
                                         double tikhonov) {
    const int m = static_cast<int>(g.size());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(hess.nonZeros() + 3 * m);
    for (int col = 0; col < hess.outerSize(); ++col) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(hess, col); it;
             ++it) {
            triplets.emplace_back(static_cast<int>(it.row()),
                                  static_cast<int>(it.col()), it.value());
        }
    }
    for (int i = 0; i < m; ++i) {
        triplets.emplace_back(i, m, 1.0);
        triplets.emplace_back(m, i, 1.0);
        if (tikhonov > 0.0) triplets.emplace_back(i, i, tikhonov);
    }
    Eigen::SparseMatrix<double> kkt(m + 1, m + 1);
    kkt.setFromTriplets(triplets.begin(), triplets.end());

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(kkt);
    if (lu.info() != Eigen::Success) return std::nullopt;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
    rhs.head(m) = -g;
    const Eigen::VectorXd sol = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !sol.allFinite()) return std::nullopt;
    return sol.head(m).eval();
}

Eigen::VectorXd newton_direction(const MeshConnectivity& mesh,
                                 const UCoordinates& u,
                                 const Eigen::VectorXd& g) {
    const TotalHessian hess = assemble_hessian(mesh, u);
    if (auto step = solve_kkt(hess.matrix, g, 0.0)) return *step;
    const double tikhonov =
        1e-12 * hess.matrix.diagonal().sum() / static_cast<double>(g.size());
    if (auto step = solve_kkt(hess.matrix, g, tikhonov)) return *step;
    throw std::runtime_error("KKT factorization failed");
}

}  // namespace

std::array<double, 3> solve_triangle(const std::array<double, 3>& cotangents) {
    std::array<double, 3> theta;
    for (int i = 0; i < 3; ++i) {
        theta[i] = std::atan2(1.0, cotangents[i]);
    }
    const double sum = theta[0] + theta[1] + theta[2];
    if (std::abs(sum - M_PI) > kAngleSumTol) {
        throw std::invalid_argument("inconsistent cotangent triple");
    }
    const std::array<double, 3> s = {std::sin(theta[0]), std::sin(theta[1]),
                                     std::sin(theta[2])};
    const double total = s[0] + s[1] + s[2];
    return {3.0 * s[0] / total, 3.0 * s[1] / total, 3.0 * s[2] / total};
}

SolveReport recover_metric(const MeshConnectivity& mesh,
                           const EdgeWeights& target,
                           const SolverOptions& opts) {
    validate_options(opts);
    if (target.w.size() != mesh.edge_count()) {
        throw std::invalid_argument(
            "target weight count does not match edge count");
    }
    if (!is_connected(mesh)) {
        throw std::invalid_argument("mesh must be connected");
    }
    const int m = mesh.edge_count();

    Eigen::VectorXd u;
    if (opts.initial_u) {
        if (opts.initial_u->size() != m) {
            throw std::invalid_argument(
                "initial u size does not match edge count");
        }
        u = *opts.initial_u;
    } else {
        u = Eigen::VectorXd::Ones(m);
    }
    if (!(u.array() > 0.0).all()) {
        throw std::invalid_argument("initial u must be positive");
    }
    u *= static_cast<double>(m) / u.sum();
    if (!is_admissible(UCoordinates{u}, mesh, opts.admissibility_slack)) {
        throw std::invalid_argument("initial metric is not admissible");
    }

    SolveReport report;
    report.energy_trace.push_back(0.0);

    while (true) {
        const EdgeWeights w = cotangent_weights(mesh, from_u(UCoordinates{u}));
        const Eigen::VectorXd g = target.w - w.w;
        const double norm = project_tangent(g).values.lpNorm<Eigen::Infinity>();
        report.gradient_norms.push_back(norm);
        if (norm <= opts.gradient_tolerance) {
            report.converged = true;
            report.stop_reason = "gradient tolerance reached";
            break;
        }
        if (report.iterations >= opts.max_iterations) {
            report.stop_reason = "max iterations reached";
            break;
        }

        Eigen::VectorXd delta;
        if (opts.gradient_descent) {
            delta = -project_tangent(g).values;
        } else {
            delta = newton_direction(mesh, UCoordinates{u}, g);
        }
        const double directional = g.dot(delta);
        if (!(directional < 0.0)) {
            report.stop_reason = "line search stalled";
            break;
        }

        bool accepted = false;
        for (double s = 1.0; s > 1e-18; s *= opts.backtracking_factor) {
            UCoordinates cand;
            cand.values = u + s * delta;
            if (!(cand.values.array() > 0.0).all() ||
                !is_admissible(cand, mesh, opts.admissibility_slack)) {
                continue;
            }
            double decrease = 0.0;
            try {
                decrease = energy_value(mesh, cand, target, UCoordinates{u});
            } catch (const std::domain_error&) {
                continue;
            }
            if (decrease <= opts.sufficient_decrease * s * directional) {
                u = cand.values *
                    (static_cast<double>(m) / cand.values.sum());
                report.energy_trace.push_back(report.energy_trace.back() +
                                              decrease);
                ++report.iterations;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            report.stop_reason = "line search stalled";
            break;
        }
    }

    report.final_gradient_norm = report.gradient_norms.back();
    report.recovered = UCoordinates{u, true};
    return report;
}

ScalingReport verify_scaling(const PolyhedralMetric& recovered,
                             const PolyhedralMetric& reference) {
    if (recovered.lengths.size() != reference.lengths.size()) {
        throw std::invalid_argument("edge counts differ");
    }
    const int m = static_cast<int>(recovered.lengths.size());
    if (m == 0) {
        throw std::invalid_argument("empty metric");
    }
    std::vector<double> ratios(m);
    for (int k = 0; k < m; ++k) {
        if (reference.lengths[k] == 0.0) {
            throw std::invalid_argument("zero reference length at edge " +
                                        std::to_string(k));
        }
        ratios[k] = recovered.lengths[k] / reference.lengths[k];
    }
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    ScalingReport out;
    out.scale = (m % 2 == 1)
                    ? sorted[m / 2]
                    : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    for (const double r : ratios) {
        out.max_relative_deviation =
            std::max(out.max_relative_deviation, std::abs(r / out.scale - 1.0));
    }
    return out;
}

SolveReport recover_via_double_cover(const MeshConnectivity& mesh,
                                     const EdgeWeights& target,
                                     const SolverOptions& opts) {
    if (target.w.size() != mesh.edge_count()) {
        throw std::invalid_argument(
            "target weight count does not match edge count");
    }
    if (boundary_edges(mesh).empty()) {
        throw std::invalid_argument("mesh is closed; the double cover needs a boundary");
    }
    const DoubleCover cover = double_cover(mesh);

    // An identified boundary edge carries both mirror faces in the cover, so
    // the realizable target there is twice the prescribed boundary weight.
    // Interior copies keep the original value.
    Eigen::VectorXd cover_target(cover.mesh.edge_count());
    for (int e = 0; e < mesh.edge_count(); ++e) {
        const auto& copies = cover.edge_map[e];
        if (copies.size() == 1) {
            cover_target[copies[0]] = 2.0 * target.w[e];
        } else {
            for (const int ce : copies) cover_target[ce] = target.w[e];
        }
    }

    SolverOptions cover_opts = opts;
    if (opts.initial_u) {
        if (opts.initial_u->size() != mesh.edge_count()) {
            throw std::invalid_argument(
                "initial u size does not match edge count");
        }
        Eigen::VectorXd init(cover.mesh.edge_count());
        for (int e = 0; e < mesh.edge_count(); ++e) {
            for (const int ce : cover.edge_map[e]) {
                init[ce] = (*opts.initial_u)[e];
            }
        }
        cover_opts.initial_u = init;
    }

    SolveReport report =
        recover_metric(cover.mesh, EdgeWeights{cover_target}, cover_opts);

    Eigen::VectorXd pulled(mesh.edge_count());
    for (int e = 0; e < mesh.edge_count(); ++e) {
        const auto& copies = cover.edge_map[e];
        if (copies.size() == 1) {
            pulled[e] = report.recovered.values[copies[0]];
        } else {
            const double a = report.recovered.values[copies[0]];
            const double b = report.recovered.values[copies[1]];
            if (std::abs(a - b) >
                kCoverAgreementTol * std::max(std::abs(a), std::abs(b))) {
                throw std::runtime_error("double cover copies disagree on edge " +
                                         std::to_string(e));
            }
            pulled[e] = 0.5 * (a + b);
        }
    }
    UCoordinates restricted;
    restricted.values = pulled;
    report.recovered = normalize(restricted, mesh);
    return report;
}

}  // namespace lapmet
