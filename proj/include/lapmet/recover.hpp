#pragma once

#include <Eigen/Core>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "lapmet/laplace.hpp"
#include "lapmet/mesh.hpp"
#include "lapmet/metric.hpp"

namespace lapmet {

// Recovered angles must sum to pi within this tolerance in solve_triangle.
inline constexpr double kAngleSumTol = 1e-8;

// Maximum relative disagreement between the two covering copies of an
// interior edge when pulling a metric back from the double cover.
inline constexpr double kCoverAgreementTol = 1e-8;

struct SolverOptions {
    double gradient_tolerance = 1e-10;  // infinity norm, projected gradient
    int max_iterations = 100;
    double backtracking_factor = 0.5;
    double sufficient_decrease = 1e-4;
    double admissibility_slack = 1e-10;
    // Starting point in u coordinates; the constant vector when absent.
    std::optional<Eigen::VectorXd> initial_u;
    // Replaces the Newton direction with projected steepest descent, with
    // the same line search.
    bool gradient_descent = false;
};

struct SolveReport {
    bool converged = false;
    int iterations = 0;
    double final_gradient_norm = 0.0;
    // Energy relative to the initial iterate, one entry per accepted step
    // starting at 0. Nonincreasing.
    std::vector<double> energy_trace;
    // Projected gradient norm per iterate, including the final one.
    std::vector<double> gradient_norms;
    UCoordinates recovered;
    std::string stop_reason;
};

struct ScalingReport {
    double scale = 1.0;
    double max_relative_deviation = 0.0;
};

// Closed-form single-triangle inverse: angles from the cotangents with the
// atan2 branch in (0, pi), lengths proportional to the sines, normalized to
// sum 3. Throws std::invalid_argument when the angles do not sum to pi.
std::array<double, 3> solve_triangle(const std::array<double, 3>& cotangents);

// Projected Newton on the hyperplane sum(u) = m. Each iteration solves the
// KKT system for a tangent step, backtracks until the candidate is strictly
// admissible and the energy decreases sufficiently, then renormalizes.
// A non-realizable target yields converged = false with diagnostics rather
// than an exception. Throws std::invalid_argument for a disconnected mesh.
SolveReport recover_metric(const MeshConnectivity& mesh,
                           const EdgeWeights& target,
                           const SolverOptions& opts = {});

// Scale factor (median length ratio) and the largest relative deviation of
// recovered from scale times reference.
ScalingReport verify_scaling(const PolyhedralMetric& recovered,
                             const PolyhedralMetric& reference);

// Solves on the closed double cover and pulls the metric back through the
// edge correspondence. The two covering copies of each interior edge must
// agree within kCoverAgreementTol, or std::runtime_error is thrown.
SolveReport recover_via_double_cover(const MeshConnectivity& mesh,
                                     const EdgeWeights& target,
                                     const SolverOptions& opts = {});

}  // namespace lapmet
