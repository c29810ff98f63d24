#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>

#include "lapmet/mesh.hpp"

namespace lapmet {

/// Relative triangle-inequality slack below which a face counts as degenerate
/// for angle/weight evaluation. Admissibility in the sense of the metric space
/// itself uses strict inequalities (slack 0).
constexpr double kDegeneracySlack = 1e-10;

/// Edge-length metric, indexed by canonical edge order. Lengths are unitless
/// and positive; per-face triangle inequalities are checked by the operations
/// that need them.
struct PolyhedralMetric {
    Eigen::VectorXd lengths;
};

/// Squared-half-length coordinates u_k = d_k^2 / 2, the chart in which the
/// admissible region is convex.
struct UCoordinates {
    Eigen::VectorXd values;
    bool normalized = false;
};

/// Direction with zero component sum; the tangent space of the normalized
/// metric region.
struct TangentVector {
    Eigen::VectorXd values;
};

struct AdmissibilityResult {
    bool admissible = false;
    int violating_face = -1;

    explicit operator bool() const { return admissible; }
};

/// Relative margin of the worst triangle inequality: min over the three cyclic
/// permutations of (a + b - c) / (a + b + c). Positive iff the lengths form a
/// nondegenerate triangle.
double triangle_margin(double a, double b, double c);

UCoordinates to_u(const PolyhedralMetric& metric);

/// Inverse of to_u; throws std::invalid_argument on a nonpositive component.
PolyhedralMetric from_u(const UCoordinates& u);

/// Checks every face's strict triangle inequalities on sqrt(u), with an
/// optional relative slack. Reports the first violating face instead of
/// throwing.
AdmissibilityResult is_admissible(const UCoordinates& u,
                                  const MeshConnectivity& mesh,
                                  double slack = 0.0);
AdmissibilityResult is_admissible(const PolyhedralMetric& metric,
                                  const MeshConnectivity& mesh,
                                  double slack = 0.0);

/// Scales u so that its components sum to the edge count.
UCoordinates normalize(const UCoordinates& u, const MeshConnectivity& mesh);

/// Orthogonal projection onto the zero-sum hyperplane (subtracts the mean).
TangentVector project_tangent(const Eigen::VectorXd& v);

/// Edge lengths induced by an embedding. Throws std::domain_error on a
/// zero-length edge or a degenerate (collinear) face.
PolyhedralMetric induced_metric(const MeshConnectivity& mesh,
                                const VertexPositions& positions);

/// Metric file: one `vi vj d` line per edge in canonical order, 1-based
/// vertex ids, 17 significant digits.
void write_metric_file(std::ostream& out, const MeshConnectivity& mesh,
                       const PolyhedralMetric& metric);
void write_metric_file(const std::string& path, const MeshConnectivity& mesh,
                       const PolyhedralMetric& metric);
PolyhedralMetric read_metric_file(std::istream& in, const MeshConnectivity& mesh);
PolyhedralMetric read_metric_file(const std::string& path,
                                  const MeshConnectivity& mesh);

}  // namespace lapmet
