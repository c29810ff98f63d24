#include "lapmet/metric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "lapmet/edge_file.hpp"

namespace lapmet {

double triangle_margin(double a, double b, double c) {
    const double perimeter = a + b + c;
    const double worst =
        std::min({a + b - c, b + c - a, c + a - b});
    return worst / perimeter;
}

UCoordinates to_u(const PolyhedralMetric& metric) {
    UCoordinates u;
    u.values = 0.5 * metric.lengths.array().square();
    return u;
}

PolyhedralMetric from_u(const UCoordinates& u) {
    for (Eigen::Index k = 0; k < u.values.size(); ++k) {
        if (!(u.values[k] > 0.0)) {
            throw std::invalid_argument("u coordinate " + std::to_string(k) +
                                        " is not positive");
        }
    }
    PolyhedralMetric metric;
    metric.lengths = (2.0 * u.values.array()).sqrt();
    return metric;
}

namespace {

AdmissibilityResult check_faces(const Eigen::VectorXd& lengths,
                                const MeshConnectivity& mesh, double slack) {
    if (lengths.size() != mesh.edge_count()) {
        throw std::invalid_argument("metric length does not match edge count");
    }
    for (int f = 0; f < mesh.face_count(); ++f) {
        const auto& fe = mesh.face_edges[f];
        if (triangle_margin(lengths[fe[0]], lengths[fe[1]], lengths[fe[2]]) <=
            slack) {
            return {false, f};
        }
    }
    return {true, -1};
}

}  // namespace

AdmissibilityResult is_admissible(const UCoordinates& u,
                                  const MeshConnectivity& mesh, double slack) {
    Eigen::VectorXd d(u.values.size());
    for (Eigen::Index k = 0; k < u.values.size(); ++k) {
        if (!(u.values[k] > 0.0)) {
            // A nonpositive coordinate cannot belong to any face's interior;
            // report the first face using it.
            for (int f = 0; f < mesh.face_count(); ++f) {
                for (int c = 0; c < 3; ++c) {
                    if (mesh.face_edges[f][c] == k) return {false, f};
                }
            }
            return {false, -1};
        }
        d[k] = std::sqrt(2.0 * u.values[k]);
    }
    return check_faces(d, mesh, slack);
}

AdmissibilityResult is_admissible(const PolyhedralMetric& metric,
                                  const MeshConnectivity& mesh, double slack) {
    return check_faces(metric.lengths, mesh, slack);
}

UCoordinates normalize(const UCoordinates& u, const MeshConnectivity& mesh) {
    const auto m = static_cast<double>(mesh.edge_count());
    if (u.values.size() != mesh.edge_count()) {
        throw std::invalid_argument("u size does not match edge count");
    }
    const double total = u.values.sum();
    if (!(total > 0.0)) {
        throw std::invalid_argument("u coordinates must have positive sum");
    }
    UCoordinates out;
    out.values = (m / total) * u.values;
    out.normalized = true;
    return out;
}

TangentVector project_tangent(const Eigen::VectorXd& v) {
    TangentVector t;
    t.values = v.array() - v.mean();
    return t;
}

PolyhedralMetric induced_metric(const MeshConnectivity& mesh,
                                const VertexPositions& positions) {
    if (positions.size() != mesh.vertex_count) {
        throw std::invalid_argument("positions missing or wrong length");
    }
    PolyhedralMetric metric;
    metric.lengths.resize(mesh.edge_count());
    for (int e = 0; e < mesh.edge_count(); ++e) {
        const auto& p = positions.coords[mesh.edges[e][0]];
        const auto& q = positions.coords[mesh.edges[e][1]];
        const double dx = p[0] - q[0];
        const double dy = p[1] - q[1];
        const double dz = p[2] - q[2];
        const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
        if (d == 0.0) {
            throw std::domain_error(
                "zero-length edge (" + std::to_string(mesh.edges[e][0]) + ", " +
                std::to_string(mesh.edges[e][1]) + ")");
        }
        metric.lengths[e] = d;
    }
    if (const auto check = is_admissible(metric, mesh); !check) {
        throw std::domain_error("degenerate (zero-area) face " +
                                std::to_string(check.violating_face));
    }
    return metric;
}

void write_metric_file(std::ostream& out, const MeshConnectivity& mesh,
                       const PolyhedralMetric& metric) {
    write_edge_values(out, mesh, metric.lengths);
}

void write_metric_file(const std::string& path, const MeshConnectivity& mesh,
                       const PolyhedralMetric& metric) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_metric_file(out, mesh, metric);
}

PolyhedralMetric read_metric_file(std::istream& in, const MeshConnectivity& mesh) {
    PolyhedralMetric metric;
    metric.lengths = read_edge_values(in, mesh);
    for (Eigen::Index k = 0; k < metric.lengths.size(); ++k) {
        if (!(metric.lengths[k] > 0.0)) {
            throw std::invalid_argument("metric file has nonpositive length on edge " +
                                        std::to_string(k));
        }
    }
    return metric;
}

PolyhedralMetric read_metric_file(const std::string& path,
                                  const MeshConnectivity& mesh) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open metric file: " + path);
    return read_metric_file(in, mesh);
}

}  // namespace lapmet
