#include "lapmet/laplace.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "lapmet/edge_file.hpp"

namespace lapmet {

namespace {

void require_face_ok(const MeshConnectivity& mesh, const Eigen::VectorXd& lengths,
                     int face) {
    const auto& fe = mesh.face_edges[face];
    if (triangle_margin(lengths[fe[0]], lengths[fe[1]], lengths[fe[2]]) <=
        kDegeneracySlack) {
        throw std::domain_error("face " + std::to_string(face) +
                                " violates the triangle inequality");
    }
}

// Cosine law, clamped: cos(angle opposite a) for a triangle (a, b, c).
double cosine_opposite(double a, double b, double c) {
    const double ratio = (b * b + c * c - a * a) / (2.0 * b * c);
    return std::clamp(ratio, -1.0, 1.0);
}

}  // namespace

CornerAngles corner_angles(const MeshConnectivity& mesh,
                           const PolyhedralMetric& metric) {
    if (metric.lengths.size() != mesh.edge_count()) {
        throw std::invalid_argument("metric length does not match edge count");
    }
    CornerAngles out;
    out.angles.resize(mesh.face_count());
    for (int f = 0; f < mesh.face_count(); ++f) {
        require_face_ok(mesh, metric.lengths, f);
        const auto& fe = mesh.face_edges[f];
        const double a = metric.lengths[fe[0]];
        const double b = metric.lengths[fe[1]];
        const double c = metric.lengths[fe[2]];
        out.angles[f] = {std::acos(cosine_opposite(a, b, c)),
                         std::acos(cosine_opposite(b, c, a)),
                         std::acos(cosine_opposite(c, a, b))};
    }
    return out;
}

EdgeWeights cotangent_weights(const MeshConnectivity& mesh,
                              const PolyhedralMetric& metric) {
    if (metric.lengths.size() != mesh.edge_count()) {
        throw std::invalid_argument("metric length does not match edge count");
    }
    EdgeWeights out;
    out.w = Eigen::VectorXd::Zero(mesh.edge_count());
    for (int f = 0; f < mesh.face_count(); ++f) {
        require_face_ok(mesh, metric.lengths, f);
        const auto& fe = mesh.face_edges[f];
        const std::array<double, 3> d = {metric.lengths[fe[0]],
                                         metric.lengths[fe[1]],
                                         metric.lengths[fe[2]]};
        for (int c = 0; c < 3; ++c) {
            const double cosv =
                cosine_opposite(d[c], d[(c + 1) % 3], d[(c + 2) % 3]);
            const double sinv = std::sqrt(1.0 - cosv * cosv);
            out.w[fe[c]] += 0.5 * cosv / sinv;
        }
    }
    return out;
}

LaplaceMatrix laplace_matrix(const MeshConnectivity& mesh,
                             const EdgeWeights& weights) {
    if (weights.w.size() != mesh.edge_count()) {
        throw std::invalid_argument("weight count does not match edge count");
    }
    const int n = mesh.vertex_count;

    // Assemble the off-diagonal part first, then set each diagonal entry to
    // the negated ordered sum of its column so the constructive row-sum
    // identity holds exactly.
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(2 * mesh.edge_count() + n);
    for (int e = 0; e < mesh.edge_count(); ++e) {
        const auto [i, j] = mesh.edges[e];
        triplets.emplace_back(i, j, -weights.w[e]);
        triplets.emplace_back(j, i, -weights.w[e]);
    }
    Eigen::SparseMatrix<double> off(n, n);
    off.setFromTriplets(triplets.begin(), triplets.end());

    triplets.clear();
    triplets.reserve(2 * mesh.edge_count() + n);
    for (int col = 0; col < off.outerSize(); ++col) {
        double sum = 0.0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(off, col); it; ++it) {
            sum += it.value();
            triplets.emplace_back(it.row(), it.col(), it.value());
        }
        triplets.emplace_back(col, col, -sum);
    }
    LaplaceMatrix out;
    out.matrix.resize(n, n);
    out.matrix.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

SpectralData spectral_decomposition(const LaplaceMatrix& laplace) {
    const Eigen::MatrixXd dense(laplace.matrix);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("symmetric eigendecomposition failed");
    }
    SpectralData out;
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
    return out;
}

HeatKernelMatrix heat_kernel(const SpectralData& spectral, double t) {
    if (t < 0.0) {
        throw std::invalid_argument("heat kernel time must be nonnegative");
    }
    const Eigen::VectorXd decay = (-spectral.eigenvalues.array() * t).exp();
    HeatKernelMatrix out;
    out.t = t;
    out.values = spectral.eigenvectors * decay.asDiagonal() *
                 spectral.eigenvectors.transpose();
    out.values = 0.5 * (out.values + out.values.transpose()).eval();
    return out;
}

Eigen::MatrixXd heat_kernel_to_laplacian(const SpectralData& spectral, double h) {
    if (!(h > 0.0)) {
        throw std::invalid_argument("finite-difference step must be positive");
    }
    return -(heat_kernel(spectral, h).values - heat_kernel(spectral, 0.0).values) /
           h;
}

TriangleGeometry face_geometry(const std::array<double, 3>& lengths) {
    const auto [a, b, c] = lengths;
    if (triangle_margin(a, b, c) <= 0.0) {
        throw std::domain_error("degenerate triangle");
    }
    const double cos_a = cosine_opposite(a, b, c);
    const double sin_a = std::sqrt(1.0 - cos_a * cos_a);
    TriangleGeometry geo;
    geo.area = 0.5 * b * c * sin_a;
    geo.circumradius = a / (2.0 * sin_a);
    geo.inradius = geo.area / (0.5 * (a + b + c));
    return geo;
}

void write_weight_file(std::ostream& out, const MeshConnectivity& mesh,
                       const EdgeWeights& weights) {
    write_edge_values(out, mesh, weights.w);
}

void write_weight_file(const std::string& path, const MeshConnectivity& mesh,
                       const EdgeWeights& weights) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_weight_file(out, mesh, weights);
}

EdgeWeights read_weight_file(std::istream& in, const MeshConnectivity& mesh) {
    EdgeWeights out;
    out.w = read_edge_values(in, mesh);
    return out;
}

EdgeWeights read_weight_file(const std::string& path, const MeshConnectivity& mesh) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open weight file: " + path);
    return read_weight_file(in, mesh);
}

void write_matrix_market(std::ostream& out, const LaplaceMatrix& laplace) {
    const auto& L = laplace.matrix;
    std::vector<std::array<int, 2>> entries;
    for (int col = 0; col < L.outerSize(); ++col) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(L, col); it; ++it) {
            if (it.row() >= it.col()) {
                entries.push_back({static_cast<int>(it.row()),
                                   static_cast<int>(it.col())});
            }
        }
    }
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << L.rows() << ' ' << L.cols() << ' ' << entries.size() << '\n';
    char buf[96];
    for (const auto& [r, c] : entries) {
        std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", r + 1, c + 1,
                      L.coeff(r, c));
        out << buf;
    }
}

void write_matrix_market(const std::string& path, const LaplaceMatrix& laplace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_matrix_market(out, laplace);
}

void write_heat_kernel(std::ostream& out, const HeatKernelMatrix& kernel) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%ld %.17g\n", kernel.values.rows(), kernel.t);
    out << buf;
    for (Eigen::Index i = 0; i < kernel.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < kernel.values.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g%c", kernel.values(i, j),
                          j + 1 == kernel.values.cols() ? '\n' : ' ');
            out << buf;
        }
    }
}

void write_heat_kernel(const std::string& path, const HeatKernelMatrix& kernel) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_heat_kernel(out, kernel);
}

}  // namespace lapmet
