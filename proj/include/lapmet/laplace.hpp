#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "lapmet/mesh.hpp"
#include "lapmet/metric.hpp"

namespace lapmet {

/// Interior angles per face, in radians; angle c sits at the corner opposite
/// face_edges[f][c].
struct CornerAngles {
    std::vector<std::array<double, 3>> angles;
};

/// Cotangent weight per edge: half the cotangent of the single opposite angle
/// on the boundary, half the sum of both opposite cotangents in the interior.
/// Negative entries are legitimate (obtuse opposite angles).
struct EdgeWeights {
    Eigen::VectorXd w;
};

/// Symmetric vertex-by-vertex operator with -w on edge off-diagonals and
/// exactly zero row sums.
struct LaplaceMatrix {
    Eigen::SparseMatrix<double> matrix;
};

/// Eigendecomposition of a Laplace matrix: ascending eigenvalues and
/// orthonormal eigenvectors (columns).
struct SpectralData {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
};

struct HeatKernelMatrix {
    double t = 0.0;
    Eigen::MatrixXd values;
};

struct TriangleGeometry {
    double area = 0.0;
    double circumradius = 0.0;
    double inradius = 0.0;
};

/// Corner angles from the edge-length metric via the cosine law, with the
/// ratio clamped to [-1, 1]. Throws std::domain_error naming the first face
/// whose triangle inequalities fail (relative slack kDegeneracySlack).
CornerAngles corner_angles(const MeshConnectivity& mesh,
                           const PolyhedralMetric& metric);

EdgeWeights cotangent_weights(const MeshConnectivity& mesh,
                              const PolyhedralMetric& metric);

/// Assembles the Laplace matrix; the diagonal is the negated sum of the
/// assembled off-diagonal row so row sums vanish bit for bit.
LaplaceMatrix laplace_matrix(const MeshConnectivity& mesh,
                             const EdgeWeights& weights);

/// Dense symmetric eigendecomposition (desk-scale meshes).
SpectralData spectral_decomposition(const LaplaceMatrix& laplace);

/// K(t) from the spectrum; throws std::invalid_argument for t < 0.
HeatKernelMatrix heat_kernel(const SpectralData& spectral, double t);

/// Forward difference -(K(h) - K(0)) / h, which approaches the Laplace matrix
/// as h -> 0 with O(h) error.
Eigen::MatrixXd heat_kernel_to_laplacian(const SpectralData& spectral, double h);

/// Area (sine formula), circumradius and inradius of a single triangle.
TriangleGeometry face_geometry(const std::array<double, 3>& lengths);

/// Weight file: same `vi vj w` layout as the metric file.
void write_weight_file(std::ostream& out, const MeshConnectivity& mesh,
                       const EdgeWeights& weights);
void write_weight_file(const std::string& path, const MeshConnectivity& mesh,
                       const EdgeWeights& weights);
EdgeWeights read_weight_file(std::istream& in, const MeshConnectivity& mesh);
EdgeWeights read_weight_file(const std::string& path, const MeshConnectivity& mesh);

/// Matrix Market coordinate format, symmetric real, lower triangle.
void write_matrix_market(std::ostream& out, const LaplaceMatrix& laplace);
void write_matrix_market(const std::string& path, const LaplaceMatrix& laplace);

/// Dense text export with a one-line `n t` header.
void write_heat_kernel(std::ostream& out, const HeatKernelMatrix& kernel);
void write_heat_kernel(const std::string& path, const HeatKernelMatrix& kernel);

}  // namespace lapmet
