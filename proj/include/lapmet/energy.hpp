#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <array>

#include "lapmet/laplace.hpp"
#include "lapmet/mesh.hpp"
#include "lapmet/metric.hpp"

namespace lapmet {

// Derivative of the cotangent triple (cot t_i, cot t_j, cot t_k) with respect
// to (u_i, u_j, u_k) on one face. Symmetric with kernel containing
// (u_i, u_j, u_k); the negated matrix is positive semidefinite.
struct FaceHessianBlock {
    Eigen::Matrix3d values;
};

// Gradient of the algorithm energy: g_k = target_k - w_k(u).
struct EnergyGradient {
    Eigen::VectorXd g;
};

// Hessian of the algorithm energy, -dw/du, an m x m sparse symmetric matrix.
// Positive semidefinite; on a connected mesh its kernel is spanned by the
// scaling direction u, which is not tangent to the normalization constraint.
struct TotalHessian {
    Eigen::SparseMatrix<double> matrix;
};

// Cotangents (cot t_i, cot t_j, cot t_k) of the triangle with squared
// half-lengths u_face. Throws std::domain_error for an inadmissible face.
std::array<double, 3> face_gradient(const std::array<double, 3>& u_face);

FaceHessianBlock face_hessian(const std::array<double, 3>& u_face);

EnergyGradient assemble_gradient(const MeshConnectivity& mesh,
                                 const UCoordinates& u,
                                 const EdgeWeights& target);

// Assembles -1/2 times each face block into the edge-indexed Hessian. Face
// order is fixed, so the accumulation is deterministic.
TotalHessian assemble_hessian(const MeshConnectivity& mesh,
                              const UCoordinates& u);

// Line integral of sum_k (target_k - w_k(mu)) dmu_k along the straight
// segment from u_ref to u, evaluated with fixed 32-point Gauss-Legendre
// quadrature. The integrand is a closed form, so the value depends only on
// the endpoints. Admissibility is sampled at the quadrature nodes; a node
// outside the admissible region throws std::domain_error.
double energy_value(const MeshConnectivity& mesh, const UCoordinates& u,
                    const EdgeWeights& target, const UCoordinates& u_ref);

}  // namespace lapmet
