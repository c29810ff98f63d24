#include "lapmet/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace lapmet {

namespace {

struct FaceTrig {
    std::array<double, 3> d;     // edge lengths sqrt(2u)
    std::array<double, 3> cosv;  // cosine of the angle opposite each edge
    std::array<double, 3> sinv;
};

FaceTrig face_trig(const std::array<double, 3>& u_face) {
    FaceTrig t;
    for (int a = 0; a < 3; ++a) {
        if (!(u_face[a] > 0.0)) {
            throw std::domain_error("inadmissible face");
        }
        t.d[a] = std::sqrt(2.0 * u_face[a]);
    }
    if (triangle_margin(t.d[0], t.d[1], t.d[2]) <= 0.0) {
        throw std::domain_error("inadmissible face");
    }
    for (int a = 0; a < 3; ++a) {
        const double b = t.d[(a + 1) % 3];
        const double c = t.d[(a + 2) % 3];
        const double ratio = (b * b + c * c - t.d[a] * t.d[a]) / (2.0 * b * c);
        t.cosv[a] = std::clamp(ratio, -1.0, 1.0);
        t.sinv[a] = std::sqrt(1.0 - t.cosv[a] * t.cosv[a]);
    }
    return t;
}

struct Quadrature {
    std::array<double, 32> nodes;    // on (0, 1)
    std::array<double, 32> weights;  // summing to 1
};

// Gauss-Legendre nodes by Newton iteration on the Legendre recurrence,
// mapped from [-1, 1] to [0, 1].
Quadrature gauss_legendre_32() {
    constexpr int n = 32;
    Quadrature q;
    for (int i = 0; i < n / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double p = 0.0;
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double prev = 0.0;
            p = 1.0;
            for (int j = 0; j < n; ++j) {
                const double older = prev;
                prev = p;
                p = ((2.0 * j + 1.0) * x * prev - j * older) / (j + 1.0);
            }
            dp = n * (x * p - prev) / (x * x - 1.0);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        q.nodes[i] = 0.5 * (1.0 - x);
        q.nodes[n - 1 - i] = 0.5 * (1.0 + x);
        q.weights[i] = 0.5 * w;
        q.weights[n - 1 - i] = 0.5 * w;
    }
    return q;
}

const Quadrature& quadrature() {
    static const Quadrature q = gauss_legendre_32();
    return q;
}

void require_sizes(const MeshConnectivity& mesh, const Eigen::VectorXd& v,
                   const char* what) {
    if (v.size() != mesh.edge_count()) {
        throw std::invalid_argument(std::string(what) +
                                    " does not match edge count");
    }
}

}  // namespace

std::array<double, 3> face_gradient(const std::array<double, 3>& u_face) {
    const FaceTrig t = face_trig(u_face);
    return {t.cosv[0] / t.sinv[0], t.cosv[1] / t.sinv[1],
            t.cosv[2] / t.sinv[2]};
}

FaceHessianBlock face_hessian(const std::array<double, 3>& u_face) {
    const FaceTrig t = face_trig(u_face);
    const TriangleGeometry geo = face_geometry({t.d[0], t.d[1], t.d[2]});
    const double factor =
        2.0 * geo.circumradius * geo.circumradius / geo.area;
    FaceHessianBlock block;
    for (int a = 0; a < 3; ++a) {
        block.values(a, a) = -factor / (t.d[a] * t.d[a]);
        for (int b = 0; b < 3; ++b) {
            if (b == a) continue;
            const int c = 3 - a - b;
            block.values(a, b) = factor * t.cosv[c] / (t.d[a] * t.d[b]);
        }
    }
    return block;
}

EnergyGradient assemble_gradient(const MeshConnectivity& mesh,
                                 const UCoordinates& u,
                                 const EdgeWeights& target) {
    require_sizes(mesh, u.values, "u vector");
    require_sizes(mesh, target.w, "target weight vector");
    const EdgeWeights w = cotangent_weights(mesh, from_u(u));
    EnergyGradient out;
    out.g = target.w - w.w;
    return out;
}

TotalHessian assemble_hessian(const MeshConnectivity& mesh,
                              const UCoordinates& u) {
    require_sizes(mesh, u.values, "u vector");
    if (const auto adm = is_admissible(u, mesh); !adm) {
        throw std::domain_error("face " + std::to_string(adm.violating_face) +
                                " is inadmissible");
    }
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(9 * mesh.face_count());
    for (int f = 0; f < mesh.face_count(); ++f) {
        const auto& fe = mesh.face_edges[f];
        const FaceHessianBlock block = face_hessian(
            {u.values[fe[0]], u.values[fe[1]], u.values[fe[2]]});
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                triplets.emplace_back(fe[a], fe[b], -0.5 * block.values(a, b));
            }
        }
    }
    TotalHessian out;
    out.matrix.resize(mesh.edge_count(), mesh.edge_count());
    out.matrix.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

double energy_value(const MeshConnectivity& mesh, const UCoordinates& u,
                    const EdgeWeights& target, const UCoordinates& u_ref) {
    require_sizes(mesh, u.values, "u vector");
    require_sizes(mesh, target.w, "target weight vector");
    require_sizes(mesh, u_ref.values, "reference u vector");
    const Eigen::VectorXd delta = u.values - u_ref.values;
    const Quadrature& q = quadrature();
    double total = 0.0;
    for (int k = 0; k < static_cast<int>(q.nodes.size()); ++k) {
        UCoordinates mu;
        mu.values = u_ref.values + q.nodes[k] * delta;
        if (!(mu.values.array() > 0.0).all() ||
            !is_admissible(mu, mesh, kDegeneracySlack)) {
            throw std::domain_error(
                "segment exits admissible region at quadrature node " +
                std::to_string(k));
        }
        const EdgeWeights w = cotangent_weights(mesh, from_u(mu));
        total += q.weights[k] * (target.w - w.w).dot(delta);
    }
    return total;
}

}  // namespace lapmet
