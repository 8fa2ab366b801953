#include "restframe/kinematics.hpp"

#include <cmath>

namespace restframe {

Mat4 wigner_boost(const Vec3& h) {
    const double gamma = std::sqrt(1.0 + dot(h, h));
    Mat4 B;
    B(0, 0) = gamma;
    for (int i = 0; i < 3; ++i) {
        B(i + 1, 0) = h[i];       // column tau
        B(0, i + 1) = h[i];       // time row of column r
        for (int j = 0; j < 3; ++j)
            B(i + 1, j + 1) = (i == j ? 1.0 : 0.0) + h[i] * h[j] / (1.0 + gamma);
    }
    return B;
}

Vec4 embed(const Embedding& e, double tau, const Vec3& sigma) {
    Mat4 B = wigner_boost(e.h);
    Vec4 radar{tau, sigma.x, sigma.y, sigma.z};
    return e.Y0 + B * radar;
}

ExternalGenerators external_generators(const JacobiData& j) {
    const double gamma = std::sqrt(1.0 + dot(j.h, j.h));
    ExternalGenerators g;
    g.P = Vec4{j.Mc * gamma, j.Mc * j.h.x, j.Mc * j.h.y, j.Mc * j.h.z};
    g.J = cross(j.z, j.h) + j.S;
    g.K = -gamma * j.z + cross(j.S, j.h) / (1.0 + gamma);
    return g;
}

Mat4 generator_matrix(const ExternalGenerators& g) {
    Mat4 M;
    for (int i = 0; i < 3; ++i) {
        M(0, i + 1) = g.K[i];
        M(i + 1, 0) = -g.K[i];
    }
    // J^{ij} = eps^{ijk} J_k
    M(1, 2) = g.J.z;
    M(2, 1) = -g.J.z;
    M(2, 3) = g.J.x;
    M(3, 2) = -g.J.x;
    M(3, 1) = g.J.y;
    M(1, 3) = -g.J.y;
    return M;
}

double moller_radius(double Mc, const Vec3& S) {
    if (Mc <= 0) throw std::domain_error("non-time-like configuration");
    return norm(S) / Mc;
}

}  // namespace restframe
