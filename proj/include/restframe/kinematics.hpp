#pragma once

#include <stdexcept>

#include "restframe/geometry.hpp"

namespace restframe {

/*
 * Inertial rest-frame kinematics on Wigner hyperplanes.
 *
 * A global non-interacting frame is fixed by the Jacobi data of the external
 * centre of mass: canonical pair (z, h) with {z^i, h^j} = delta^ij, the
 * invariant mass times c, and the rest spin S with {S^i, S^j} = eps^ijk S^k.
 * h = P/(Mc) is dimensionless; sqrt(1 + h^2) is the associated gamma factor.
 */
struct JacobiData {
    Vec3 z;     // frozen Jacobi position (Newton-Wigner-like, times Mc)
    Vec3 h;     // unit-mass momentum P/(Mc)
    double Mc;  // invariant mass * c, > 0
    Vec3 S;     // rest-frame (Thomas) spin
};

/*
 * Columns eps^mu_A(h) of the standard Wigner boost sending (1,0,0,0) to
 * u(h) = (sqrt(1+h^2); h):
 *   column tau: ( sqrt(1+h^2) ; h^i )
 *   column r:   ( h_r ; delta^i_r + h^i h_r / (1 + sqrt(1+h^2)) )
 * Preserves the Minkowski metric for either signature convention.
 */
Mat4 wigner_boost(const Vec3& h);

/*
 * Flat foliation z^mu(tau, sigma) = Y0^mu + eps^mu_A(h) (tau; sigma)^A: the
 * instant-form embedding whose tau = const leaves are the Wigner 3-spaces
 * orthogonal to P.  Affine in (tau, sigma) by construction.
 */
struct Embedding {
    Vec4 Y0;
    Vec3 h;
};

Vec4 embed(const Embedding& e, double tau, const Vec3& sigma);

/*
 * External Poincare generators built from Jacobi data:
 *   P^mu  = Mc (sqrt(1+h^2); h)
 *   J^ij  = z^i h^j - z^j h^i + eps^ijk S^k    (stored as its dual vector)
 *   K^i   = J^0i = -sqrt(1+h^2) z^i + (S x h)^i / (1 + sqrt(1+h^2))
 */
struct ExternalGenerators {
    Vec4 P;
    Vec3 J;  // J^k = (1/2) eps^kij J^ij
    Vec3 K;
};

ExternalGenerators external_generators(const JacobiData& j);

// Antisymmetric J^{mu nu} with J^{0i} = K^i and J^{ij} = eps^{ijk} J_dual^k.
Mat4 generator_matrix(const ExternalGenerators& g);

// Moller radius |S| / Mc: the invariant radius of the worldtube where the
// centre-of-mass candidates differ.  Throws std::domain_error
// ("non-time-like configuration") for Mc <= 0.
double moller_radius(double Mc, const Vec3& S);

}  // namespace restframe
