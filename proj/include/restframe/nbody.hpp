#pragma once

#include <functional>
#include <vector>

#include "restframe/kinematics.hpp"

namespace restframe {

/*
 * Relativistic N-body system living on the Wigner 3-spaces.  eta_i are the
 * Wigner 3-positions, kappa_i the conjugate momenta ({eta^r, kappa^s} =
 * delta^rs), m_i c the rest masses in momentum units.
 */
struct Particle {
    double m = 1;
    Vec3 eta;
    Vec3 kappa;
};

struct ParticleSystem {
    std::vector<Particle> particles;
    double c = 1;
};

/*
 * Internal realization of the Poincare algebra inside the rest frame:
 *   Mc = sum sqrt(m_i^2 c^2 + kappa_i^2) + V
 *   P  = sum kappa_i            (rest-frame condition P ~ 0)
 *   J  = sum eta_i x kappa_i
 *   K  = -sum eta_i sqrt(m_i^2 c^2 + kappa_i^2)   (centre-of-mass condition K ~ 0)
 * V is an optional potential on the pairwise separations; the boost uses the
 * free energies (see TwoBodyMass).
 */
struct InternalGenerators {
    double Mc = 0;
    Vec3 P, J, K;
};

using PairPotential = std::function<double(double r)>;  // V(|eta_i - eta_j|), summed over pairs

InternalGenerators internal_generators(const ParticleSystem& s, const PairPotential& V = nullptr);

/*
 * Canonical two-body relative coordinates:
 *   eta_+ = (m1 eta_1 + m2 eta_2)/m,  rho = eta_1 - eta_2,
 *   kappa_+ = kappa_1 + kappa_2,      pi  = (m2 kappa_1 - m1 kappa_2)/m.
 * The transform is linear and symplectic; merge is its exact inverse.
 */
struct TwoBodySplit {
    double m1 = 1, m2 = 1;
    Vec3 eta_plus, rho;
    Vec3 kappa_plus, pi;
};

TwoBodySplit two_body_split(const Particle& p1, const Particle& p2);
std::pair<Particle, Particle> two_body_merge(const TwoBodySplit& s);

/*
 * Gauge fixing of the internal centre of mass for free particles: solving
 * K = 0 at kappa_+ = 0 gives the closed form
 *   eta_+ = [ (m1/m) E2 - (m2/m) E1 ] / (E1 + E2) * rho,
 * E_i = sqrt(m_i^2 c^2 + pi^2).  Exactly zero for equal masses.
 */
Vec3 free_eta_plus(const Vec3& pi, const Vec3& rho, double m1, double m2, double c);

/*
 * Invariant mass of the relative motion, Mc(rho, pi).  `separable` marks the
 * kinetic-plus-potential form sum_i sqrt(m_i^2 c^2 + pi^2) + V(|rho|) for
 * which the exact-drift leapfrog applies; other forms are integrated with
 * the implicit midpoint rule.
 */
struct TwoBodyMass {
    double m1 = 1, m2 = 1, c = 1;
    PairPotential V;       // may be null (free)
    PairPotential dV;      // dV/dr, required when V is set
    bool separable = true;
    std::function<double(const Vec3& rho, const Vec3& pi)> custom;  // overrides the separable form

    double value(const Vec3& rho, const Vec3& pi) const;
    Vec3 d_rho(const Vec3& rho, const Vec3& pi) const;  // dMc/drho
    Vec3 d_pi(const Vec3& rho, const Vec3& pi) const;   // dMc/dpi
};

TwoBodyMass free_mass(double m1, double m2, double c);
TwoBodyMass coulomb_mass(double m1, double m2, double c, double alpha);            // V = -alpha/r
TwoBodyMass yukawa_mass(double m1, double m2, double c, double alpha, double mu);  // V = -alpha e^{-mu r}/r

/*
 * Newton-solves the rest-frame condition K(eta_+; rho, pi) = 0 at
 * kappa_+ = 0 using the free-form boost generator (the interacting K is not
 * closed-form; the free energies fix the gauge consistently).  Throws
 * std::runtime_error("boost constraint not solvable at this state") when the
 * iteration fails.  massFn is accepted for interface stability.
 */
Vec3 solve_rest_frame(const TwoBodySplit& s, const TwoBodyMass& massFn, double c);

struct TrajectorySample {
    double tau = 0;
    TwoBodySplit state;
    InternalGenerators gen;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    double m1 = 1, m2 = 1, c = 1;
};

/*
 * Hamiltonian evolution of (rho, pi) with H = Mc, sampled every `stride`
 * steps (sample 0 is the initial state).  Leapfrog for separable Mc,
 * implicit midpoint otherwise.  Throws std::runtime_error("dynamics
 * diverged"), reporting the last finite tau, if the state leaves the finite
 * range.
 */
Trajectory evolve(const TwoBodySplit& init, const TwoBodyMass& mass, double tau0, double tau1,
                  double dt, int stride = 1);

// World-lines x_i^mu(tau_k) = embed(e, tau_k, eta_i(tau_k)) for both bodies.
struct WorldLines {
    std::vector<double> tau;
    std::vector<Vec4> x1, x2;
};

WorldLines reconstruct_worldlines(const Trajectory& t, const Embedding& e);

}  // namespace restframe
