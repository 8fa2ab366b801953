#pragma once

#include <vector>

#include "restframe/spectral.hpp"

namespace restframe {

/*
 * Free electromagnetic field on the Wigner 3-space in radar coordinates,
 * periodic lattice discretization.  (A_tau, A_r) carry conjugate momenta
 * (pi_tau, pi^r); pi_tau ~ 0 and the Gauss law Gamma = div pi ~ 0 are the
 * first-class constraints.
 */
struct EmState {
    Grid3 grid;
    ScalarField A_tau, pi_tau;
    VectorField3 A, pi;

    EmState() = default;
    explicit EmState(const Grid3& g) : grid(g), A_tau(g), pi_tau(g), A(g), pi(g) {}
};

/*
 * Canonical splitting of the potentials into gauge and radiation parts:
 *   eta    = -(1/triangle) div A        (longitudinal gauge variable)
 *   A_perp = A - grad eta - <A>         (transverse, mean-free)
 *   Gamma  = div pi                     (Gauss constraint)
 *   pi_perp = pi + (1/triangle) grad Gamma - <pi>
 * The lattice zero modes <A>, <pi> have no longitudinal/transverse meaning
 * and are carried separately; recompose restores them.
 */
struct EmDecomposition {
    Grid3 grid;
    ScalarField A_tau, pi_tau;
    ScalarField eta, Gamma;
    VectorField3 A_perp, pi_perp;
    Vec3 A_mean, pi_mean;

    EmDecomposition() = default;
    explicit EmDecomposition(const Grid3& g)
        : grid(g), A_tau(g), pi_tau(g), eta(g), Gamma(g), A_perp(g), pi_perp(g) {}
};

EmDecomposition decompose(const EmState& s);

// Exact inverse of decompose:  A = grad eta + A_perp + <A>,
// pi = pi_perp - (1/triangle) grad Gamma + <pi>.  Throws
// std::invalid_argument("invalid decomposition") when the claimed transverse
// parts fail div = 0 beyond 1e-8 of their scale.
EmState recompose(const EmDecomposition& d);

// Radiation-sector energy (1/2) integral (pi_perp^2 + B^2), B = curl A_perp.
double radiation_energy(const EmDecomposition& d);

double max_transverse_violation(const EmDecomposition& d);  // max |div A_perp|, |div pi_perp|

struct EmEvolveSample {
    double tau = 0;
    double energy = 0;
    double max_div_A_perp = 0;
};

struct EmEvolveResult {
    EmDecomposition final_state;
    std::vector<EmEvolveSample> series;
};

/*
 * Free radiation dynamics d A_perp/d tau = -pi_perp, d pi_perp/d tau =
 * triangle A_perp (each transverse mode is an oscillator at omega = |k|),
 * integrated by kick-drift-kick leapfrog.  The gauge sector and Gamma are
 * untouched.  Requires dt <= 0.5 spacing / sqrt(3); throws
 * std::invalid_argument("CFL violation") before stepping otherwise.
 */
EmEvolveResult evolve_free(const EmDecomposition& d, double tau0, double tau1, double dt,
                           int stride = 1);

// Kinematical gauge flow d A_tau/d tau = lambda_tau, d eta/d tau = A_tau
// (one explicit Euler step; the radiation sector is untouched).
void gauge_step(EmDecomposition& d, const ScalarField& lambda_tau, double dt);

/*
 * Smeared charge distribution: Gaussian bumps of width w_i and total charge
 * e_i, minimum-image on the torus.  Construction checks that each bump's
 * lattice integral reproduces e_i to 1e-8 (needs w >~ 2.2 spacing and
 * w <~ L/10).
 */
struct ChargeSpec {
    double e = 0;
    Vec3 center;
    double width = 1;
};

ScalarField make_charge_density(const Grid3& g, const std::vector<ChargeSpec>& charges);

// Gauss-law residual Gamma - rho, pointwise.
ScalarField gauss_residual(const EmDecomposition& d, const ScalarField& rho);

/*
 * Strong vs weak charge over a region:
 *   Q_strong = flux of pi through the region boundary,
 *   Q_weak   = integral of rho over the region,
 * related by Q_strong = Q_weak + integral (Gamma - rho).  Flux and volume
 * integrals are the exact interpolant integrals of spectral.hpp, so the
 * identity holds to rounding for every state.
 */
struct ChargePair {
    double Q_strong = 0;
    double Q_weak = 0;
    double gamma_minus_rho = 0;  // integral over the region
};

ChargePair charge_identity(const EmDecomposition& d, const ScalarField& rho, const Box& region);

}  // namespace restframe
