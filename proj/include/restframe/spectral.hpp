#pragma once

#include "restframe/grid.hpp"

namespace restframe {

/*
 * Spectral calculus on the periodic lattice.
 *
 * All derivative operators act mode-wise with angular wavenumbers
 * k_m = 2*pi*m/(n*spacing), m in (-n/2, n/2).  First derivatives of the
 * Nyquist plane are not representable as odd functions, so the Nyquist
 * wavenumber is set to zero in every operator, including the Laplacian,
 * which is built as the divergence-of-gradient symbol |k|^2.  That keeps
 * the operator family mutually consistent: grad/div/curl/laplacian/
 * inverse_laplacian compose exactly on any sampled field.
 *
 * laplacian returns -del^2 f (positive spectrum), matching the convention
 * in which the Coulomb potential solves  triangle eta = -div A  with
 * eta = -(1/triangle) div A.
 */

ScalarField laplacian(const ScalarField& f);

// Inverse of `laplacian` on mean-free fields.  The |k|=0 mode of 1/|k|^2 does
// not exist on the torus; callers must subtract the mean first.  Throws
// std::domain_error("zero-mode not invertible on torus") when the input mean
// is not negligible against the field scale.
ScalarField inverse_laplacian(const ScalarField& f);

VectorField3 gradient(const ScalarField& f);
ScalarField divergence(const VectorField3& f);
VectorField3 curl(const VectorField3& f);

/*
 * Exact region calculus on the band-limited interpolant.
 *
 * box_integral evaluates the closed-form integral of the trigonometric
 * interpolant of f over the box; box_flux evaluates the closed-form flux of
 * a vector interpolant through the box boundary.  Both drop the Nyquist
 * planes (consistent with the derivative convention above), so the exact
 * divergence theorem  box_flux(F, B) = box_integral(divergence(F), B)
 * holds to rounding for every sampled field and every box.
 */
double box_integral(const ScalarField& f, const Box& b);
double box_flux(const VectorField3& f, const Box& b);

// Lattice (midpoint-sum) integral over the points falling inside the box.
double box_lattice_sum(const ScalarField& f, const Box& b);

}  // namespace restframe
