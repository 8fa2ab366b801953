#pragma once

#include <functional>
#include <vector>

#include "restframe/york.hpp"

namespace restframe {

/*
 * Inertial-gauge-effect profile: the first-order York time K_tilde(t, x)
 * enters the slow-motion equations of motion only through
 * delta(t, x, v) = (1/c) (d/dt + v . grad) K_tilde.  Analytic time and
 * space derivatives are supplied with the profile.
 */
struct YorkProfile {
    std::function<double(double t, const Vec3& x)> K;
    std::function<double(double t, const Vec3& x)> dK_dt;
    std::function<Vec3(double t, const Vec3& x)> grad_K;

    static YorkProfile zero();
    // K = c * delta0 * t: spatially uniform rate, (1/c) dK/dt = delta0.
    static YorkProfile uniform_rate(double delta0, double c);
};

struct PnBody {
    double m = 1;
    Vec3 x;
    Vec3 v;
};

struct PnSample {
    double t = 0;
    std::vector<PnBody> bodies;
    double energy = 0;       // Newtonian E = sum m v^2/2 - G sum m m / r
    Vec3 momentum;           // modified momentum sum m (1 + delta_i) v_i
};

struct PnTrajectory {
    std::vector<PnSample> samples;
};

/*
 * Slow-motion equations of motion with the inertial gauge term:
 *   d/dt [ m_i (1 + delta_i) v_i ] = -G d/dx_i sum_{j<i} m_i m_j / |x_i-x_j|,
 *   delta_i = (1/c)(d/dt + v_i . grad) K_tilde(t, x_i).
 * Leapfrog on (x, p); the velocity is recovered from the modified momentum
 * by fixed-point iteration (tol 1e-12).  delta = 0 reduces exactly to
 * Newtonian gravity.  Throws std::runtime_error("collision") when any
 * separation falls under r_min.
 */
PnTrajectory pn_evolve(std::vector<PnBody> bodies, const YorkProfile& profile,
                       const GravityUnits& u, double t0, double t1, double dt,
                       double r_min = 1e-8, int stride = 1);

/*
 * Piecewise-linear profile of delta(r) in log r; constant extrapolation
 * outside the knot range.  This is the direct radial parameterization of
 * (1/c) dK_tilde/dt used by the rotation-curve pipeline.
 */
struct DeltaProfile {
    std::vector<double> knot_r;      // sorted, > 0
    std::vector<double> knot_delta;

    double operator()(double r) const;
};

// Circular speed around a central mass M with the inertial gauge term:
// v(r) = sqrt( G M / (r (1 + delta(r))) ).
std::vector<double> rotation_curve_predict(double M, const DeltaProfile& delta,
                                           const GravityUnits& u, const std::vector<double>& radii);

struct RotationCurveFit {
    DeltaProfile delta;
    std::vector<double> residuals;   // v_model - v_data
    double rms = 0;
    std::vector<double> halo_mass;   // equivalent dark-mass profile M delta(r_i) at the data radii
};

/*
 * Fits the knot values of delta(r) to observed circular speeds by
 * Levenberg-Marquardt.  Knots outside the data range or otherwise
 * unconstrained leave the normal equations singular and raise
 * std::runtime_error("degenerate fit").
 */
RotationCurveFit rotation_curve_fit(const std::vector<double>& radii,
                                    const std::vector<double>& speeds, double M,
                                    const GravityUnits& u, std::vector<double> knot_radii);

}  // namespace restframe
