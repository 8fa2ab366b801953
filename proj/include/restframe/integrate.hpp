#pragma once

#include <functional>
#include <span>
#include <vector>

namespace restframe {

struct PhasePoint {
    std::vector<double> q, p;

    std::size_t dim() const { return q.size(); }
};

using ForceFn = std::function<std::vector<double>(std::span<const double> q)>;
using GradFn = std::function<std::vector<double>(std::span<const double> q, std::span<const double> p)>;

// One kick-drift-kick step for H = sum p^2/(2m) + V(q), force = -dV/dq.
// Empty `masses` means unit masses.  Throws std::runtime_error("dynamics
// diverged") when the state stops being finite.
PhasePoint leapfrog_step(const PhasePoint& s, const ForceFn& force, double dt,
                         std::span<const double> masses = {});

// Implicit midpoint step for a general H(q,p):
//   q' = q + dt * dHdp(mid),  p' = p - dt * dHdq(mid),  mid = (s + s')/2,
// solved by fixed-point iteration.  Symplectic for non-separable H.
PhasePoint implicit_midpoint_step(const PhasePoint& s, const GradFn& dHdq, const GradFn& dHdp,
                                  double dt, double fixed_point_tol = 1e-12, int max_iter = 50);

}  // namespace restframe
