#pragma once

#include <functional>

#include "restframe/integrate.hpp"

namespace restframe {

using PhaseFn = std::function<double(const PhasePoint&)>;

/*
 * Poisson bracket {F,G} = sum_i dF/dq_i dG/dp_i - dF/dp_i dG/dq_i evaluated
 * with central differences.  Step h <= 0 selects the default
 * h = 1e-5 * (1 + |x|), |x| the Euclidean norm of the phase point, which
 * balances O(h^2) truncation against roundoff for order-1 generators.
 */
double poisson_bracket_fd(const PhaseFn& F, const PhaseFn& G, const PhasePoint& x, double h = 0.0);

}  // namespace restframe
