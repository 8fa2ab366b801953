#pragma once

#include <functional>
#include <span>
#include <vector>

namespace restframe {

using ResidualFn = std::function<std::vector<double>(std::span<const double> x)>;

/*
 * Damped Newton iteration with a forward-difference Jacobian.  Accepts a step
 * only when it reduces |r|, halving up to 30 times before giving up.  Throws
 * std::runtime_error with the last residual norm in the message when the
 * target tolerance is not reached.
 */
std::vector<double> newton_solve(const ResidualFn& residual, std::vector<double> x0,
                                 double tol = 1e-10, int max_iter = 50);

struct FitData {
    std::vector<double> x, y;
};

struct FitResult {
    std::vector<double> params;
    std::vector<double> residuals;  // model - data, per point
    double rms = 0;
    int iterations = 0;
};

using ModelFn = std::function<double(double x, std::span<const double> params)>;

/*
 * Levenberg-Marquardt least squares of model(x; params) against (x, y) pairs.
 * Jacobian by forward differences; the damping factor backs off by 10 on a
 * rejected step.  A model returning non-finite values at a trial point
 * rejects the step rather than aborting.  Throws
 * std::runtime_error("degenerate fit") when the normal equations stay
 * unsolvable or the iteration stalls without converging.
 */
FitResult least_squares_fit(const ModelFn& model, std::vector<double> params0,
                            const FitData& data, double tol = 1e-12, int max_iter = 200);

}  // namespace restframe
