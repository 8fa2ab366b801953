#include "restframe/brackets.hpp"

#include <cmath>

namespace restframe {

double poisson_bracket_fd(const PhaseFn& F, const PhaseFn& G, const PhasePoint& x, double h) {
    const std::size_t n = x.dim();
    if (h <= 0) {
        double norm2 = 0;
        for (std::size_t i = 0; i < n; ++i) norm2 += x.q[i] * x.q[i] + x.p[i] * x.p[i];
        h = 1e-5 * (1.0 + std::sqrt(norm2));
    }

    auto partial = [&](const PhaseFn& f, bool wrt_q, std::size_t i) {
        PhasePoint xp = x, xm = x;
        (wrt_q ? xp.q[i] : xp.p[i]) += h;
        (wrt_q ? xm.q[i] : xm.p[i]) -= h;
        return (f(xp) - f(xm)) / (2 * h);
    };

    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += partial(F, true, i) * partial(G, false, i) - partial(F, false, i) * partial(G, true, i);
    }
    return sum;
}

}  // namespace restframe
