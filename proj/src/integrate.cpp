#include "restframe/integrate.hpp"

#include <cmath>
#include <stdexcept>

namespace restframe {

namespace {

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

PhasePoint leapfrog_step(const PhasePoint& s, const ForceFn& force, double dt,
                         std::span<const double> masses) {
    if (s.q.size() != s.p.size()) throw std::invalid_argument("phase point q/p size mismatch");
    if (!masses.empty() && masses.size() != s.q.size())
        throw std::invalid_argument("mass vector size mismatch");

    auto m = [&](std::size_t i) { return masses.empty() ? 1.0 : masses[i]; };
    PhasePoint out = s;

    std::vector<double> F = force(out.q);
    if (!all_finite(F)) throw std::runtime_error("dynamics diverged");
    for (std::size_t i = 0; i < out.p.size(); ++i) out.p[i] += 0.5 * dt * F[i];
    for (std::size_t i = 0; i < out.q.size(); ++i) out.q[i] += dt * out.p[i] / m(i);
    F = force(out.q);
    if (!all_finite(F)) throw std::runtime_error("dynamics diverged");
    for (std::size_t i = 0; i < out.p.size(); ++i) out.p[i] += 0.5 * dt * F[i];

    if (!all_finite(out.q) || !all_finite(out.p)) throw std::runtime_error("dynamics diverged");
    return out;
}

PhasePoint implicit_midpoint_step(const PhasePoint& s, const GradFn& dHdq, const GradFn& dHdp,
                                  double dt, double fixed_point_tol, int max_iter) {
    const std::size_t n = s.q.size();
    std::vector<double> qm = s.q, pm = s.p;
    for (int it = 0; it < max_iter; ++it) {
        std::vector<double> gq = dHdq(qm, pm), gp = dHdp(qm, pm);
        if (!all_finite(gq) || !all_finite(gp)) throw std::runtime_error("dynamics diverged");
        double delta = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double qn = s.q[i] + 0.5 * dt * gp[i];
            double pn = s.p[i] - 0.5 * dt * gq[i];
            delta = std::max({delta, std::abs(qn - qm[i]), std::abs(pn - pm[i])});
            qm[i] = qn;
            pm[i] = pn;
        }
        if (delta <= fixed_point_tol) {
            PhasePoint out;
            out.q.resize(n);
            out.p.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                out.q[i] = 2 * qm[i] - s.q[i];
                out.p[i] = 2 * pm[i] - s.p[i];
            }
            return out;
        }
    }
    throw std::runtime_error("implicit midpoint iteration did not converge");
}

}  // namespace restframe
