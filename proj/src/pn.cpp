#include "restframe/pn.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

#include "restframe/solve.hpp"

namespace restframe {

YorkProfile YorkProfile::zero() {
    YorkProfile p;
    p.K = [](double, const Vec3&) { return 0.0; };
    p.dK_dt = [](double, const Vec3&) { return 0.0; };
    p.grad_K = [](double, const Vec3&) { return Vec3{}; };
    return p;
}

YorkProfile YorkProfile::uniform_rate(double delta0, double c) {
    YorkProfile p;
    p.K = [=](double t, const Vec3&) { return c * delta0 * t; };
    p.dK_dt = [=](double, const Vec3&) { return c * delta0; };
    p.grad_K = [](double, const Vec3&) { return Vec3{}; };
    return p;
}

namespace {

double gauge_delta(const YorkProfile& prof, double c, double t, const Vec3& x, const Vec3& v) {
    return (prof.dK_dt(t, x) + dot(v, prof.grad_K(t, x))) / c;
}

// v solves p = m (1 + delta(t, x, v)) v; contraction in the slow-motion regime
Vec3 recover_velocity(const Vec3& p, double m, const YorkProfile& prof, double c, double t,
                      const Vec3& x) {
    Vec3 v = p * (1.0 / m);
    for (int it = 0; it < 60; ++it) {
        double d = gauge_delta(prof, c, t, x, v);
        Vec3 vn = p * (1.0 / (m * (1 + d)));
        if (!std::isfinite(vn.x) || !std::isfinite(vn.y) || !std::isfinite(vn.z))
            throw std::runtime_error("velocity recovery diverged");
        if (norm(vn - v) <= 1e-12 * (1 + norm(vn))) return vn;
        v = vn;
    }
    throw std::runtime_error("velocity recovery did not converge");
}

}  // namespace

PnTrajectory pn_evolve(std::vector<PnBody> bodies, const YorkProfile& profile,
                       const GravityUnits& u, double t0, double t1, double dt, double r_min,
                       int stride) {
    if (bodies.empty()) throw std::invalid_argument("at least one body required");
    for (const auto& b : bodies)
        if (!(b.m > 0)) throw std::invalid_argument("body masses must be positive");
    if (!(dt > 0)) throw std::invalid_argument("time step must be positive");
    if (!(t1 > t0)) throw std::invalid_argument("final time must be after the initial time");
    if (!(r_min > 0)) throw std::invalid_argument("r_min must be positive");
    if (stride < 1) throw std::invalid_argument("stride must be positive");
    if (!profile.dK_dt || !profile.grad_K)
        throw std::invalid_argument("profile derivatives must be set");

    const int N = static_cast<int>(bodies.size());
    const long long nsteps = std::max<long long>(1, std::llround((t1 - t0) / dt));

    std::vector<Vec3> x(N), p(N);
    for (int i = 0; i < N; ++i) {
        x[i] = bodies[i].x;
        double d = gauge_delta(profile, u.c, t0, bodies[i].x, bodies[i].v);
        p[i] = bodies[i].v * (bodies[i].m * (1 + d));
    }

    auto forces = [&](const std::vector<Vec3>& xs) {
        std::vector<Vec3> f(N);
        for (int i = 0; i < N; ++i)
            for (int j = i + 1; j < N; ++j) {
                Vec3 d = xs[j] - xs[i];
                double r = norm(d);
                if (r < r_min) throw std::runtime_error("collision");
                Vec3 fij = d * (u.G * bodies[i].m * bodies[j].m / (r * r * r));
                f[i] += fij;
                f[j] -= fij;
            }
        return f;
    };

    PnTrajectory out;
    auto record = [&](long long step) {
        PnSample s;
        s.t = t0 + static_cast<double>(step) * dt;
        s.bodies.resize(N);
        for (int i = 0; i < N; ++i) {
            Vec3 v = recover_velocity(p[i], bodies[i].m, profile, u.c, s.t, x[i]);
            s.bodies[i] = {bodies[i].m, x[i], v};
            s.energy += 0.5 * bodies[i].m * dot(v, v);
            s.momentum += p[i];
        }
        for (int i = 0; i < N; ++i)
            for (int j = i + 1; j < N; ++j)
                s.energy -= u.G * bodies[i].m * bodies[j].m / norm(x[i] - x[j]);
        out.samples.push_back(std::move(s));
    };

    std::vector<Vec3> F = forces(x);
    record(0);
    for (long long step = 1; step <= nsteps; ++step) {
        double th = t0 + (static_cast<double>(step) - 0.5) * dt;
        for (int i = 0; i < N; ++i) p[i] += F[i] * (0.5 * dt);
        for (int i = 0; i < N; ++i) {
            Vec3 v = recover_velocity(p[i], bodies[i].m, profile, u.c, th, x[i]);
            x[i] += v * dt;
        }
        F = forces(x);
        for (int i = 0; i < N; ++i) p[i] += F[i] * (0.5 * dt);
        if (step % stride == 0 || step == nsteps) record(step);
    }
    return out;
}

double DeltaProfile::operator()(double r) const {
    if (knot_r.empty()) return 0;
    if (r <= knot_r.front()) return knot_delta.front();
    if (r >= knot_r.back()) return knot_delta.back();
    auto it = std::upper_bound(knot_r.begin(), knot_r.end(), r);
    std::size_t hi = static_cast<std::size_t>(it - knot_r.begin());
    std::size_t lo = hi - 1;
    double w = (std::log(r) - std::log(knot_r[lo])) / (std::log(knot_r[hi]) - std::log(knot_r[lo]));
    return knot_delta[lo] + w * (knot_delta[hi] - knot_delta[lo]);
}

std::vector<double> rotation_curve_predict(double M, const DeltaProfile& delta,
                                           const GravityUnits& u,
                                           const std::vector<double>& radii) {
    if (!(M > 0)) throw std::invalid_argument("mass must be positive");
    std::vector<double> v;
    v.reserve(radii.size());
    for (double r : radii) {
        if (!(r > 0)) throw std::invalid_argument("radii must be positive");
        double onepd = 1 + delta(r);
        if (!(onepd > 0)) throw std::domain_error("delta profile reaches -1");
        v.push_back(std::sqrt(u.G * M / (r * onepd)));
    }
    return v;
}

RotationCurveFit rotation_curve_fit(const std::vector<double>& radii,
                                    const std::vector<double>& speeds, double M,
                                    const GravityUnits& u, std::vector<double> knot_radii) {
    if (radii.size() != speeds.size() || radii.empty())
        throw std::invalid_argument("one speed per radius required");
    if (!(M > 0)) throw std::invalid_argument("mass must be positive");
    if (knot_radii.empty()) throw std::invalid_argument("at least one knot required");
    for (std::size_t k = 0; k < knot_radii.size(); ++k)
        if (!(knot_radii[k] > 0) || (k > 0 && knot_radii[k] <= knot_radii[k - 1]))
            throw std::invalid_argument("knot radii must be positive and strictly increasing");
    for (double r : radii)
        if (!(r > 0)) throw std::invalid_argument("radii must be positive");

    ModelFn model = [&](double r, std::span<const double> params) {
        DeltaProfile dp{knot_radii, {params.begin(), params.end()}};
        double onepd = 1 + dp(r);
        double v2 = u.G * M / (r * onepd);
        return v2 > 0 ? std::sqrt(v2) : std::numeric_limits<double>::quiet_NaN();
    };
    FitResult fr =
        least_squares_fit(model, std::vector<double>(knot_radii.size(), 0.0), {radii, speeds});

    RotationCurveFit out;
    out.delta = DeltaProfile{std::move(knot_radii), std::move(fr.params)};
    out.residuals = std::move(fr.residuals);
    out.rms = fr.rms;
    out.halo_mass.reserve(radii.size());
    for (double r : radii) out.halo_mass.push_back(M * out.delta(r));
    return out;
}

}  // namespace restframe
