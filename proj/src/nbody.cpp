#include "restframe/nbody.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "restframe/solve.hpp"

namespace restframe {

namespace {

double free_energy(double m, double c, const Vec3& kappa) {
    return std::sqrt(m * m * c * c + dot(kappa, kappa));
}

bool finite(const Vec3& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

}  // namespace

InternalGenerators internal_generators(const ParticleSystem& s, const PairPotential& V) {
    InternalGenerators g;
    for (const Particle& p : s.particles) {
        double E = free_energy(p.m, s.c, p.kappa);
        g.Mc += E;
        g.P += p.kappa;
        g.J += cross(p.eta, p.kappa);
        g.K -= p.eta * E;
    }
    if (V) {
        for (std::size_t i = 0; i < s.particles.size(); ++i)
            for (std::size_t j = i + 1; j < s.particles.size(); ++j)
                g.Mc += V(norm(s.particles[i].eta - s.particles[j].eta));
    }
    return g;
}

TwoBodySplit two_body_split(const Particle& p1, const Particle& p2) {
    const double m = p1.m + p2.m;
    TwoBodySplit s;
    s.m1 = p1.m;
    s.m2 = p2.m;
    s.eta_plus = (p1.m / m) * p1.eta + (p2.m / m) * p2.eta;
    s.rho = p1.eta - p2.eta;
    s.kappa_plus = p1.kappa + p2.kappa;
    s.pi = (p2.m / m) * p1.kappa - (p1.m / m) * p2.kappa;
    return s;
}

std::pair<Particle, Particle> two_body_merge(const TwoBodySplit& s) {
    const double m = s.m1 + s.m2;
    Particle p1, p2;
    p1.m = s.m1;
    p2.m = s.m2;
    p1.eta = s.eta_plus + (s.m2 / m) * s.rho;
    p2.eta = s.eta_plus - (s.m1 / m) * s.rho;
    p1.kappa = (s.m1 / m) * s.kappa_plus + s.pi;
    p2.kappa = (s.m2 / m) * s.kappa_plus - s.pi;
    return {p1, p2};
}

Vec3 free_eta_plus(const Vec3& pi, const Vec3& rho, double m1, double m2, double c) {
    const double m = m1 + m2;
    const double E1 = free_energy(m1, c, pi), E2 = free_energy(m2, c, pi);
    return ((m1 / m) * E2 - (m2 / m) * E1) / (E1 + E2) * rho;
}

double TwoBodyMass::value(const Vec3& rho, const Vec3& pi) const {
    if (custom) return custom(rho, pi);
    double Mc = free_energy(m1, c, pi) + free_energy(m2, c, pi);
    if (V) Mc += V(norm(rho));
    return Mc;
}

Vec3 TwoBodyMass::d_rho(const Vec3& rho, const Vec3& pi) const {
    if (!custom) {
        if (!V) return {0, 0, 0};
        double r = norm(rho);
        return dV(r) / r * rho;
    }
    Vec3 g;
    double h = 1e-6 * (1.0 + norm(rho));
    for (int r = 0; r < 3; ++r) {
        Vec3 rp = rho, rm = rho;
        rp[r] += h;
        rm[r] -= h;
        g[r] = (custom(rp, pi) - custom(rm, pi)) / (2 * h);
    }
    return g;
}

Vec3 TwoBodyMass::d_pi(const Vec3& rho, const Vec3& pi) const {
    if (!custom) {
        double E1 = free_energy(m1, c, pi), E2 = free_energy(m2, c, pi);
        return (1.0 / E1 + 1.0 / E2) * pi;
    }
    Vec3 g;
    double h = 1e-6 * (1.0 + norm(pi));
    for (int r = 0; r < 3; ++r) {
        Vec3 pp = pi, pm = pi;
        pp[r] += h;
        pm[r] -= h;
        g[r] = (custom(rho, pp) - custom(rho, pm)) / (2 * h);
    }
    return g;
}

TwoBodyMass free_mass(double m1, double m2, double c) {
    TwoBodyMass f;
    f.m1 = m1;
    f.m2 = m2;
    f.c = c;
    return f;
}

TwoBodyMass coulomb_mass(double m1, double m2, double c, double alpha) {
    TwoBodyMass f = free_mass(m1, m2, c);
    f.V = [alpha](double r) { return -alpha / r; };
    f.dV = [alpha](double r) { return alpha / (r * r); };
    return f;
}

TwoBodyMass yukawa_mass(double m1, double m2, double c, double alpha, double mu) {
    TwoBodyMass f = free_mass(m1, m2, c);
    f.V = [alpha, mu](double r) { return -alpha * std::exp(-mu * r) / r; };
    f.dV = [alpha, mu](double r) {
        return alpha * std::exp(-mu * r) * (mu * r + 1) / (r * r);
    };
    return f;
}

Vec3 solve_rest_frame(const TwoBodySplit& s, const TwoBodyMass&, double c) {
    // K(eta_+) with the free energies; linear in eta_+, solved by the generic
    // Newton iteration for interface uniformity with interacting variants.
    const double m = s.m1 + s.m2;
    auto residual = [&](std::span<const double> x) {
        Vec3 eta_plus{x[0], x[1], x[2]};
        Vec3 k1 = (s.m1 / m) * s.kappa_plus + s.pi;
        Vec3 k2 = (s.m2 / m) * s.kappa_plus - s.pi;
        Vec3 eta1 = eta_plus + (s.m2 / m) * s.rho;
        Vec3 eta2 = eta_plus - (s.m1 / m) * s.rho;
        Vec3 K = -(eta1 * free_energy(s.m1, c, k1)) - (eta2 * free_energy(s.m2, c, k2));
        return std::vector<double>{K.x, K.y, K.z};
    };
    try {
        auto x = newton_solve(residual, {0.0, 0.0, 0.0}, 1e-12);
        return {x[0], x[1], x[2]};
    } catch (const std::exception&) {
        throw std::runtime_error("boost constraint not solvable at this state");
    }
}

Trajectory evolve(const TwoBodySplit& init, const TwoBodyMass& mass, double tau0, double tau1,
                  double dt, int stride) {
    if (dt <= 0 || tau1 <= tau0) throw std::invalid_argument("evolve needs tau1 > tau0, dt > 0");
    if (norm(init.kappa_plus) > 1e-12 * (1 + norm(init.pi)))
        throw std::invalid_argument("rest-frame evolution requires kappa_plus = 0");
    if (stride < 1) stride = 1;

    Trajectory out;
    out.m1 = init.m1;
    out.m2 = init.m2;
    out.c = mass.c;

    Vec3 rho = init.rho, pi = init.pi;
    double tau = tau0;

    auto record = [&]() {
        TrajectorySample s;
        s.tau = tau;
        s.state = init;
        s.state.rho = rho;
        s.state.pi = pi;
        s.state.eta_plus = free_eta_plus(pi, rho, init.m1, init.m2, mass.c);
        auto [p1, p2] = two_body_merge(s.state);
        ParticleSystem sys{{p1, p2}, mass.c};
        s.gen = internal_generators(sys, mass.V);
        if (mass.custom) s.gen.Mc = mass.custom(rho, pi);
        out.samples.push_back(std::move(s));
    };
    record();

    const long nsteps = std::lround((tau1 - tau0) / dt);
    const bool leapfrog = mass.separable && !mass.custom;
    for (long step = 1; step <= nsteps; ++step) {
        if (leapfrog) {
            pi -= 0.5 * dt * mass.d_rho(rho, pi);
            rho += dt * mass.d_pi(rho, pi);  // drift is exact: kinetic part depends on pi only
            pi -= 0.5 * dt * mass.d_rho(rho, pi);
        } else {
            Vec3 rm = rho, pm = pi;
            bool converged = false;
            for (int it = 0; it < 50; ++it) {
                Vec3 gq = mass.d_rho(rm, pm), gp = mass.d_pi(rm, pm);
                Vec3 rn = rho + 0.5 * dt * gp;
                Vec3 pn = pi - 0.5 * dt * gq;
                double delta = std::max(norm(rn - rm), norm(pn - pm));
                rm = rn;
                pm = pn;
                if (delta <= 1e-12) {
                    converged = true;
                    break;
                }
            }
            if (!converged) throw std::runtime_error("implicit midpoint iteration did not converge");
            rho = 2 * rm - rho;
            pi = 2 * pm - pi;
        }
        if (!finite(rho) || !finite(pi)) {
            char msg[96];
            std::snprintf(msg, sizeof msg, "dynamics diverged (last finite tau = %.12g)", tau);
            throw std::runtime_error(msg);
        }
        tau = tau0 + step * dt;
        if (step % stride == 0 || step == nsteps) record();
    }
    return out;
}

WorldLines reconstruct_worldlines(const Trajectory& t, const Embedding& e) {
    WorldLines w;
    w.tau.reserve(t.samples.size());
    for (const auto& s : t.samples) {
        auto [p1, p2] = two_body_merge(s.state);
        w.tau.push_back(s.tau);
        w.x1.push_back(embed(e, s.tau, p1.eta));
        w.x2.push_back(embed(e, s.tau, p2.eta));
    }
    return w;
}

}  // namespace restframe
