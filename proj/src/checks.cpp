#include "restframe/checks.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "restframe/brackets.hpp"
#include "restframe/kinematics.hpp"
#include "restframe/maxwell.hpp"
#include "restframe/nbody.hpp"
#include "restframe/pn.hpp"
#include "restframe/rng.hpp"
#include "restframe/solve.hpp"
#include "restframe/spectral.hpp"
#include "restframe/version.hpp"
#include "restframe/yangmills.hpp"
#include "restframe/york.hpp"

namespace restframe::checks {

namespace {

constexpr double pi_ = std::numbers::pi;

void add(ModuleReport& r, const char* name, double measured, double threshold, double tol_scale) {
    InvariantResult res;
    res.name = name;
    res.measured = measured;
    res.threshold = threshold * tol_scale;
    res.pass = std::isfinite(measured) && measured <= res.threshold;
    r.pass = r.pass && res.pass;
    r.invariants.push_back(std::move(res));
}

int levi_civita(int i, int j, int k) { return (j - i) * (k - j) * (k - i) / 2; }

/*
 * Poincare closure table for the ten generators ordered
 *   0: energy-like (P^0 or Mc), 1-3: P, 4-6: J, 7-9: K.
 * Returns the expected {G_a, G_b} as a combination of the generator values
 * at the same phase point.
 */
double expected_bracket(int a, int b, const std::array<double, 10>& g) {
    if (a == b) return 0;
    if (a > b) return -expected_bracket(b, a, g);
    auto kind = [](int idx) { return idx == 0 ? 0 : idx <= 3 ? 1 : idx <= 6 ? 2 : 3; };
    int ka = kind(a), kb = kind(b);
    int i = ka == 1 ? a - 1 : ka == 2 ? a - 4 : a - 7;
    int j = kb == 1 ? b - 1 : kb == 2 ? b - 4 : b - 7;

    if (ka == 0 && kb == 3) return g[1 + j];                     // {E, K^j} = P^j
    if (ka == 0) return 0;                                       // {E, P} = {E, J} = 0
    if (ka == 1 && kb == 1) return 0;                            // {P, P} = 0
    if (ka == 1 && kb == 2) {                                    // {P^i, J^j} = eps_ijk P^k
        double s = 0;
        for (int k = 0; k < 3; ++k) s += levi_civita(i, j, k) * g[1 + k];
        return s;
    }
    if (ka == 1 && kb == 3) return i == j ? g[0] : 0.0;          // {P^i, K^j} = delta_ij E
    if (ka == 2 && kb == 2) {                                    // {J^i, J^j} = eps_ijk J^k
        double s = 0;
        for (int k = 0; k < 3; ++k) s += levi_civita(i, j, k) * g[4 + k];
        return s;
    }
    if (ka == 2 && kb == 3) {                                    // {J^i, K^j} = eps_ijk K^k
        double s = 0;
        for (int k = 0; k < 3; ++k) s += levi_civita(i, j, k) * g[7 + k];
        return s;
    }
    double s = 0;                                                // {K^i, K^j} = -eps_ijk J^k
    for (int k = 0; k < 3; ++k) s -= levi_civita(i, j, k) * g[4 + k];
    return s;
}

template <class ValFn>
double closure_defect(const PhasePoint& x, const ValFn& vals) {
    std::array<double, 10> g0 = vals(x);
    double worst = 0;
    for (int a = 0; a < 10; ++a)
        for (int b = a + 1; b < 10; ++b) {
            PhaseFn F = [&vals, a](const PhasePoint& s) { return vals(s)[a]; };
            PhaseFn G = [&vals, b](const PhasePoint& s) { return vals(s)[b]; };
            double fd = poisson_bracket_fd(F, G, x);
            worst = std::max(worst, std::abs(fd - expected_bracket(a, b, g0)));
        }
    return worst;
}

std::array<double, 10> pack(double e, const Vec3& P, const Vec3& J, const Vec3& K) {
    return {e, P.x, P.y, P.z, J.x, J.y, J.z, K.x, K.y, K.z};
}

// band-limited random field: a sum of cosine modes below a quarter of Nyquist
ScalarField random_scalar(std::mt19937_64& rng, const Grid3& g, int nmodes, double amp) {
    ScalarField f(g);
    double L = g.length();
    for (int t = 0; t < nmodes; ++t) {
        std::array<int, 3> m;
        for (auto& mi : m) mi = static_cast<int>(uniform(rng, -3.49, 3.49));
        double a = uniform(rng, -amp, amp), ph = uniform(rng, 0, 2 * pi_);
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                for (int k = 0; k < g.n; ++k) {
                    Vec3 x = g.point(i, j, k);
                    f.at(i, j, k) +=
                        a * std::cos(2 * pi_ / L * (m[0] * x.x + m[1] * x.y + m[2] * x.z) + ph);
                }
    }
    return f;
}

VectorField3 random_vector(std::mt19937_64& rng, const Grid3& g, int nmodes, double amp) {
    VectorField3 f(g);
    for (int r = 0; r < 3; ++r) f[r] = random_scalar(rng, g, nmodes, amp);
    return f;
}

double max_diff(const ScalarField& a, const ScalarField& b) {
    double worst = 0;
    for (std::size_t i = 0; i < a.v.size(); ++i) worst = std::max(worst, std::abs(a.v[i] - b.v[i]));
    return worst;
}

double max_diff(const VectorField3& a, const VectorField3& b) {
    double worst = 0;
    for (int r = 0; r < 3; ++r) worst = std::max(worst, max_diff(a[r], b[r]));
    return worst;
}

std::vector<PnBody> circular_pair(double m1, double m2, double d, double omega) {
    double m = m1 + m2;
    std::vector<PnBody> b(2);
    b[0] = {m1, {-m2 / m * d, 0, 0}, {0, -m2 / m * omega * d, 0}};
    b[1] = {m2, {m1 / m * d, 0, 0}, {0, m1 / m * omega * d, 0}};
    return b;
}

}  // namespace

ModuleReport check_numerics(std::uint64_t seed, double tol_scale) {
    ModuleReport rep;
    rep.module = "numerics";
    auto rng = make_rng(seed);

    {
        Grid3 g(16, 0.5);
        ScalarField f = random_scalar(rng, g, 24, 1.0);
        double mean = field_mean(f);
        for (auto& v : f.v) v -= mean;
        ScalarField back = inverse_laplacian(laplacian(f));
        add(rep, "laplacian-inverse-roundtrip", max_diff(back, f) / (1 + field_max_abs(f)), 1e-10,
            tol_scale);
    }
    {
        Grid3 g(16, 0.5);
        VectorField3 F = random_vector(rng, g, 16, 1.0);
        Box region{{0.6, 1.1, 0.9}, {5.3, 6.2, 4.8}};
        double flux = box_flux(F, region);
        double vol = box_integral(divergence(F), region);
        add(rep, "divergence-theorem", std::abs(flux - vol) / (1 + std::abs(flux)), 1e-10,
            tol_scale);
    }
    {
        // finite-difference Jacobian of one oscillator step has det 1
        ForceFn force = [](std::span<const double> q) { return std::vector<double>{-q[0]}; };
        double dt = 0.1, h = 1e-6;
        auto step = [&](double q, double p) {
            PhasePoint s{{q}, {p}};
            return leapfrog_step(s, force, dt);
        };
        double q0 = 0.7, p0 = -0.3;
        double Jqq = (step(q0 + h, p0).q[0] - step(q0 - h, p0).q[0]) / (2 * h);
        double Jqp = (step(q0, p0 + h).q[0] - step(q0, p0 - h).q[0]) / (2 * h);
        double Jpq = (step(q0 + h, p0).p[0] - step(q0 - h, p0).p[0]) / (2 * h);
        double Jpp = (step(q0, p0 + h).p[0] - step(q0, p0 - h).p[0]) / (2 * h);
        add(rep, "leapfrog-symplectic-jacobian", std::abs(Jqq * Jpp - Jqp * Jpq - 1), 1e-8,
            tol_scale);
    }
    {
        // implicit midpoint conserves quadratic Hamiltonians up to solver tolerance
        GradFn dHdq = [](std::span<const double> q, std::span<const double> p) {
            return std::vector<double>{q[0] + 0.3 * p[0]};
        };
        GradFn dHdp = [](std::span<const double> q, std::span<const double> p) {
            return std::vector<double>{p[0] + 0.3 * q[0]};
        };
        auto H = [](const PhasePoint& s) {
            return 0.5 * (s.p[0] * s.p[0] + s.q[0] * s.q[0]) + 0.3 * s.q[0] * s.p[0];
        };
        PhasePoint s{{1.1}, {0.2}};
        double H0 = H(s), worst = 0;
        for (int it = 0; it < 500; ++it) {
            s = implicit_midpoint_step(s, dHdq, dHdp, 0.05);
            worst = std::max(worst, std::abs(H(s) - H0));
        }
        add(rep, "midpoint-quadratic-invariant", worst / std::abs(H0), 1e-8, tol_scale);
    }
    {
        PhasePoint x{{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)},
                     {uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)}};
        double worst = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                PhaseFn qi = [i](const PhasePoint& s) { return s.q[i]; };
                PhaseFn pj = [j](const PhasePoint& s) { return s.p[j]; };
                double want = i == j ? 1.0 : 0.0;
                worst = std::max(worst, std::abs(poisson_bracket_fd(qi, pj, x) - want));
                worst = std::max(worst, std::abs(poisson_bracket_fd(qi, qi, x)));
            }
        add(rep, "bracket-canonical-pairs", worst, 1e-8, tol_scale);
    }
    {
        ResidualFn res = [](std::span<const double> x) {
            return std::vector<double>{x[0] * x[0] + x[1] * x[1] - 4, x[0] - x[1]};
        };
        auto root = newton_solve(res, {1.0, 2.0});
        double want = std::sqrt(2.0);
        double err = std::max(std::abs(root[0] - want), std::abs(root[1] - want));
        add(rep, "newton-circle-line-root", err, 1e-9, tol_scale);
    }
    {
        ModelFn line = [](double x, std::span<const double> p) { return p[0] * x + p[1]; };
        FitData data;
        for (int i = 0; i < 12; ++i) {
            double x = 0.3 * i;
            data.x.push_back(x);
            data.y.push_back(1.7 * x - 0.4);
        }
        FitResult fr = least_squares_fit(line, {0.0, 0.0}, data);
        double err = std::max(std::abs(fr.params[0] - 1.7), std::abs(fr.params[1] + 0.4));
        add(rep, "least-squares-line-recovery", err, 1e-9, tol_scale);
    }
    return rep;
}

ModuleReport check_kinematics(std::uint64_t seed, double tol_scale) {
    ModuleReport rep;
    rep.module = "kinematics";
    auto rng = make_rng(seed);

    {
        double worst = 0;
        for (int t = 0; t < 1000; ++t) {
            Vec3 h = uniform_vec3(rng, -10, 10);
            Mat4 B = wigner_boost(h);
            for (int eps : {+1, -1}) {
                Mat4 eta = minkowski(eps);
                Mat4 lhs = B.transposed() * eta * B;
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j)
                        worst = std::max(worst, std::abs(lhs(i, j) - eta(i, j)));
            }
        }
        add(rep, "boost-metric-preservation", worst, 1e-12, tol_scale);
    }
    {
        Mat4 B = wigner_boost({0, 0, 0});
        double worst = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(B(i, j) - (i == j)));
        add(rep, "boost-identity-at-rest", worst, 1e-15, tol_scale);
    }
    {
        // all 45 brackets of the ten external generators on the canonical
        // (z, a; h, p_a) realization with S = a x p_a
        double worst = 0;
        for (int t = 0; t < 25; ++t) {
            double Mc = uniform(rng, 0.5, 2.5);
            PhasePoint x;
            for (int i = 0; i < 6; ++i) x.q.push_back(uniform(rng, -1, 1));
            for (int i = 0; i < 6; ++i) x.p.push_back(uniform(rng, -1, 1));
            auto vals = [Mc](const PhasePoint& s) {
                Vec3 z{s.q[0], s.q[1], s.q[2]}, a{s.q[3], s.q[4], s.q[5]};
                Vec3 h{s.p[0], s.p[1], s.p[2]}, pa{s.p[3], s.p[4], s.p[5]};
                ExternalGenerators g = external_generators({z, h, Mc, cross(a, pa)});
                return pack(g.P.t, g.P.spatial(), g.J, g.K);
            };
            worst = std::max(worst, closure_defect(x, vals));
        }
        add(rep, "external-poincare-closure", worst, 1e-6, tol_scale);
    }
    {
        double worst = 0;
        for (int t = 0; t < 200; ++t) {
            JacobiData j{uniform_vec3(rng, -3, 3), uniform_vec3(rng, -10, 10),
                         uniform(rng, 0.1, 5), uniform_vec3(rng, -2, 2)};
            ExternalGenerators g = external_generators(j);
            for (int eps : {+1, -1}) {
                double p2 = minkowski_dot(g.P, g.P, eps);
                worst = std::max(worst, std::abs(eps * p2 - j.Mc * j.Mc) /
                                            (j.Mc * j.Mc * (1 + dot(j.h, j.h))));
            }
        }
        add(rep, "mass-shell", worst, 1e-12, tol_scale);
    }
    {
        double worst = 0;
        for (int t = 0; t < 100; ++t) {
            Embedding e{{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2),
                         uniform(rng, -2, 2)},
                        uniform_vec3(rng, -3, 3)};
            double ta = uniform(rng, -5, 5), tb = uniform(rng, -5, 5);
            Vec3 sa = uniform_vec3(rng, -4, 4), sb = uniform_vec3(rng, -4, 4);
            Vec4 xa = embed(e, ta, sa), xb = embed(e, tb, sb);
            Vec4 mid = embed(e, 0.5 * (ta + tb), (sa + sb) * 0.5);
            Vec4 avg = (xa + xb) * 0.5;
            double scale = 1;
            for (int i = 0; i < 4; ++i) {
                scale = std::max({scale, std::abs(xa[i]), std::abs(xb[i])});
            }
            for (int i = 0; i < 4; ++i)
                worst = std::max(worst, std::abs(mid[i] - avg[i]) / scale);
        }
        add(rep, "embedding-affine", worst, 1e-12, tol_scale);
    }
    {
        double err = std::abs(moller_radius(2.0, {0, 0, 1}) - 0.5);
        add(rep, "moller-radius-closed-form", err, 1e-15, tol_scale);
    }
    return rep;
}

ModuleReport check_nbody(std::uint64_t seed, double tol_scale) {
    ModuleReport rep;
    rep.module = "nbody";
    auto rng = make_rng(seed);

    {
        // internal Mc, P, J, K close the same algebra for three free bodies
        const std::array<double, 3> masses{1.0, 1.3, 0.7};
        double worst = 0;
        for (int t = 0; t < 10; ++t) {
            PhasePoint x;
            for (int i = 0; i < 9; ++i) x.q.push_back(uniform(rng, -1, 1));
            for (int i = 0; i < 9; ++i) x.p.push_back(uniform(rng, -1, 1));
            auto vals = [&masses](const PhasePoint& s) {
                ParticleSystem sys;
                sys.c = 1;
                for (int i = 0; i < 3; ++i) {
                    Particle p;
                    p.m = masses[i];
                    p.eta = {s.q[3 * i], s.q[3 * i + 1], s.q[3 * i + 2]};
                    p.kappa = {s.p[3 * i], s.p[3 * i + 1], s.p[3 * i + 2]};
                    sys.particles.push_back(p);
                }
                InternalGenerators g = internal_generators(sys);
                return pack(g.Mc, g.P, g.J, g.K);
            };
            worst = std::max(worst, closure_defect(x, vals));
        }
        add(rep, "internal-closure-three-free", worst, 1e-6, tol_scale);
    }
    {
        double worst = 0;
        for (int t = 0; t < 200; ++t) {
            Particle p1{uniform(rng, 0.2, 3), uniform_vec3(rng, -2, 2), uniform_vec3(rng, -2, 2)};
            Particle p2{uniform(rng, 0.2, 3), uniform_vec3(rng, -2, 2), uniform_vec3(rng, -2, 2)};
            auto [q1, q2] = two_body_merge(two_body_split(p1, p2));
            for (int r = 0; r < 3; ++r) {
                worst = std::max({worst, std::abs(q1.eta[r] - p1.eta[r]),
                                  std::abs(q2.eta[r] - p2.eta[r]),
                                  std::abs(q1.kappa[r] - p1.kappa[r]),
                                  std::abs(q2.kappa[r] - p2.kappa[r])});
            }
        }
        add(rep, "split-merge-roundtrip", worst, 1e-14, tol_scale);
    }
    {
        // J^T Omega J = Omega for the 12x12 Jacobian of the split
        double m1 = 1.4, m2 = 0.6, h = 1e-3;
        auto map = [&](const std::array<double, 12>& in) {
            Particle p1{m1, {in[0], in[1], in[2]}, {in[6], in[7], in[8]}};
            Particle p2{m2, {in[3], in[4], in[5]}, {in[9], in[10], in[11]}};
            TwoBodySplit s = two_body_split(p1, p2);
            return std::array<double, 12>{s.eta_plus.x,  s.eta_plus.y,  s.eta_plus.z,
                                          s.rho.x,       s.rho.y,       s.rho.z,
                                          s.kappa_plus.x, s.kappa_plus.y, s.kappa_plus.z,
                                          s.pi.x,        s.pi.y,        s.pi.z};
        };
        std::array<double, 12> x0{};
        for (auto& v : x0) v = uniform(rng, -1, 1);
        double J[12][12];
        for (int c = 0; c < 12; ++c) {
            auto xp = x0, xm = x0;
            xp[c] += h;
            xm[c] -= h;
            auto fp = map(xp), fm = map(xm);
            for (int r = 0; r < 12; ++r) J[r][c] = (fp[r] - fm[r]) / (2 * h);
        }
        auto omega = [](int r, int c) {
            if (r < 6 && c == r + 6) return 1.0;
            if (r >= 6 && c == r - 6) return -1.0;
            return 0.0;
        };
        double worst = 0;
        for (int r = 0; r < 12; ++r)
            for (int c = 0; c < 12; ++c) {
                double s = 0;
                for (int a = 0; a < 12; ++a)
                    for (int b = 0; b < 12; ++b) s += J[a][r] * omega(a, b) * J[b][c];
                worst = std::max(worst, std::abs(s - omega(r, c)));
            }
        add(rep, "split-symplectic-jacobian", worst, 1e-10, tol_scale);
    }
    {
        double worst = 0;
        for (int t = 0; t < 100; ++t) {
            TwoBodySplit s;
            s.m1 = uniform(rng, 0.3, 2.5);
            s.m2 = uniform(rng, 0.3, 2.5);
            s.rho = uniform_vec3(rng, -2, 2);
            s.pi = uniform_vec3(rng, -1.5, 1.5);
            double c = uniform(rng, 0.8, 4);
            Vec3 got = solve_rest_frame(s, free_mass(s.m1, s.m2, c), c);
            Vec3 want = free_eta_plus(s.pi, s.rho, s.m1, s.m2, c);
            worst = std::max(worst, norm(got - want));
        }
        add(rep, "rest-frame-free-consistency", worst, 1e-9, tol_scale);

        TwoBodySplit eq;
        eq.m1 = eq.m2 = 1.3;
        eq.rho = {0.8, -0.4, 1.1};
        eq.pi = {0.2, 0.5, -0.3};
        add(rep, "equal-mass-centre-exact", norm(free_eta_plus(eq.pi, eq.rho, 1.3, 1.3, 2.0)),
            1e-15, tol_scale);
    }
    {
        TwoBodySplit init;
        init.m1 = 1.2;
        init.m2 = 0.8;
        init.rho = {1.5, 0, 0};
        init.pi = {0, 0.6, 0};
        TwoBodyMass mass = coulomb_mass(1.2, 0.8, 3.0, 0.5);
        Trajectory tr = evolve(init, mass, 0, 10, 0.005, 20);
        double Mc0 = tr.samples.front().gen.Mc, worst = 0;
        for (const auto& s : tr.samples) worst = std::max(worst, std::abs(s.gen.Mc - Mc0) / Mc0);
        add(rep, "interacting-mass-conservation", worst, 1e-7, tol_scale);
    }
    {
        // slow motion at large c against the reduced-mass Newtonian oracle
        const double c = 1e3, alpha = 2e-3, m1 = 1.2, m2 = 0.8;
        const double muc = m1 * m2 / (m1 + m2) * c;
        TwoBodySplit init;
        init.m1 = m1;
        init.m2 = m2;
        init.rho = {1.0, 0, 0};
        init.pi = {0, std::sqrt(alpha * muc), 0};
        const double omega = init.pi.y / muc;
        const double tau1 = 0.25 * (2 * pi_ / omega), dt = 0.25;
        Trajectory tr = evolve(init, coulomb_mass(m1, m2, c, alpha), 0, tau1, dt, 10);

        Vec3 q = init.rho, p = init.pi;
        double worst = 0;
        std::size_t next = 0;
        long long nsteps = std::llround(tau1 / dt);
        for (long long k = 0; k <= nsteps; ++k) {
            if (next < tr.samples.size() &&
                std::llround(tr.samples[next].tau / dt) == k) {
                worst = std::max(worst, norm(tr.samples[next].state.rho - q));
                ++next;
            }
            if (k == nsteps) break;
            double r = norm(q);
            Vec3 F = q * (-alpha / (r * r * r));
            p += F * (0.5 * dt);
            q += p * (dt / muc);
            r = norm(q);
            F = q * (-alpha / (r * r * r));
            p += F * (0.5 * dt);
        }
        add(rep, "newtonian-limit", worst, 1e-4, tol_scale);
    }
    return rep;
}

ModuleReport check_gauge_fields(std::uint64_t seed, double tol_scale) {
    ModuleReport rep;
    rep.module = "gauge_fields";
    auto rng = make_rng(seed);
    Grid3 g16(16, 0.5);

    EmState state(g16);
    state.A = random_vector(rng, g16, 10, 1.0);
    state.pi = random_vector(rng, g16, 10, 1.0);
    state.A_tau = random_scalar(rng, g16, 6, 0.5);

    {
        EmDecomposition d = decompose(state);
        EmState back = recompose(d);
        double scale = 1 + field_max_abs(state.A) + field_max_abs(state.pi);
        double worst = std::max(max_diff(back.A, state.A), max_diff(back.pi, state.pi));
        add(rep, "decomposition-roundtrip", worst / scale, 1e-12, tol_scale);
    }
    {
        // long free evolution on a 32^3 lattice: transverse sector stays
        // transverse, the Gauss constraint field never moves
        Grid3 g32(32, 0.25);
        EmState s32(g32);
        s32.A = random_vector(rng, g32, 8, 1.0);
        s32.pi = random_vector(rng, g32, 8, 1.0);
        EmDecomposition d = decompose(s32);
        ScalarField Gamma0 = d.Gamma;
        double dt = 0.4 * g32.spacing / std::sqrt(3.0);
        int nsteps = 10000;
        EmEvolveResult ev = evolve_free(d, 0, nsteps * dt, dt, nsteps);
        add(rep, "transversality-after-long-run",
            max_transverse_violation(ev.final_state), 1e-10, tol_scale);
        add(rep, "gauss-field-frozen", max_diff(ev.final_state.Gamma, Gamma0), 1e-15, tol_scale);
        double H0 = ev.series.front().energy;
        double drift = std::abs(ev.series.back().energy - H0) / H0;
        add(rep, "long-run-energy-drift", drift, 1e-2, tol_scale);
    }
    {
        // one standing mode stepped so that 64 steps make one discrete period
        Grid3 g(16, 0.4);
        EmDecomposition d(g);
        double k = 2 * pi_ * 2 / g.length();
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                for (int kk = 0; kk < g.n; ++kk)
                    d.A_perp[0].at(i, j, kk) = 0.3 * std::cos(k * g.point(i, j, kk).z);
        double dt = std::sqrt(2 * (1 - std::cos(2 * pi_ / 64))) / k;
        EmEvolveResult ev = evolve_free(d, 0, 64 * dt, dt, 64);
        double H0 = ev.series.front().energy;
        add(rep, "single-mode-period-return",
            std::abs(ev.series.back().energy - H0) / H0, 1e-10, tol_scale);

        // discrete dispersion against the leapfrog phase relation
        double dt2 = 0.1;
        double a0 = 0.3;
        double a1 = evolve_free(d, 0, dt2, dt2).final_state.A_perp[0].at(0, 0, 0);
        double a2 = evolve_free(d, 0, 2 * dt2, dt2).final_state.A_perp[0].at(0, 0, 0);
        double omega_eff = std::acos((a0 + a2) / (2 * a1)) / dt2;
        add(rep, "single-mode-dispersion", std::abs(omega_eff - k) / k, k * k * dt2 * dt2 / 10,
            tol_scale);
    }
    {
        // adding grad eps moves only the longitudinal gauge variable
        EmDecomposition d0 = decompose(state);
        ScalarField eps = random_scalar(rng, g16, 8, 0.7);
        EmState shifted = state;
        VectorField3 geps = gradient(eps);
        for (int r = 0; r < 3; ++r)
            for (std::size_t i = 0; i < shifted.A[r].v.size(); ++i)
                shifted.A[r].v[i] += geps[r].v[i];
        EmDecomposition d1 = decompose(shifted);
        double scale = 1 + field_max_abs(state.A) + field_max_abs(eps);
        double worst = max_diff(d1.A_perp, d0.A_perp) / scale;
        worst = std::max(worst, max_diff(d1.pi_perp, d0.pi_perp) / scale);
        worst = std::max(worst, max_diff(d1.Gamma, d0.Gamma) / scale);
        double H0 = radiation_energy(d0), H1 = radiation_energy(d1);
        worst = std::max(worst, std::abs(H1 - H0) / (1 + H0));
        VectorField3 B0 = curl(d0.A_perp), B1 = curl(d1.A_perp);
        worst = std::max(worst, max_diff(B1, B0) / scale);
        add(rep, "gauge-transformation-invariance", worst, 1e-12, tol_scale);
    }
    {
        ScalarField rho = make_charge_density(
            g16, {{1.0, {2.0, 3.0, 4.0}, 0.55}, {-0.4, {6.0, 5.0, 2.5}, 0.6}});
        EmDecomposition d = decompose(state);
        Box region{{0.7, 0.9, 0.8}, {5.1, 6.2, 4.9}};
        ChargePair cp = charge_identity(d, rho, region);
        double scale = 1 + std::abs(cp.Q_strong) + std::abs(cp.Q_weak);
        add(rep, "charge-identity",
            std::abs(cp.Q_strong - cp.Q_weak - cp.gamma_minus_rho) / scale, 1e-12, tol_scale);
    }
    {
        // colour charge identity, su(2) and su(3)
        double worst = 0;
        for (int which = 0; which < 2; ++which) {
            StructureConstants f =
                which == 0 ? StructureConstants::su2() : StructureConstants::su3();
            YmState s(g16, f);
            for (int a = 0; a < f.dim; ++a) {
                s.A[a] = random_vector(rng, g16, 4, 0.8);
                s.pi[a] = random_vector(rng, g16, 4, 0.8);
            }
            Box region{{0.6, 1.0, 0.9}, {5.3, 5.9, 5.1}};
            ColorCharges cc = ym_color_charges(s, region);
            for (int a = 0; a < f.dim; ++a) {
                double scale = 1 + std::abs(cc.Q_strong[a]) + std::abs(cc.Q_weak[a]);
                worst = std::max(worst, std::abs(cc.Q_strong[a] - cc.Q_weak[a] -
                                                 cc.gamma_integral[a]) / scale);
            }
        }
        add(rep, "colour-charge-identity", worst, 1e-12, tol_scale);
    }
    {
        // vanishing structure constants reduce every operation to Maxwell
        StructureConstants f = StructureConstants::abelian(2);
        YmState s(g16, f);
        for (int a = 0; a < 2; ++a) {
            s.A[a] = random_vector(rng, g16, 4, 0.8);
            s.pi[a] = random_vector(rng, g16, 4, 0.8);
        }
        double worst = 0;
        auto gauss = ym_gauss(s);
        for (int a = 0; a < 2; ++a)
            worst = std::max(worst, max_diff(gauss[a], divergence(s.pi[a])));
        Box region{{0.5, 0.5, 0.5}, {6.0, 6.5, 5.5}};
        ColorCharges cc = ym_color_charges(s, region);
        for (int a = 0; a < 2; ++a) {
            worst = std::max(worst, std::abs(cc.Q_strong[a] - box_flux(s.pi[a], region)));
            worst = std::max(worst, std::abs(cc.Q_weak[a]));
        }
        add(rep, "abelian-limit", worst, 1e-12, tol_scale);
    }
    return rep;
}

ModuleReport check_york_gravity(std::uint64_t seed, double tol_scale) {
    ModuleReport rep;
    rep.module = "york_gravity";
    auto rng = make_rng(seed);

    add(rep, "basis-reference-constraints", gamma_residual(gamma_solve()), 1e-15, tol_scale);
    {
        double worst = 0;
        for (int t = 0; t < 50; ++t)
            worst = std::max(worst, gamma_residual(gamma_solve(seed + t)));
        add(rep, "basis-rotated-constraints", worst, 1e-14, tol_scale);
    }
    {
        GammaMatrix gamma = gamma_solve();
        double worst = 0;
        for (int t = 0; t < 1000; ++t) {
            YorkBasisPoint p;
            p.theta = uniform_vec3(rng, -1.2, 1.2);
            p.phi_tilde = uniform(rng, 0.4, 3.0);
            p.R = {uniform(rng, -0.8, 0.8), uniform(rng, -0.8, 0.8)};
            p.n = uniform(rng, -0.4, 0.6);
            p.n_bar = uniform_vec3(rng, -0.5, 0.5);
            MetricResult m = metric_from_york(p, gamma, t % 2 == 0 ? +1 : -1);
            Mat3 g3;
            for (int r = 0; r < 3; ++r)
                for (int s = 0; s < 3; ++s) {
                    double acc = 0;
                    for (int a = 0; a < 3; ++a) acc += m.triad(a, r) * m.triad(a, s);
                    g3(r, s) = acc;
                }
            double p2 = p.phi_tilde * p.phi_tilde;
            worst = std::max(worst, std::abs(det(g3) - p2) / p2);
        }
        add(rep, "metric-determinant", worst, 1e-12, tol_scale);
    }
    {
        GammaMatrix gamma = gamma_solve();
        YorkBasisPoint flat;
        double worst = 0;
        for (int eps : {+1, -1}) {
            MetricResult m = metric_from_york(flat, gamma, eps);
            Mat4 eta = minkowski(eps);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    worst = std::max(worst, std::abs(m.g(i, j) - eta(i, j)));
        }
        add(rep, "flat-point-minkowski", worst, 1e-15, tol_scale);
    }
    {
        GravityUnits u{1.3, 2.1};
        Grid3 g(8, 0.7);
        GammaMatrix gamma = gamma_solve();
        YorkField f(g);
        for (auto& p : f.pts) p.pi_phi = 0.35;
        ScalarField matter(g);
        double got = adm_energy(f, matter, gamma, u);
        double vol = g.length() * g.length() * g.length();
        double want = -(6 * pi_ * u.G / (u.c * u.c)) * 0.35 * 0.35 * vol;
        add(rep, "adm-uniform-york-rate", std::abs(got - want) / std::abs(want), 1e-10, tol_scale);

        ScalarField m2 = random_scalar(rng, g, 6, 0.4);
        for (auto& v : m2.v) v += 1.5;
        YorkField f2(g);
        double got2 = adm_energy(f2, m2, gamma, u);
        double want2 = 0, comp = 0;
        for (double v : m2.v) {
            double y = u.c * v * g.cell_volume() - comp;
            double t = want2 + y;
            comp = (t - want2) - y;
            want2 = t;
        }
        add(rep, "adm-matter-only", std::abs(got2 - want2) / std::abs(want2), 1e-12, tol_scale);
    }
    {
        const double G = 1, m1 = 3, m2 = 1, d = 2;
        const double omega = std::sqrt(G * (m1 + m2) / (d * d * d));
        const double T = 2 * pi_ / omega;
        const double dt = T / 2e4;
        PnTrajectory tr = pn_evolve(circular_pair(m1, m2, d, omega), YorkProfile::zero(),
                                    GravityUnits{G, 1.0}, 0, 1.02 * T, dt);
        double t_cross = -1;
        for (std::size_t k = 0; k + 1 < tr.samples.size(); ++k) {
            if (tr.samples[k].t < 0.5 * T) continue;
            double y0 = tr.samples[k].bodies[1].x.y - tr.samples[k].bodies[0].x.y;
            double y1 = tr.samples[k + 1].bodies[1].x.y - tr.samples[k + 1].bodies[0].x.y;
            if (y0 < 0 && y1 >= 0) {
                t_cross = tr.samples[k].t + dt * (-y0) / (y1 - y0);
                break;
            }
        }
        double err = t_cross < 0 ? 1.0 : std::abs(t_cross - T) / T;
        add(rep, "kepler-period", err, 1e-6, tol_scale);
    }
    {
        GravityUnits u{1.0, 1.0};
        const double M = 1e4, v0 = 20;
        std::vector<double> radii{1.0, 1.4, 2.0, 2.8, 4.0, 5.6, 8.0, 10.0};
        std::vector<double> speeds(radii.size(), v0);
        RotationCurveFit fit = rotation_curve_fit(radii, speeds, M, u, radii);
        double worst = 0;
        for (double r : radii)
            worst = std::max(worst, std::abs(fit.delta(r) - (u.G * M / (r * v0 * v0) - 1)));
        add(rep, "flat-curve-profile-recovery", worst, 1e-6, tol_scale);

        std::normal_distribution<double> noise(0.0, 0.01 * v0);
        std::vector<double> noisy;
        for (std::size_t i = 0; i < radii.size(); ++i) noisy.push_back(v0 + noise(rng));
        RotationCurveFit nf = rotation_curve_fit(radii, noisy, M, u, radii);
        add(rep, "noisy-curve-residual-rms", nf.rms / v0, 0.02, tol_scale);
    }
    return rep;
}

std::vector<std::string> module_names() {
    return {"numerics", "kinematics", "nbody", "gauge_fields", "york_gravity"};
}

RunReport run_checks(const std::vector<std::string>& modules, std::uint64_t seed,
                     double tol_scale) {
    RunReport run;
    run.seed = seed;
    run.tol_scale = tol_scale;
    run.version = version_string;
    for (const auto& name : modules) {
        auto start = std::chrono::steady_clock::now();
        ModuleReport rep;
        if (name == "numerics")
            rep = check_numerics(seed, tol_scale);
        else if (name == "kinematics")
            rep = check_kinematics(seed, tol_scale);
        else if (name == "nbody")
            rep = check_nbody(seed, tol_scale);
        else if (name == "gauge_fields")
            rep = check_gauge_fields(seed, tol_scale);
        else if (name == "york_gravity")
            rep = check_york_gravity(seed, tol_scale);
        else
            throw std::invalid_argument("unknown module: " + name);
        auto stop = std::chrono::steady_clock::now();
        rep.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
        run.all_pass = run.all_pass && rep.pass;
        run.modules.push_back(std::move(rep));
    }
    return run;
}

namespace {

void append_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

void append_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    out += '"';
}

}  // namespace

std::string report_json(const RunReport& r) {
    std::string out = "{\n  \"seed\": ";
    out += std::to_string(r.seed);
    out += ",\n  \"tol_scale\": ";
    append_double(out, r.tol_scale);
    out += ",\n  \"version\": ";
    append_escaped(out, r.version);
    out += ",\n  \"all_pass\": ";
    out += r.all_pass ? "true" : "false";
    out += ",\n  \"modules\": [";
    for (std::size_t m = 0; m < r.modules.size(); ++m) {
        const auto& mod = r.modules[m];
        out += m ? ",\n    {" : "\n    {";
        out += "\"module\": ";
        append_escaped(out, mod.module);
        out += ", \"pass\": ";
        out += mod.pass ? "true" : "false";
        out += ", \"invariants\": [";
        for (std::size_t i = 0; i < mod.invariants.size(); ++i) {
            const auto& inv = mod.invariants[i];
            out += i ? ",\n      {" : "\n      {";
            out += "\"name\": ";
            append_escaped(out, inv.name);
            out += ", \"measured\": ";
            append_double(out, inv.measured);
            out += ", \"threshold\": ";
            append_double(out, inv.threshold);
            out += ", \"pass\": ";
            out += inv.pass ? "true" : "false";
            out += "}";
        }
        out += "\n    ]}";
    }
    out += "\n  ]\n}\n";
    return out;
}

}  // namespace restframe::checks
