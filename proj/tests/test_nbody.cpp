#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "restframe/brackets.hpp"
#include "restframe/nbody.hpp"
#include "restframe/rng.hpp"

using namespace restframe;

namespace {

double symplectic_defect_12(const std::function<PhasePoint(const PhasePoint&)>& map,
                            const PhasePoint& x0, double h) {
    const int n = static_cast<int>(x0.dim()), N = 2 * n;
    auto get = [&](const PhasePoint& s, int i) { return i < n ? s.q[i] : s.p[i - n]; };
    auto set = [&](PhasePoint& s, int i, double v) { (i < n ? s.q[i] : s.p[i - n]) = v; };
    std::vector<std::vector<double>> J(N, std::vector<double>(N));
    for (int j = 0; j < N; ++j) {
        PhasePoint xp = x0, xm = x0;
        set(xp, j, get(x0, j) + h);
        set(xm, j, get(x0, j) - h);
        PhasePoint fp = map(xp), fm = map(xm);
        for (int i = 0; i < N; ++i) J[i][j] = (get(fp, i) - get(fm, i)) / (2 * h);
    }
    auto omega = [&](int i, int j) {
        if (i < n && j == i + n) return 1.0;
        if (i >= n && j == i - n) return -1.0;
        return 0.0;
    };
    double worst = 0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double s = 0;
            for (int a = 0; a < N; ++a)
                for (int b = 0; b < N; ++b) s += J[a][i] * omega(a, b) * J[b][j];
            worst = std::max(worst, std::abs(s - omega(i, j)));
        }
    return worst;
}

ParticleSystem system_of(const PhasePoint& x, double m1, double m2, double c) {
    ParticleSystem s;
    s.c = c;
    s.particles = {{m1, {x.q[0], x.q[1], x.q[2]}, {x.p[0], x.p[1], x.p[2]}},
                   {m2, {x.q[3], x.q[4], x.q[5]}, {x.p[3], x.p[4], x.p[5]}}};
    return s;
}

}  // namespace

TEST_CASE("internal_generators: single particle at rest") {
    ParticleSystem s;
    s.c = 2.0;
    s.particles = {{1.5, {0.7, -0.2, 0.1}, {0, 0, 0}}};
    InternalGenerators g = internal_generators(s);
    CHECK(g.Mc == 3.0);  // m c
    CHECK(norm(g.P) == 0.0);
    CHECK(norm(g.J) == 0.0);
    CHECK(g.K.x == doctest::Approx(-0.7 * 3.0).epsilon(1e-15));
}

TEST_CASE("internal_generators: two-body hand evaluation") {
    ParticleSystem s;
    s.c = 1.0;
    s.particles = {{1.0, {1, 0, 0}, {0, 0.5, 0}}, {2.0, {-0.5, 0, 0}, {0, -0.5, 0}}};
    InternalGenerators g = internal_generators(s);
    double E1 = std::sqrt(1.25), E2 = std::sqrt(4.25);
    CHECK(g.Mc == doctest::Approx(E1 + E2).epsilon(1e-15));
    CHECK(norm(g.P) == 0.0);
    CHECK(g.J.z == doctest::Approx(0.5 + 0.25).epsilon(1e-15));
    CHECK(g.K.x == doctest::Approx(-E1 + 0.5 * E2).epsilon(1e-14));
    CHECK(g.K.y == 0.0);

    // Coulomb-like potential shifts only Mc
    double alpha = 0.3;
    auto V = [alpha](double r) { return -alpha / r; };
    InternalGenerators gv = internal_generators(s, V);
    CHECK(gv.Mc == doctest::Approx(E1 + E2 - alpha / 1.5).epsilon(1e-14));
    CHECK(gv.K.x == doctest::Approx(g.K.x).epsilon(1e-15));
}

TEST_CASE("internal generators: spot-checked algebra brackets") {
    // {K^r, Mc} = -P^r, {K^r, P^s} = -delta^rs Mc, {K^1, K^2} = -J^3,
    // {J^1, J^2} = J^3 on the two-particle realization.
    double m1 = 1.2, m2 = 0.8, c = 1.5;
    PhasePoint x{{0.4, -0.3, 0.2, -0.5, 0.6, 0.1}, {0.3, 0.2, -0.4, -0.2, 0.5, 0.3}};
    auto gen = [&](const PhasePoint& s) { return internal_generators(system_of(s, m1, m2, c)); };
    auto Mc = [&](const PhasePoint& s) { return gen(s).Mc; };
    auto P = [&](int r) { return [=](const PhasePoint& s) { return gen(s).P[r]; }; };
    auto J = [&](int r) { return [=](const PhasePoint& s) { return gen(s).J[r]; }; };
    auto K = [&](int r) { return [=](const PhasePoint& s) { return gen(s).K[r]; }; };

    InternalGenerators g0 = gen(x);
    CHECK(poisson_bracket_fd(K(0), Mc, x) == doctest::Approx(-g0.P.x).epsilon(1e-7));
    CHECK(poisson_bracket_fd(K(2), Mc, x) == doctest::Approx(-g0.P.z).epsilon(1e-7));
    CHECK(poisson_bracket_fd(K(0), P(0), x) == doctest::Approx(-g0.Mc).epsilon(1e-7));
    CHECK(std::abs(poisson_bracket_fd(K(0), P(1), x)) < 1e-7);
    CHECK(poisson_bracket_fd(K(0), K(1), x) == doctest::Approx(-g0.J.z).epsilon(1e-7));
    CHECK(poisson_bracket_fd(J(0), J(1), x) == doctest::Approx(g0.J.z).epsilon(1e-7));
    CHECK(poisson_bracket_fd(J(0), P(1), x) == doctest::Approx(g0.P.z).epsilon(1e-7));
}

TEST_CASE("two_body_split: frozen values and exact inverse") {
    Particle p1{1.0, {1, 2, 0}, {0.3, 0, 0}};
    Particle p2{3.0, {-1, 0, 2}, {-0.1, 0.2, 0}};
    TwoBodySplit s = two_body_split(p1, p2);
    CHECK(s.eta_plus.x == doctest::Approx((1.0 * 1 + 3.0 * (-1)) / 4).epsilon(1e-15));
    CHECK(s.eta_plus.y == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.rho.x == 2.0);
    CHECK(s.rho.z == -2.0);
    CHECK(s.kappa_plus.x == doctest::Approx(0.2).epsilon(1e-15));
    // pi = (m2 k1 - m1 k2)/m = (3*0.3 - 1*(-0.1))/4 etc
    CHECK(s.pi.x == doctest::Approx((3 * 0.3 + 0.1) / 4).epsilon(1e-15));
    CHECK(s.pi.y == doctest::Approx(-0.05).epsilon(1e-15));

    auto [q1, q2] = two_body_merge(s);
    for (int r = 0; r < 3; ++r) {
        CHECK(q1.eta[r] == doctest::Approx(p1.eta[r]).epsilon(1e-14));
        CHECK(q2.eta[r] == doctest::Approx(p2.eta[r]).epsilon(1e-14));
        CHECK(q1.kappa[r] == doctest::Approx(p1.kappa[r]).epsilon(1e-14));
        CHECK(q2.kappa[r] == doctest::Approx(p2.kappa[r]).epsilon(1e-14));
    }
}

TEST_CASE("two_body_split: symplectic 12x12 Jacobian") {
    double m1 = 1.4, m2 = 2.6;
    auto map = [&](const PhasePoint& x) {
        Particle p1{m1, {x.q[0], x.q[1], x.q[2]}, {x.p[0], x.p[1], x.p[2]}};
        Particle p2{m2, {x.q[3], x.q[4], x.q[5]}, {x.p[3], x.p[4], x.p[5]}};
        TwoBodySplit s = two_body_split(p1, p2);
        PhasePoint out;
        out.q = {s.eta_plus.x, s.eta_plus.y, s.eta_plus.z, s.rho.x, s.rho.y, s.rho.z};
        out.p = {s.kappa_plus.x, s.kappa_plus.y, s.kappa_plus.z, s.pi.x, s.pi.y, s.pi.z};
        return out;
    };
    PhasePoint x0{{0.2, -0.3, 0.5, 0.1, 0.4, -0.2}, {0.3, 0.1, -0.2, -0.4, 0.2, 0.6}};
    // the map is linear: a large step keeps roundoff out of the quotient
    CHECK(symplectic_defect_12(map, x0, 1e-3) < 1e-10);
}

TEST_CASE("free_eta_plus: equal masses give exactly zero") {
    Vec3 eta = free_eta_plus({0.4, -0.2, 0.7}, {1.0, 2.0, -0.5}, 1.3, 1.3, 2.0);
    CHECK(eta.x == 0.0);
    CHECK(eta.y == 0.0);
    CHECK(eta.z == 0.0);
}

TEST_CASE("free_eta_plus: zeroes the internal boost generator") {
    auto rng = make_rng(42);
    double worst = 0;
    for (int t = 0; t < 200; ++t) {
        double m1 = uniform(rng, 0.3, 3), m2 = uniform(rng, 0.3, 3), c = uniform(rng, 0.5, 4);
        Vec3 pi = uniform_vec3(rng, -2, 2), rho = uniform_vec3(rng, -3, 3);
        TwoBodySplit s;
        s.m1 = m1;
        s.m2 = m2;
        s.rho = rho;
        s.pi = pi;
        s.eta_plus = free_eta_plus(pi, rho, m1, m2, c);
        auto [p1, p2] = two_body_merge(s);
        ParticleSystem sys{{p1, p2}, c};
        InternalGenerators g = internal_generators(sys);
        worst = std::max(worst, norm(g.K));
        CHECK(norm(g.P) < 1e-14);
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("solve_rest_frame: agrees with the closed form") {
    auto rng = make_rng(9);
    double worst = 0;
    for (int t = 0; t < 100; ++t) {
        double m1 = uniform(rng, 0.3, 3), m2 = uniform(rng, 0.3, 3), c = uniform(rng, 0.5, 4);
        TwoBodySplit s;
        s.m1 = m1;
        s.m2 = m2;
        s.rho = uniform_vec3(rng, -3, 3);
        s.pi = uniform_vec3(rng, -2, 2);
        Vec3 solved = solve_rest_frame(s, free_mass(m1, m2, c), c);
        Vec3 closed = free_eta_plus(s.pi, s.rho, m1, m2, c);
        worst = std::max(worst, norm(solved - closed));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("evolve: free motion is exact uniform drift of rho") {
    double m1 = 1.0, m2 = 2.0, c = 1.0;
    TwoBodySplit init;
    init.m1 = m1;
    init.m2 = m2;
    init.rho = {1.0, 0.5, 0};
    init.pi = {0.2, -0.3, 0.4};
    TwoBodyMass mass = free_mass(m1, m2, c);
    Trajectory t = evolve(init, mass, 0, 5.0, 0.01, 100);

    double pi2 = dot(init.pi, init.pi);
    double E1 = std::sqrt(m1 * m1 + pi2), E2 = std::sqrt(4 + pi2);
    Vec3 vel = init.pi * (1 / E1 + 1 / E2);
    for (const auto& s : t.samples) {
        Vec3 expect = init.rho + s.tau * vel;
        CHECK(norm(s.state.rho - expect) < 1e-12 * (1 + s.tau));
        CHECK(norm(s.state.pi - init.pi) == 0.0);
        CHECK(std::abs(s.gen.Mc - (E1 + E2)) < 1e-14);
    }
}

TEST_CASE("evolve: Coulomb-like potential conserves Mc, J and the rest frame") {
    double m1 = 1.0, m2 = 1.5, c = 2.0;
    TwoBodyMass mass = coulomb_mass(m1, m2, c, 0.8);
    TwoBodySplit init;
    init.m1 = m1;
    init.m2 = m2;
    init.rho = {1.2, 0, 0};
    init.pi = {0, 0.9, 0.1};

    Trajectory t = evolve(init, mass, 0, 20.0, 0.002, 500);
    double Mc0 = t.samples.front().gen.Mc;
    Vec3 J0 = t.samples.front().gen.J;
    double worstMc = 0, worstJ = 0, worstP = 0;
    for (const auto& s : t.samples) {
        worstMc = std::max(worstMc, std::abs(s.gen.Mc - Mc0) / Mc0);
        worstJ = std::max(worstJ, norm(s.gen.J - J0));
        worstP = std::max(worstP, norm(s.gen.P));
    }
    CHECK(worstMc < 1e-8);
    CHECK(worstJ < 1e-12);
    CHECK(worstP < 1e-15);
    CHECK(norm(t.samples.back().state.kappa_plus) == 0.0);
}

TEST_CASE("evolve: Mc drift shrinks as dt^2") {
    double c = 1.0;
    TwoBodyMass mass = yukawa_mass(1.0, 1.0, c, 0.6, 0.4);
    TwoBodySplit init;
    init.rho = {1.0, 0, 0};
    init.pi = {0, 0.5, 0};

    auto drift = [&](double dt) {
        Trajectory t = evolve(init, mass, 0, 8.0, dt, 10);
        double Mc0 = t.samples.front().gen.Mc, w = 0;
        for (const auto& s : t.samples) w = std::max(w, std::abs(s.gen.Mc - Mc0));
        return w;
    };
    double d1 = drift(0.02), d2 = drift(0.01);
    CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("evolve: non-separable mass function uses the implicit midpoint path") {
    TwoBodyMass mass;
    mass.m1 = mass.m2 = 1.0;
    mass.c = 1.0;
    mass.separable = false;
    mass.custom = [](const Vec3& rho, const Vec3& pi) {
        double r2 = dot(rho, rho), p2 = dot(pi, pi);
        return std::sqrt(1 + p2 * (1 + 0.05 * r2)) + 0.5 * r2;
    };
    TwoBodySplit init;
    init.rho = {0.8, 0, 0};
    init.pi = {0, 0.4, 0};
    auto drift = [&](double dt) {
        Trajectory t = evolve(init, mass, 0, 5.0, dt, 100);
        double Mc0 = t.samples.front().gen.Mc, w = 0;
        for (const auto& s : t.samples) w = std::max(w, std::abs(s.gen.Mc - Mc0));
        return w;
    };
    double d1 = drift(0.01), d2 = drift(0.005);
    CHECK(d1 < 1e-5);
    CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.2));  // second-order bounded error
}

TEST_CASE("evolve: non-finite dynamics reports the last finite tau") {
    // potential undefined below the contact radius r = 1
    TwoBodyMass mass;
    mass.m1 = mass.m2 = 1.0;
    mass.c = 1.0;
    mass.V = [](double r) { return std::sqrt(r - 1.0); };
    mass.dV = [](double r) { return 0.5 / std::sqrt(r - 1.0); };
    TwoBodySplit init;
    init.rho = {2.0, 0, 0};
    init.pi = {-3.0, 0, 0};
    bool threw = false;
    try {
        evolve(init, mass, 0, 10.0, 0.01);
    } catch (const std::runtime_error& e) {
        threw = true;
        CHECK(std::string(e.what()).find("dynamics diverged") == 0);
    }
    CHECK(threw);
}

TEST_CASE("evolve: Newtonian limit at large c against an independent oracle") {
    // Relative motion with H = sum sqrt(m^2 c^2 + pi^2) + V versus the
    // Newtonian-in-tau oracle H = pi^2 / (2 mu c) + V, hand-stepped here.
    double c = 1000.0, alpha = 1e-3, m1 = 1.0, m2 = 1.0;
    double mu = m1 * m2 / (m1 + m2);
    double rho0 = 1.0;
    double pic = std::sqrt(alpha * mu * c / rho0);  // circular: pi^2/(mu c) = alpha/rho

    TwoBodySplit init;
    init.rho = {rho0, 0, 0};
    init.pi = {0, pic, 0};
    double dt = 0.25, tau_end = 500.0;
    Trajectory t = evolve(init, coulomb_mass(m1, m2, c, alpha), 0, tau_end, dt, 1);

    Vec3 q = init.rho, p = init.pi;
    double worst = 0;
    std::size_t idx = 1;
    for (int step = 1; step <= static_cast<int>(tau_end / dt + 0.5); ++step) {
        auto acc = [&](const Vec3& r) { return r * (-alpha / std::pow(norm(r), 3)); };
        p += 0.5 * dt * acc(q);
        q += dt * p / (mu * c);
        p += 0.5 * dt * acc(q);
        worst = std::max(worst, norm(t.samples[idx++].state.rho - q));
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("reconstruct_worldlines: embedding of the particle positions") {
    TwoBodySplit init;
    init.m1 = 1.0;
    init.m2 = 2.0;
    init.rho = {1.0, 0, 0};
    init.pi = {0, 0.3, 0};
    Trajectory t = evolve(init, free_mass(1.0, 2.0, 1.0), 0, 2.0, 0.01, 50);

    Embedding e{{0, 0, 0, 0}, {0.5, -0.1, 0.2}};
    WorldLines w = reconstruct_worldlines(t, e);
    REQUIRE(w.tau.size() == t.samples.size());

    for (std::size_t i = 0; i < w.tau.size(); ++i) {
        auto [p1, p2] = two_body_merge(t.samples[i].state);
        Vec4 x1 = embed(e, w.tau[i], p1.eta);
        for (int mu = 0; mu < 4; ++mu) CHECK(w.x1[i][mu] == x1[mu]);
        // equal-tau separation of the two bodies is space-like
        Vec4 d = w.x1[i] - w.x2[i];
        CHECK(minkowski_dot(d, d, +1) < 0);
    }
}
