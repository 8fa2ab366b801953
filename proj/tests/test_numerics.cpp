#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "restframe/brackets.hpp"
#include "restframe/integrate.hpp"
#include "restframe/rng.hpp"
#include "restframe/solve.hpp"
#include "restframe/spectral.hpp"

using namespace restframe;

namespace {

constexpr double pi = std::numbers::pi;

ScalarField cosine_mode(const Grid3& g, int mx, int my, int mz, double amp = 1.0) {
    ScalarField f(g);
    const double L = g.length();
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k) {
                Vec3 x = g.point(i, j, k);
                f.at(i, j, k) = amp * std::cos(2 * pi * (mx * x.x + my * x.y + mz * x.z) / L);
            }
    return f;
}

ScalarField random_band_limited(const Grid3& g, std::mt19937_64& rng, int max_mode) {
    ScalarField f(g);
    for (int mx = -max_mode; mx <= max_mode; ++mx)
        for (int my = -max_mode; my <= max_mode; ++my)
            for (int mz = 0; mz <= max_mode; ++mz) {
                if (mx == 0 && my == 0 && mz == 0) continue;
                double a = uniform(rng, -1, 1), ph = uniform(rng, 0, 2 * pi);
                const double L = g.length();
                for (int i = 0; i < g.n; ++i)
                    for (int j = 0; j < g.n; ++j)
                        for (int k = 0; k < g.n; ++k) {
                            Vec3 x = g.point(i, j, k);
                            f.at(i, j, k) +=
                                a * std::cos(2 * pi * (mx * x.x + my * x.y + mz * x.z) / L + ph);
                        }
            }
    return f;
}

double max_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.v.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
    return m;
}

// JtOJ - O for a phase-space map, Jacobian by central differences.
double symplectic_defect(const std::function<PhasePoint(const PhasePoint&)>& map,
                         const PhasePoint& x0, double h) {
    const int n = static_cast<int>(x0.dim());
    const int N = 2 * n;
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
    // Omega(i,j): +1 for (q_i, p_i), -1 for (p_i, q_i)
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

}  // namespace

TEST_CASE("laplacian: plane-wave eigenfunction") {
    Grid3 g(16, 0.5);
    const double L = g.length();
    int mx = 1, my = 2, mz = 0;
    double k2 = std::pow(2 * pi / L, 2) * (mx * mx + my * my + mz * mz);

    ScalarField f = cosine_mode(g, mx, my, mz, 0.7);
    ScalarField lf = laplacian(f);
    double worst = 0;
    for (std::size_t i = 0; i < f.v.size(); ++i)
        worst = std::max(worst, std::abs(lf.v[i] - k2 * f.v[i]));
    CHECK(worst < 1e-12 * k2);
}

TEST_CASE("laplacian: constant field maps to zero") {
    Grid3 g(8, 1.0);
    ScalarField f(g);
    for (auto& v : f.v) v = 3.25;
    CHECK(field_max_abs(laplacian(f)) == 0.0);
}

TEST_CASE("inverse_laplacian: eigenfunction and two-sided roundtrip") {
    Grid3 g(16, 0.25);
    const double L = g.length();
    double k2 = std::pow(2 * pi / L, 2) * (1 + 4 + 9);
    ScalarField f = cosine_mode(g, 1, -2, 3);

    ScalarField inv = inverse_laplacian(f);
    double worst = 0;
    for (std::size_t i = 0; i < f.v.size(); ++i)
        worst = std::max(worst, std::abs(inv.v[i] - f.v[i] / k2));
    CHECK(worst < 1e-13);

    auto rng = make_rng(11);
    ScalarField r = random_band_limited(g, rng, 3);
    double mean = field_mean(r);
    for (auto& v : r.v) v -= mean;
    CHECK(max_diff(inverse_laplacian(laplacian(r)), r) < 1e-10);
    CHECK(max_diff(laplacian(inverse_laplacian(r)), r) < 1e-10);
}

TEST_CASE("inverse_laplacian: nonzero mean is rejected") {
    Grid3 g(8, 1.0);
    ScalarField f(g);
    for (auto& v : f.v) v = 1.0;
    CHECK_THROWS_AS(inverse_laplacian(f), std::domain_error);
}

TEST_CASE("gradient/divergence/curl compose consistently") {
    Grid3 g(12, 0.4);
    auto rng = make_rng(7);
    VectorField3 F(g);
    for (int r = 0; r < 3; ++r) F[r] = random_band_limited(g, rng, 2);

    // div curl = 0 and curl grad = 0, spectrally exact
    ScalarField s = random_band_limited(g, rng, 2);
    CHECK(field_max_abs(divergence(curl(F))) < 1e-11);
    CHECK(field_max_abs(curl(gradient(s))) < 1e-11);
}

TEST_CASE("box calculus: analytic mode integral") {
    Grid3 g(16, 0.5);
    const double L = g.length();
    double kx = 2 * pi / L;
    ScalarField f = cosine_mode(g, 1, 0, 0);

    Box b{{0.6, 1.0, 2.0}, {3.1, 4.5, 6.5}};
    double expected = (std::sin(kx * b.hi.x) - std::sin(kx * b.lo.x)) / kx * (b.hi.y - b.lo.y)
                    * (b.hi.z - b.lo.z);
    CHECK(box_integral(f, b) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("box calculus: divergence theorem on random fields") {
    Grid3 g(12, 0.3);
    auto rng = make_rng(23);
    VectorField3 F(g);
    for (int r = 0; r < 3; ++r) {
        F[r] = random_band_limited(g, rng, 3);
        for (auto& v : F[r].v) v += uniform(rng, -0.5, 0.5);  // nonzero means allowed
    }
    Box b{{0.31, 0.7, 0.05}, {2.9, 3.3, 1.8}};
    double flux = box_flux(F, b);
    double div_int = box_integral(divergence(F), b);
    CHECK(std::abs(flux - div_int) < 1e-12 * (1 + std::abs(flux)));
}

TEST_CASE("leapfrog: zero force is uniform drift") {
    PhasePoint s{{1.0, -2.0}, {0.5, 3.0}};
    std::vector<double> masses{2.0, 0.5};
    auto zero = [](std::span<const double> q) { return std::vector<double>(q.size(), 0.0); };
    PhasePoint out = leapfrog_step(s, zero, 0.25, masses);
    CHECK(out.q[0] == doctest::Approx(1.0 + 0.25 * 0.5 / 2.0).epsilon(1e-15));
    CHECK(out.q[1] == doctest::Approx(-2.0 + 0.25 * 3.0 / 0.5).epsilon(1e-15));
    CHECK(out.p[0] == 0.5);
    CHECK(out.p[1] == 3.0);
}

TEST_CASE("leapfrog: harmonic oscillator energy is bounded, reversal exact") {
    auto force = [](std::span<const double> q) { return std::vector<double>{-q[0]}; };
    PhasePoint s{{1.0}, {0.0}};
    double dt = 0.05;
    auto H = [](const PhasePoint& x) { return 0.5 * (x.p[0] * x.p[0] + x.q[0] * x.q[0]); };
    double H0 = H(s), worst = 0;
    PhasePoint cur = s;
    for (int i = 0; i < 20000; ++i) {
        cur = leapfrog_step(cur, force, dt);
        worst = std::max(worst, std::abs(H(cur) - H0));
    }
    CHECK(worst < 0.5 * dt * dt * H0 * 1.1);  // bounded oscillation, no secular drift

    for (int i = 0; i < 20000; ++i) cur = leapfrog_step(cur, force, -dt);
    CHECK(cur.q[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(cur.p[0]) < 1e-9);
}

TEST_CASE("leapfrog: symplectic Jacobian") {
    auto force = [](std::span<const double> q) {
        return std::vector<double>{-std::sin(q[0]), -q[1] * q[1] * q[1]};
    };
    auto map = [&](const PhasePoint& x) { return leapfrog_step(x, force, 0.1); };
    PhasePoint x0{{0.3, -0.4}, {0.2, 0.7}};
    CHECK(symplectic_defect(map, x0, 1e-5) < 1e-8);
}

TEST_CASE("leapfrog: divergence is reported") {
    auto force = [](std::span<const double> q) {
        return std::vector<double>{std::numeric_limits<double>::quiet_NaN() * q[0]};
    };
    PhasePoint s{{1.0}, {0.0}};
    CHECK_THROWS_WITH_AS(leapfrog_step(s, force, 0.1), "dynamics diverged", std::runtime_error);
}

TEST_CASE("implicit midpoint: quadratic non-separable H conserved to fixed-point tol") {
    // H = p^2/2 + q^2/2 + 0.3 q p; the midpoint rule conserves quadratic
    // invariants exactly.
    auto dHdq = [](std::span<const double> q, std::span<const double> p) {
        return std::vector<double>{q[0] + 0.3 * p[0]};
    };
    auto dHdp = [](std::span<const double> q, std::span<const double> p) {
        return std::vector<double>{p[0] + 0.3 * q[0]};
    };
    auto H = [](const PhasePoint& x) {
        return 0.5 * x.p[0] * x.p[0] + 0.5 * x.q[0] * x.q[0] + 0.3 * x.q[0] * x.p[0];
    };
    PhasePoint cur{{0.9}, {-0.2}};
    double H0 = H(cur);
    for (int i = 0; i < 5000; ++i) cur = implicit_midpoint_step(cur, dHdq, dHdp, 0.02);
    CHECK(std::abs(H(cur) - H0) < 1e-10);
}

TEST_CASE("implicit midpoint: symplectic Jacobian") {
    auto dHdq = [](std::span<const double> q, std::span<const double> p) {
        return std::vector<double>{2 * q[0] * p[0] * p[0]};  // H = q^2 p^2 + p^2/2
    };
    auto dHdp = [](std::span<const double> q, std::span<const double> p) {
        return std::vector<double>{2 * q[0] * q[0] * p[0] + p[0]};
    };
    auto map = [&](const PhasePoint& x) { return implicit_midpoint_step(x, dHdq, dHdp, 0.05); };
    PhasePoint x0{{0.4}, {0.3}};
    CHECK(symplectic_defect(map, x0, 1e-5) < 1e-8);
}

TEST_CASE("poisson_bracket_fd: canonical pairs") {
    PhasePoint x{{0.2, -1.1, 0.4}, {0.9, 0.3, -0.5}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            auto Q = [i](const PhasePoint& s) { return s.q[i]; };
            auto P = [j](const PhasePoint& s) { return s.p[j]; };
            CHECK(poisson_bracket_fd(Q, P, x) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9));
            auto Q2 = [j](const PhasePoint& s) { return s.q[j]; };
            CHECK(std::abs(poisson_bracket_fd(Q, Q2, x)) < 1e-9);
        }
}

TEST_CASE("poisson_bracket_fd: spin algebra from a canonical pair") {
    // S = a x p_a satisfies {S^i, S^j} = eps^ijk S^k.
    PhasePoint x{{0.3, -0.7, 0.4}, {0.2, 0.5, -0.6}};
    auto S = [](const PhasePoint& s, int i) {
        Vec3 a{s.q[0], s.q[1], s.q[2]}, pa{s.p[0], s.p[1], s.p[2]};
        return cross(a, pa)[i];
    };
    Vec3 Sval = cross(Vec3{0.3, -0.7, 0.4}, Vec3{0.2, 0.5, -0.6});
    CHECK(Sval.z == doctest::Approx(0.29));
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        auto F = [&, i](const PhasePoint& s) { return S(s, i); };
        auto G = [&, j](const PhasePoint& s) { return S(s, j); };
        CHECK(poisson_bracket_fd(F, G, x) == doctest::Approx(Sval[k]).epsilon(1e-8));
    }
}

TEST_CASE("newton_solve: scalar cubic") {
    auto res = [](std::span<const double> x) {
        return std::vector<double>{x[0] * x[0] * x[0] - 2.0};
    };
    auto x = newton_solve(res, {1.0}, 1e-12);
    CHECK(x[0] == doctest::Approx(std::cbrt(2.0)).epsilon(1e-12));
}

TEST_CASE("newton_solve: coupled 2d system") {
    // x^2 + y^2 = 4, y = exp(x) - 1; root near (1.0042, 1.7296)
    auto res = [](std::span<const double> v) {
        return std::vector<double>{v[0] * v[0] + v[1] * v[1] - 4.0, v[1] - std::expm1(v[0])};
    };
    auto x = newton_solve(res, {1.0, 1.0}, 1e-12);
    auto r = res(x);
    CHECK(std::abs(r[0]) < 1e-11);
    CHECK(std::abs(r[1]) < 1e-11);
}

TEST_CASE("newton_solve: reports failure with residual norm") {
    auto res = [](std::span<const double> x) {
        return std::vector<double>{x[0] * x[0] + 1.0};  // no real root
    };
    CHECK_THROWS_AS(newton_solve(res, {3.0}, 1e-12, 25), std::runtime_error);
}

TEST_CASE("least_squares_fit: noiseless line recovered") {
    FitData d;
    for (int i = 0; i < 10; ++i) {
        d.x.push_back(i);
        d.y.push_back(2.5 * i - 1.0);
    }
    auto model = [](double x, std::span<const double> p) { return p[0] * x + p[1]; };
    auto fit = least_squares_fit(model, {0.0, 0.0}, d);
    CHECK(fit.params[0] == doctest::Approx(2.5).epsilon(1e-10));
    CHECK(fit.params[1] == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(fit.rms < 1e-10);
}

TEST_CASE("least_squares_fit: nonlinear decay") {
    FitData d;
    for (int i = 0; i < 20; ++i) {
        double x = 0.25 * i;
        d.x.push_back(x);
        d.y.push_back(3.0 * std::exp(-0.8 * x) + 0.5);
    }
    auto model = [](double x, std::span<const double> p) {
        return p[0] * std::exp(-p[1] * x) + p[2];
    };
    auto fit = least_squares_fit(model, {1.0, 1.0, 0.0}, d);
    CHECK(fit.params[0] == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(fit.params[1] == doctest::Approx(0.8).epsilon(1e-8));
    CHECK(fit.params[2] == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("least_squares_fit: insensitive parameter is degenerate") {
    FitData d{{1, 2, 3, 4}, {1, 2, 3, 4}};
    auto model = [](double x, std::span<const double> p) { return p[0] * x + 0.0 * p[1]; };
    CHECK_THROWS_WITH_AS(least_squares_fit(model, {0.5, 0.5}, d), "degenerate fit",
                         std::runtime_error);
}
