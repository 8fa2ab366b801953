#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "restframe/rng.hpp"
#include "restframe/yangmills.hpp"

using namespace restframe;

namespace {

constexpr double pi_ = std::numbers::pi;

ScalarField band_limited(const Grid3& g, std::mt19937_64& rng, int max_mode) {
    ScalarField f(g);
    const double L = g.length();
    for (int mx = -max_mode; mx <= max_mode; ++mx)
        for (int my = -max_mode; my <= max_mode; ++my)
            for (int mz = 0; mz <= max_mode; ++mz) {
                if (mx == 0 && my == 0 && mz == 0) continue;
                double a = uniform(rng, -1, 1), ph = uniform(rng, 0, 2 * pi_);
                for (int i = 0; i < g.n; ++i)
                    for (int j = 0; j < g.n; ++j)
                        for (int k = 0; k < g.n; ++k) {
                            Vec3 x = g.point(i, j, k);
                            f.at(i, j, k) +=
                                a * std::cos(2 * pi_ * (mx * x.x + my * x.y + mz * x.z) / L + ph);
                        }
            }
    return f;
}

YmState random_ym(const Grid3& g, const StructureConstants& sc, std::uint64_t seed,
                  int max_mode = 1) {
    auto rng = make_rng(seed);
    YmState s(g, sc);
    for (int a = 0; a < sc.dim; ++a)
        for (int r = 0; r < 3; ++r) {
            s.A[a][r] = band_limited(g, rng, max_mode);
            s.pi[a][r] = band_limited(g, rng, max_mode);
        }
    return s;
}

double jacobi_defect(const StructureConstants& f) {
    double worst = 0;
    for (int a = 0; a < f.dim; ++a)
        for (int b = 0; b < f.dim; ++b)
            for (int c = 0; c < f.dim; ++c)
                for (int d = 0; d < f.dim; ++d) {
                    double s = 0;
                    for (int e = 0; e < f.dim; ++e)
                        s += f.at(a, b, e) * f.at(e, c, d) + f.at(b, c, e) * f.at(e, a, d) +
                             f.at(c, a, e) * f.at(e, b, d);
                    worst = std::max(worst, std::abs(s));
                }
    return worst;
}

double antisymmetry_defect(const StructureConstants& f) {
    double worst = 0;
    for (int a = 0; a < f.dim; ++a)
        for (int b = 0; b < f.dim; ++b)
            for (int c = 0; c < f.dim; ++c) {
                worst = std::max(worst, std::abs(f.at(a, b, c) + f.at(b, a, c)));
                worst = std::max(worst, std::abs(f.at(a, b, c) + f.at(a, c, b)));
            }
    return worst;
}

double max_field_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.v.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
    return m;
}

double max_field_diff(const VectorField3& a, const VectorField3& b) {
    double m = 0;
    for (int r = 0; r < 3; ++r) m = std::max(m, max_field_diff(a[r], b[r]));
    return m;
}

}  // namespace

TEST_CASE("structure constants: su(2) is the Levi-Civita symbol") {
    StructureConstants f = StructureConstants::su2();
    CHECK(f.dim == 3);
    CHECK(f.at(0, 1, 2) == 1.0);
    CHECK(f.at(1, 2, 0) == 1.0);
    CHECK(f.at(2, 0, 1) == 1.0);
    CHECK(f.at(1, 0, 2) == -1.0);
    CHECK(f.at(0, 0, 1) == 0.0);
    CHECK(antisymmetry_defect(f) == 0.0);
    CHECK(jacobi_defect(f) == 0.0);
}

TEST_CASE("structure constants: su(3) table") {
    StructureConstants f = StructureConstants::su3();
    CHECK(f.dim == 8);
    const double h = 0.5, r3 = std::sqrt(3.0) / 2;
    CHECK(f.at(0, 1, 2) == 1.0);
    CHECK(f.at(0, 3, 6) == h);
    CHECK(f.at(0, 4, 5) == -h);
    CHECK(f.at(1, 3, 5) == h);
    CHECK(f.at(1, 4, 6) == h);
    CHECK(f.at(2, 3, 4) == h);
    CHECK(f.at(2, 5, 6) == -h);
    CHECK(f.at(3, 4, 7) == r3);
    CHECK(f.at(5, 6, 7) == r3);
    // permutation closure
    CHECK(f.at(6, 0, 3) == h);
    CHECK(f.at(7, 3, 4) == r3);
    CHECK(f.at(7, 4, 3) == -r3);
    CHECK(antisymmetry_defect(f) == 0.0);
    CHECK(jacobi_defect(f) < 1e-15);
}

TEST_CASE("structure constants: abelian is all zeros") {
    StructureConstants f = StructureConstants::abelian(4);
    CHECK(f.dim == 4);
    double s = 0;
    for (double x : f.c) s += std::abs(x);
    CHECK(s == 0.0);
}

TEST_CASE("ym_gauss: hand-built state") {
    Grid3 g(16, 0.5);
    const double k = 2 * pi_ * 2 / g.length();
    const double alpha = 0.7, beta = 1.3, gamma = -0.4;

    YmState s(g, StructureConstants::su2());
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int kk = 0; kk < g.n; ++kk) {
                s.A[1][0].at(i, j, kk) = alpha;
                s.pi[2][0].at(i, j, kk) = beta * std::cos(k * kk * g.spacing);
                s.pi[0][0].at(i, j, kk) = gamma * std::sin(k * i * g.spacing);
            }

    std::vector<ScalarField> G = ym_gauss(s);
    // Gamma_0 = div pi_0 + A_1 . pi_2 = gamma k cos(k x) + alpha beta cos(k z)
    double worst0 = 0, worst1 = 0, worst2 = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int kk = 0; kk < g.n; ++kk) {
                double x = i * g.spacing, z = kk * g.spacing;
                double want0 = gamma * k * std::cos(k * x) + alpha * beta * std::cos(k * z);
                worst0 = std::max(worst0, std::abs(G[0].at(i, j, kk) - want0));
                // Gamma_1 = -A_0 . pi_2 + ... = 0 here; Gamma_2 = -A_1 . pi_0... no:
                // Gamma_2 = c_201 A_0.pi_1 + c_210 A_1.pi_0 = -A_1 . pi_0
                worst1 = std::max(worst1, std::abs(G[1].at(i, j, kk)));
                double want2 = -alpha * gamma * std::sin(k * x);
                worst2 = std::max(worst2, std::abs(G[2].at(i, j, kk) - want2));
            }
    CHECK(worst0 < 1e-12);
    CHECK(worst1 < 1e-13);
    CHECK(worst2 < 1e-13);
}

TEST_CASE("ym_gauge_transform: constant parameter rotates colours with old fields") {
    Grid3 g(8, 0.5);
    YmState s(g, StructureConstants::su2());
    Vec3 a0{1, 2, 3}, a1{0.5, 0, -1};
    for (int r = 0; r < 3; ++r)
        for (auto& v : s.A[0][r].v) v = a0[r];
    for (int r = 0; r < 3; ++r)
        for (auto& v : s.A[1][r].v) v = a1[r];
    for (int r = 0; r < 3; ++r)
        for (auto& v : s.pi[0][r].v) v = 2 * a1[r];

    std::vector<ScalarField> eps(3, ScalarField(g));
    for (auto& v : eps[2].v) v = 0.1;

    ym_gauge_transform(s, eps);
    // delta A_0 = c_012 A_1 eps_2 = 0.1 A_1;  delta A_1 = c_102 A_0 eps_2 = -0.1 A_0
    for (int r = 0; r < 3; ++r) {
        CHECK(s.A[0][r].v[0] == doctest::Approx(a0[r] + 0.1 * a1[r]).epsilon(1e-15));
        CHECK(s.A[1][r].v[0] == doctest::Approx(a1[r] - 0.1 * a0[r]).epsilon(1e-15));
        CHECK(s.A[2][r].v[0] == 0.0);
        CHECK(s.pi[0][r].v[0] == 2 * a1[r]);  // delta pi_0 = c_012 pi_1 eps_2 = 0
        CHECK(s.pi[1][r].v[0] == doctest::Approx(-0.1 * 2 * a1[r]).epsilon(1e-15));
    }
}

TEST_CASE("ym_gauss transforms in the adjoint under gauge transformations") {
    Grid3 g(16, 0.5);
    StructureConstants f = StructureConstants::su2();
    YmState s = random_ym(g, f, 101, 2);
    std::vector<ScalarField> G0 = ym_gauss(s);

    const double amp = 1e-6;
    auto rng = make_rng(9);
    std::vector<ScalarField> eps;
    for (int a = 0; a < f.dim; ++a) {
        ScalarField e = band_limited(g, rng, 2);
        for (auto& v : e.v) v *= amp;
        eps.push_back(e);
    }

    YmState s2 = s;
    ym_gauge_transform(s2, eps);
    std::vector<ScalarField> G1 = ym_gauss(s2);

    double worst = 0, scale = 0;
    for (int a = 0; a < f.dim; ++a) {
        scale = std::max(scale, field_max_abs(G0[a]));
        for (std::size_t i = 0; i < G0[a].v.size(); ++i) {
            double want = 0;
            for (int b = 0; b < f.dim; ++b)
                for (int c = 0; c < f.dim; ++c)
                    want += f.at(a, b, c) * G0[b].v[i] * eps[c].v[i];
            worst = std::max(worst, std::abs(G1[a].v[i] - G0[a].v[i] - want));
        }
    }
    // residual is quadratic in the gauge parameter
    CHECK(worst < 1e-8 * scale);
}

TEST_CASE("ym_color_charges: discrete identity holds colour by colour") {
    Grid3 g(12, 0.5);
    YmState s = random_ym(g, StructureConstants::su3(), 202);
    Box region{{0.8, 0.3, 1.1}, {4.9, 5.6, 3.7}};
    ColorCharges cc = ym_color_charges(s, region);
    std::vector<ScalarField> G = ym_gauss(s);

    for (int a = 0; a < 8; ++a) {
        double scale = 1 + std::abs(cc.Q_strong[a]) + std::abs(cc.Q_weak[a]);
        CHECK(std::abs(cc.Q_strong[a] - cc.Q_weak[a] - cc.gamma_integral[a]) < 1e-12 * scale);
    }
}

TEST_CASE("abelian limit: Gauss law and charges reduce to Maxwell") {
    Grid3 g(12, 0.5);
    YmState s = random_ym(g, StructureConstants::abelian(2), 303);

    std::vector<ScalarField> G = ym_gauss(s);
    for (int a = 0; a < 2; ++a) {
        ScalarField dp = divergence(s.pi[a]);
        CHECK(max_field_diff(G[a], dp) == 0.0);
    }

    Box region{{0.4, 0.9, 0.6}, {4.4, 3.3, 5.1}};
    ColorCharges cc = ym_color_charges(s, region);
    for (int a = 0; a < 2; ++a) {
        CHECK(cc.Q_weak[a] == 0.0);
        CHECK(cc.Q_strong[a] == doctest::Approx(box_flux(s.pi[a], region)).epsilon(1e-15));
        CHECK(std::abs(cc.Q_strong[a] - cc.gamma_integral[a]) <
              1e-12 * (1 + std::abs(cc.Q_strong[a])));
    }

    // gauge transform degenerates to the gradient shift
    auto rng = make_rng(11);
    std::vector<ScalarField> eps{band_limited(g, rng, 1), band_limited(g, rng, 1)};
    YmState s2 = s;
    ym_gauge_transform(s2, eps);
    for (int a = 0; a < 2; ++a) {
        CHECK(max_field_diff(s2.pi[a], s.pi[a]) == 0.0);
        VectorField3 ge = gradient(eps[a]);
        double worst = 0;
        for (int r = 0; r < 3; ++r)
            for (std::size_t i = 0; i < ge[r].v.size(); ++i)
                worst = std::max(worst,
                                 std::abs(s2.A[a][r].v[i] - s.A[a][r].v[i] - ge[r].v[i]));
        CHECK(worst < 1e-14);
    }
}
