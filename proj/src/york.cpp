#include "restframe/york.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "restframe/rng.hpp"

namespace restframe {

namespace {

constexpr double pi_ = std::numbers::pi;

}  // namespace

GammaMatrix gamma_solve(std::optional<std::uint64_t> seed) {
    const double s1 = 1 / std::sqrt(2.0), s2 = 1 / std::sqrt(6.0);
    GammaMatrix g;
    g(0, 0) = s1;
    g(0, 1) = -s1;
    g(0, 2) = 0;
    g(1, 0) = s2;
    g(1, 1) = s2;
    g(1, 2) = -2 * s2;
    if (!seed) return g;

    auto rng = make_rng(*seed);
    const double alpha = uniform(rng, 0, 2 * pi_);
    const bool reflect = uniform(rng, 0, 1) < 0.5;
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    GammaMatrix r;
    for (int a = 0; a < 3; ++a) {
        r(0, a) = ca * g(0, a) + sa * g(1, a);
        r(1, a) = reflect ? sa * g(0, a) - ca * g(1, a) : -sa * g(0, a) + ca * g(1, a);
    }
    return r;
}

double gamma_residual(const GammaMatrix& g) {
    double worst = 0;
    for (int i = 0; i < 2; ++i) {
        worst = std::max(worst, std::abs(g(i, 0) + g(i, 1) + g(i, 2)));
        for (int j = 0; j < 2; ++j) {
            double dot_ij = g(i, 0) * g(j, 0) + g(i, 1) * g(j, 1) + g(i, 2) * g(j, 2);
            worst = std::max(worst, std::abs(dot_ij - (i == j ? 1.0 : 0.0)));
        }
    }
    for (int u = 0; u < 3; ++u)
        for (int v = 0; v < 3; ++v) {
            double s = g(0, u) * g(0, v) + g(1, u) * g(1, v);
            double want = (u == v ? 1.0 : 0.0) - 1.0 / 3.0;
            worst = std::max(worst, std::abs(s - want));
        }
    return worst;
}

Mat3 rotation_from_theta(const Vec3& theta) {
    const double phi2 = dot(theta, theta);
    const double phi = std::sqrt(phi2);
    // sin(phi)/phi and (1-cos(phi))/phi^2, series-stabilized near zero
    double a, b;
    if (phi < 1e-4) {
        a = 1 - phi2 / 6;
        b = 0.5 - phi2 / 24;
    } else {
        a = std::sin(phi) / phi;
        b = (1 - std::cos(phi)) / phi2;
    }
    Mat3 K;  // hat map
    K(0, 1) = -theta.z;
    K(0, 2) = theta.y;
    K(1, 0) = theta.z;
    K(1, 2) = -theta.x;
    K(2, 0) = -theta.y;
    K(2, 1) = theta.x;
    Mat3 K2 = K * K;
    Mat3 V = Mat3::identity();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) V(i, j) += a * K(i, j) + b * K2(i, j);
    return V;
}

MetricResult metric_from_york(const YorkBasisPoint& p, const GammaMatrix& gamma, int eps) {
    if (eps != 1 && eps != -1) throw std::invalid_argument("signature must be +1 or -1");
    if (!(p.phi_tilde > 0)) throw std::domain_error("volume density must be positive");
    if (!(1 + p.n > 0)) throw std::domain_error("lapse must stay positive");

    const Mat3 V = rotation_from_theta(p.theta);
    const double phi13 = std::cbrt(p.phi_tilde);
    double Q[3];
    for (int a = 0; a < 3; ++a) Q[a] = std::exp(gamma(0, a) * p.R[0] + gamma(1, a) * p.R[1]);

    MetricResult out;
    out.phi_tilde = p.phi_tilde;
    out.eps = eps;
    for (int a = 0; a < 3; ++a)
        for (int r = 0; r < 3; ++r) out.triad(a, r) = V(r, a) * phi13 * Q[a];

    const double nb2 = dot(p.n_bar, p.n_bar);
    out.g(0, 0) = eps * ((1 + p.n) * (1 + p.n) - nb2);
    for (int r = 0; r < 3; ++r) {
        double s = 0;
        for (int a = 0; a < 3; ++a) s += p.n_bar[a] * out.triad(a, r);
        out.g(0, r + 1) = out.g(r + 1, 0) = -eps * s;
    }
    for (int r = 0; r < 3; ++r)
        for (int s = r; s < 3; ++s) {
            double acc = 0;
            for (int a = 0; a < 3; ++a) acc += out.triad(a, r) * out.triad(a, s);
            out.g(r + 1, s + 1) = out.g(s + 1, r + 1) = -eps * acc;
        }
    return out;
}

double adm_energy_density(const YorkBasisPoint& p, double matter, double S_term,
                          const GravityUnits& u) {
    if (!(p.phi_tilde > 0)) throw std::domain_error("volume density must be positive");
    const double c3_16piG = u.c * u.c * u.c / (16 * pi_ * u.G);
    const double piG_c3 = pi_ * u.G / (u.c * u.c * u.c);

    double sig2 = 0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            if (a != b) sig2 += p.shear(a, b) * p.shear(a, b);

    const double Pi2 = p.Pi[0] * p.Pi[0] + p.Pi[1] * p.Pi[1];
    return u.c * (matter - c3_16piG * S_term + 4 * piG_c3 / p.phi_tilde * Pi2 +
                  p.phi_tilde * (c3_16piG * sig2 - 6 * piG_c3 * p.pi_phi * p.pi_phi));
}

ScalarField curvature_scalar_fd(const YorkField& f, const GammaMatrix& gamma) {
    const Grid3& g = f.grid;
    // symmetric 3-metric components; pair order (00,01,02,11,12,22)
    static constexpr int pr[6] = {0, 0, 0, 1, 1, 2};
    static constexpr int ps[6] = {0, 1, 2, 1, 2, 2};
    std::array<ScalarField, 6> met;
    met.fill(ScalarField(g));
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k) {
                MetricResult m = metric_from_york(f.pts[g.index(i, j, k)], gamma, 1);
                for (int q = 0; q < 6; ++q)
                    met[q].at(i, j, k) = -m.g(pr[q] + 1, ps[q] + 1);
            }

    ScalarField S(g);
    const double inv2h = 1 / (2 * g.spacing);
    auto wrap = [&](int m) { return (m + g.n) % g.n; };
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k) {
                Mat3 gm;
                for (int q = 0; q < 6; ++q)
                    gm(pr[q], ps[q]) = gm(ps[q], pr[q]) = met[q].at(i, j, k);
                Mat3 gi = inverse(gm);

                Mat3 dg[3];
                for (int q = 0; q < 6; ++q) {
                    double dx = (met[q].at(wrap(i + 1), j, k) - met[q].at(wrap(i - 1), j, k)) *
                                inv2h;
                    double dy = (met[q].at(i, wrap(j + 1), k) - met[q].at(i, wrap(j - 1), k)) *
                                inv2h;
                    double dz = (met[q].at(i, j, wrap(k + 1)) - met[q].at(i, j, wrap(k - 1))) *
                                inv2h;
                    dg[0](pr[q], ps[q]) = dg[0](ps[q], pr[q]) = dx;
                    dg[1](pr[q], ps[q]) = dg[1](ps[q], pr[q]) = dy;
                    dg[2](pr[q], ps[q]) = dg[2](ps[q], pr[q]) = dz;
                }

                Mat3 chris[3];  // chris[u](r,s) = Gamma^u_rs
                for (int u = 0; u < 3; ++u)
                    for (int r = 0; r < 3; ++r)
                        for (int s = r; s < 3; ++s) {
                            double acc = 0;
                            for (int v = 0; v < 3; ++v)
                                acc += gi(u, v) * (dg[r](v, s) + dg[s](v, r) - dg[v](r, s));
                            chris[u](r, s) = chris[u](s, r) = 0.5 * acc;
                        }

                double trace[3];  // Gamma^v_uv
                for (int u = 0; u < 3; ++u) {
                    trace[u] = 0;
                    for (int v = 0; v < 3; ++v) trace[u] += chris[v](u, v);
                }

                double s_val = 0;
                for (int r = 0; r < 3; ++r)
                    for (int s = 0; s < 3; ++s) {
                        double t1 = 0;
                        for (int u = 0; u < 3; ++u)
                            for (int v = 0; v < 3; ++v) t1 += chris[u](v, r) * chris[v](u, s);
                        double t2 = 0;
                        for (int u = 0; u < 3; ++u) t2 += chris[u](r, s) * trace[u];
                        s_val += gi(r, s) * (t1 - t2);
                    }
                S.at(i, j, k) = s_val;
            }
    return S;
}

double adm_energy(const YorkField& f, const ScalarField& matter, const GammaMatrix& gamma,
                  const GravityUnits& u, const ScalarField* S_override) {
    if (!(matter.grid == f.grid))
        throw std::invalid_argument("matter field lives on a different grid");
    if (S_override && !(S_override->grid == f.grid))
        throw std::invalid_argument("curvature field lives on a different grid");
    ScalarField S = S_override ? *S_override : curvature_scalar_fd(f, gamma);

    double sum = 0, comp = 0;
    for (std::size_t i = 0; i < f.pts.size(); ++i) {
        double x = adm_energy_density(f.pts[i], matter.v[i], S.v[i], u);
        double y = x - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum * f.grid.cell_volume();
}

}  // namespace restframe
