#include "restframe/maxwell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fft_detail.hpp"

namespace restframe {

namespace {

void require_same_grid(const Grid3& a, const Grid3& b) {
    if (!(a == b)) throw std::invalid_argument("fields live on different grids");
}

}  // namespace

EmDecomposition decompose(const EmState& s) {
    EmDecomposition d(s.grid);
    d.A_tau = s.A_tau;
    d.pi_tau = s.pi_tau;
    d.A_mean = field_mean(s.A);
    d.pi_mean = field_mean(s.pi);

    ScalarField div_A = divergence(s.A);
    d.eta = inverse_laplacian(div_A);
    for (double& x : d.eta.v) x = -x;

    VectorField3 grad_eta = gradient(d.eta);
    for (int r = 0; r < 3; ++r)
        for (std::size_t i = 0; i < d.A_perp[r].v.size(); ++i)
            d.A_perp[r].v[i] = s.A[r].v[i] - d.A_mean[r] - grad_eta[r].v[i];

    d.Gamma = divergence(s.pi);
    VectorField3 grad_pot = gradient(inverse_laplacian(d.Gamma));
    for (int r = 0; r < 3; ++r)
        for (std::size_t i = 0; i < d.pi_perp[r].v.size(); ++i)
            d.pi_perp[r].v[i] = s.pi[r].v[i] - d.pi_mean[r] + grad_pot[r].v[i];

    return d;
}

EmState recompose(const EmDecomposition& d) {
    double scale = 1 + field_max_abs(d.A_perp) + field_max_abs(d.pi_perp);
    if (max_transverse_violation(d) > 1e-8 * scale)
        throw std::invalid_argument("invalid decomposition");

    EmState s(d.grid);
    s.A_tau = d.A_tau;
    s.pi_tau = d.pi_tau;
    VectorField3 grad_eta = gradient(d.eta);
    VectorField3 grad_pot = gradient(inverse_laplacian(d.Gamma));
    for (int r = 0; r < 3; ++r)
        for (std::size_t i = 0; i < s.A[r].v.size(); ++i) {
            s.A[r].v[i] = d.A_perp[r].v[i] + grad_eta[r].v[i] + d.A_mean[r];
            s.pi[r].v[i] = d.pi_perp[r].v[i] - grad_pot[r].v[i] + d.pi_mean[r];
        }
    return s;
}

double radiation_energy(const EmDecomposition& d) {
    VectorField3 B = curl(d.A_perp);
    double s = 0;
    for (int r = 0; r < 3; ++r)
        for (std::size_t i = 0; i < B[r].v.size(); ++i)
            s += B[r].v[i] * B[r].v[i] + d.pi_perp[r].v[i] * d.pi_perp[r].v[i];
    return 0.5 * s * d.grid.cell_volume();
}

double max_transverse_violation(const EmDecomposition& d) {
    return std::max(field_max_abs(divergence(d.A_perp)), field_max_abs(divergence(d.pi_perp)));
}

EmEvolveResult evolve_free(const EmDecomposition& d, double tau0, double tau1, double dt,
                           int stride) {
    if (!(dt > 0)) throw std::invalid_argument("time step must be positive");
    if (dt > 0.5 * d.grid.spacing / std::sqrt(3.0) * (1 + 1e-12))
        throw std::invalid_argument("CFL violation");
    if (stride < 1) throw std::invalid_argument("stride must be positive");
    const long long nsteps = std::llround((tau1 - tau0) / dt);
    if (nsteps < 0) throw std::invalid_argument("tau1 must not precede tau0");

    const std::size_t nc = detail::spectrum_size(d.grid.n);
    std::array<std::vector<detail::cplx>, 3> a, p;
    for (int r = 0; r < 3; ++r) {
        a[r] = detail::fft_forward(d.A_perp[r]);
        p[r] = detail::fft_forward(d.pi_perp[r]);
    }

    std::vector<double> k2(nc);
    std::vector<double> parseval_w(nc);
    const int n = d.grid.n;
    detail::for_each_mode(
        d.grid, [&](std::size_t idx, double kx, double ky, double kz, int, int, int mz) {
            k2[idx] = kx * kx + ky * ky + kz * kz;
            parseval_w[idx] = (mz > 0 && mz < (n + 1) / 2) ? 2.0 : 1.0;
        });

    // lattice-sum energy via Parseval on the r2c half-spectrum
    const double parseval_norm = 0.5 * d.grid.cell_volume() / static_cast<double>(d.grid.size());
    auto energy_now = [&]() {
        double s = 0;
        detail::for_each_mode(
            d.grid, [&](std::size_t idx, double kx, double ky, double kz, int, int, int) {
                double b2 = 0;
                double k[3] = {kx, ky, kz};
                for (int r = 0; r < 3; ++r) {
                    int u = (r + 1) % 3, v = (r + 2) % 3;
                    b2 += std::norm(k[u] * a[v][idx] - k[v] * a[u][idx]);
                }
                s += parseval_w[idx] * (std::norm(p[0][idx]) + std::norm(p[1][idx]) +
                                        std::norm(p[2][idx]) + b2);
            });
        return s * parseval_norm;
    };

    auto max_div_now = [&]() {
        std::vector<detail::cplx> div(nc);
        detail::for_each_mode(d.grid,
                              [&](std::size_t idx, double kx, double ky, double kz, int, int, int) {
                                  div[idx] = detail::cplx{0, kx} * a[0][idx] +
                                             detail::cplx{0, ky} * a[1][idx] +
                                             detail::cplx{0, kz} * a[2][idx];
                              });
        return field_max_abs(detail::fft_backward(d.grid, div));
    };

    EmEvolveResult out;
    auto sample = [&](long long step) {
        out.series.push_back({tau0 + step * dt, energy_now(), max_div_now()});
    };
    sample(0);

    const double half = 0.5 * dt;
    for (long long step = 1; step <= nsteps; ++step) {
        for (int r = 0; r < 3; ++r)
            for (std::size_t i = 0; i < nc; ++i) p[r][i] += half * k2[i] * a[r][i];
        for (int r = 0; r < 3; ++r)
            for (std::size_t i = 0; i < nc; ++i) a[r][i] -= dt * p[r][i];
        for (int r = 0; r < 3; ++r)
            for (std::size_t i = 0; i < nc; ++i) p[r][i] += half * k2[i] * a[r][i];
        if (step % stride == 0 || step == nsteps) sample(step);
    }

    out.final_state = d;
    for (int r = 0; r < 3; ++r) {
        out.final_state.A_perp[r] = detail::fft_backward(d.grid, a[r]);
        out.final_state.pi_perp[r] = detail::fft_backward(d.grid, p[r]);
    }
    return out;
}

void gauge_step(EmDecomposition& d, const ScalarField& lambda_tau, double dt) {
    require_same_grid(d.grid, lambda_tau.grid);
    for (std::size_t i = 0; i < d.eta.v.size(); ++i) d.eta.v[i] += dt * d.A_tau.v[i];
    for (std::size_t i = 0; i < d.A_tau.v.size(); ++i) d.A_tau.v[i] += dt * lambda_tau.v[i];
}

ScalarField make_charge_density(const Grid3& g, const std::vector<ChargeSpec>& charges) {
    ScalarField rho(g);
    const double L = g.length();
    for (const ChargeSpec& c : charges) {
        if (!(c.width > 0)) throw std::invalid_argument("charge width must be positive");
        const double norm =
            c.e / (std::pow(2 * std::numbers::pi, 1.5) * c.width * c.width * c.width);
        const double inv2w2 = 0.5 / (c.width * c.width);
        double sum = 0, comp = 0;
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                for (int k = 0; k < g.n; ++k) {
                    Vec3 dx = torus_delta(g.point(i, j, k), c.center, L);
                    double val = norm * std::exp(-dot(dx, dx) * inv2w2);
                    rho.at(i, j, k) += val;
                    double y = val - comp;
                    double t = sum + y;
                    comp = (t - sum) - y;
                    sum = t;
                }
        if (std::abs(sum * g.cell_volume() - c.e) > 1e-8 * std::max(1.0, std::abs(c.e)))
            throw std::invalid_argument("charge bump not resolved on this grid");
    }
    return rho;
}

ScalarField gauss_residual(const EmDecomposition& d, const ScalarField& rho) {
    require_same_grid(d.grid, rho.grid);
    ScalarField res = d.Gamma;
    for (std::size_t i = 0; i < res.v.size(); ++i) res.v[i] -= rho.v[i];
    return res;
}

ChargePair charge_identity(const EmDecomposition& d, const ScalarField& rho, const Box& region) {
    require_same_grid(d.grid, rho.grid);
    EmState s = recompose(d);
    ChargePair cp;
    cp.Q_strong = box_flux(s.pi, region);
    cp.Q_weak = box_integral(rho, region);
    cp.gamma_minus_rho = box_integral(gauss_residual(d, rho), region);
    return cp;
}

}  // namespace restframe
