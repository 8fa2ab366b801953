#include "restframe/spectral.hpp"

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fft_detail.hpp"

namespace restframe {

double field_mean(const ScalarField& f) {
    // Kahan summation: the mean gates inverse_laplacian, so keep it honest.
    double s = 0, comp = 0;
    for (double x : f.v) {
        double y = x - comp;
        double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    return s / static_cast<double>(f.v.size());
}

double field_max_abs(const ScalarField& f) {
    double m = 0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
}

double field_max_abs(const VectorField3& f) {
    double m = 0;
    for (int r = 0; r < 3; ++r) m = std::max(m, field_max_abs(f[r]));
    return m;
}

Vec3 field_mean(const VectorField3& f) {
    return {field_mean(f[0]), field_mean(f[1]), field_mean(f[2])};
}

Vec3 torus_delta(const Vec3& a, const Vec3& b, double L) {
    Vec3 d = a - b;
    for (int r = 0; r < 3; ++r) {
        d[r] -= L * std::round(d[r] / L);
    }
    return d;
}

using detail::cplx;
using detail::for_each_mode;

namespace {

constexpr double two_pi = 2 * std::numbers::pi;

/*
 * One cached FFTW plan pair per grid size.  Plans use FFTW_ESTIMATE so the
 * algorithm choice (and therefore the rounding pattern) is reproducible
 * between runs; transforms run serialized through the shared buffers.
 */
struct PlanSet {
    int n = 0;
    double* rbuf = nullptr;
    fftw_complex* cbuf = nullptr;
    fftw_plan fwd = nullptr, bwd = nullptr;
    std::size_t nc = 0;
};

std::mutex& fft_mutex() {
    static std::mutex m;
    return m;
}

PlanSet& plans_for(int n) {
    static std::map<int, PlanSet> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    PlanSet p;
    p.n = n;
    p.nc = static_cast<std::size_t>(n) * n * (n / 2 + 1);
    p.rbuf = fftw_alloc_real(static_cast<std::size_t>(n) * n * n);
    p.cbuf = fftw_alloc_complex(p.nc);
    p.fwd = fftw_plan_dft_r2c_3d(n, n, n, p.rbuf, p.cbuf, FFTW_ESTIMATE);
    p.bwd = fftw_plan_dft_c2r_3d(n, n, n, p.cbuf, p.rbuf, FFTW_ESTIMATE);
    if (!p.fwd || !p.bwd) throw std::runtime_error("fftw plan creation failed");
    return cache.emplace(n, p).first->second;
}

}  // namespace

namespace detail {

std::size_t spectrum_size(int n) { return static_cast<std::size_t>(n) * n * (n / 2 + 1); }

std::vector<cplx> fft_forward(const ScalarField& f) {
    std::lock_guard<std::mutex> lock(fft_mutex());
    PlanSet& p = plans_for(f.grid.n);
    std::copy(f.v.begin(), f.v.end(), p.rbuf);
    fftw_execute(p.fwd);
    std::vector<cplx> out(p.nc);
    for (std::size_t i = 0; i < p.nc; ++i) out[i] = {p.cbuf[i][0], p.cbuf[i][1]};
    return out;
}

ScalarField fft_backward(const Grid3& g, const std::vector<cplx>& spec) {
    std::lock_guard<std::mutex> lock(fft_mutex());
    PlanSet& p = plans_for(g.n);
    for (std::size_t i = 0; i < p.nc; ++i) {
        p.cbuf[i][0] = spec[i].real();
        p.cbuf[i][1] = spec[i].imag();
    }
    fftw_execute(p.bwd);
    ScalarField out(g);
    const double scale = 1.0 / static_cast<double>(g.size());
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = p.rbuf[i] * scale;
    return out;
}

// The Nyquist plane (even n, m = n/2) carries no odd-derivative information
// and is zeroed in every operator.
double wavenumber(int m, int n, double L) {
    if (n % 2 == 0 && m == n / 2) return 0.0;
    int s = (m <= n / 2) ? m : m - n;
    return two_pi * s / L;
}

}  // namespace detail

namespace {

std::vector<cplx> forward(const ScalarField& f) { return detail::fft_forward(f); }

ScalarField backward(const Grid3& g, const std::vector<cplx>& spec) {
    return detail::fft_backward(g, spec);
}

}  // namespace

ScalarField laplacian(const ScalarField& f) {
    auto spec = forward(f);
    for_each_mode(f.grid, [&](std::size_t idx, double kx, double ky, double kz, int, int, int) {
        spec[idx] *= kx * kx + ky * ky + kz * kz;
    });
    return backward(f.grid, spec);
}

ScalarField inverse_laplacian(const ScalarField& f) {
    double mean = field_mean(f);
    if (std::abs(mean) > 1e-10 * (field_max_abs(f) + std::abs(mean)))
        throw std::domain_error("zero-mode not invertible on torus");
    auto spec = forward(f);
    for_each_mode(f.grid, [&](std::size_t idx, double kx, double ky, double kz, int, int, int) {
        double k2 = kx * kx + ky * ky + kz * kz;
        spec[idx] = k2 > 0 ? spec[idx] / k2 : cplx{0, 0};
    });
    return backward(f.grid, spec);
}

VectorField3 gradient(const ScalarField& f) {
    auto spec = forward(f);
    VectorField3 out(f.grid);
    for (int r = 0; r < 3; ++r) {
        auto comp = spec;
        for_each_mode(f.grid, [&](std::size_t idx, double kx, double ky, double kz, int, int, int) {
            double k[3] = {kx, ky, kz};
            comp[idx] *= cplx{0, k[r]};
        });
        out[r] = backward(f.grid, comp);
    }
    return out;
}

ScalarField divergence(const VectorField3& f) {
    const int n = f.grid.n;
    std::vector<cplx> acc(static_cast<std::size_t>(n) * n * (n / 2 + 1), cplx{0, 0});
    for (int r = 0; r < 3; ++r) {
        auto spec = forward(f[r]);
        for_each_mode(f.grid, [&](std::size_t idx, double kx, double ky, double kz, int, int, int) {
            double k[3] = {kx, ky, kz};
            acc[idx] += spec[idx] * cplx{0, k[r]};
        });
    }
    return backward(f.grid, acc);
}

VectorField3 curl(const VectorField3& f) {
    std::array<std::vector<cplx>, 3> spec{forward(f[0]), forward(f[1]), forward(f[2])};
    VectorField3 out(f.grid);
    for (int r = 0; r < 3; ++r) {
        const int s = (r + 1) % 3, t = (r + 2) % 3;
        std::vector<cplx> comp(spec[0].size());
        for_each_mode(f.grid, [&](std::size_t idx, double kx, double ky, double kz, int, int, int) {
            double k[3] = {kx, ky, kz};
            comp[idx] = cplx{0, k[s]} * spec[t][idx] - cplx{0, k[t]} * spec[s][idx];
        });
        out[r] = backward(f.grid, comp);
    }
    return out;
}

namespace {

// integral of e^{ikx} over [a, b]
cplx segment_integral(double k, double a, double b) {
    if (k == 0.0) return {b - a, 0};
    return (std::polar(1.0, k * b) - std::polar(1.0, k * a)) / cplx{0, k};
}

// e^{ikb} - e^{ika}: the boundary difference, = ik * segment_integral
cplx segment_boundary(double k, double a, double b) {
    return std::polar(1.0, k * b) - std::polar(1.0, k * a);
}

bool is_nyquist(int m, int n) { return n % 2 == 0 && m == n / 2; }

}  // namespace

double box_integral(const ScalarField& f, const Box& b) {
    auto spec = forward(f);
    const double norm = 1.0 / static_cast<double>(f.grid.size());
    cplx total{0, 0};
    for_each_mode(f.grid,
                  [&](std::size_t idx, double kx, double ky, double kz, int mx, int my, int mz) {
                      const int n = f.grid.n;
                      if (is_nyquist(mx, n) || is_nyquist(my, n) || is_nyquist(mz, n)) return;
                      cplx w = segment_integral(kx, b.lo.x, b.hi.x)
                             * segment_integral(ky, b.lo.y, b.hi.y)
                             * segment_integral(kz, b.lo.z, b.hi.z);
                      double weight = (mz > 0 && !is_nyquist(mz, n)) ? 2.0 : 1.0;
                      total += weight * spec[idx] * w;
                  });
    return total.real() * norm;
}

double box_flux(const VectorField3& f, const Box& b) {
    const double norm = 1.0 / static_cast<double>(f.grid.size());
    cplx total{0, 0};
    for (int r = 0; r < 3; ++r) {
        auto spec = forward(f[r]);
        for_each_mode(
            f.grid, [&](std::size_t idx, double kx, double ky, double kz, int mx, int my, int mz) {
                const int n = f.grid.n;
                if (is_nyquist(mx, n) || is_nyquist(my, n) || is_nyquist(mz, n)) return;
                double k[3] = {kx, ky, kz};
                double lo[3] = {b.lo.x, b.lo.y, b.lo.z}, hi[3] = {b.hi.x, b.hi.y, b.hi.z};
                cplx w = segment_boundary(k[r], lo[r], hi[r]);
                for (int d = 0; d < 3; ++d)
                    if (d != r) w *= segment_integral(k[d], lo[d], hi[d]);
                double weight = (mz > 0 && !is_nyquist(mz, n)) ? 2.0 : 1.0;
                total += weight * spec[idx] * w;
            });
    }
    return total.real() * norm;
}

double box_lattice_sum(const ScalarField& f, const Box& b) {
    const Grid3& g = f.grid;
    double s = 0;
    for (int i = 0; i < g.n; ++i) {
        double x = i * g.spacing;
        if (x < b.lo.x || x >= b.hi.x) continue;
        for (int j = 0; j < g.n; ++j) {
            double y = j * g.spacing;
            if (y < b.lo.y || y >= b.hi.y) continue;
            for (int k = 0; k < g.n; ++k) {
                double z = k * g.spacing;
                if (z < b.lo.z || z >= b.hi.z) continue;
                s += f.at(i, j, k);
            }
        }
    }
    return s * g.cell_volume();
}

}  // namespace restframe
