#pragma once

// Internal FFT plumbing shared by the spectral operators and the field
// evolvers.  Not installed; the public surface is restframe/spectral.hpp.

#include <complex>
#include <vector>

#include "restframe/grid.hpp"

namespace restframe::detail {

using cplx = std::complex<double>;

std::size_t spectrum_size(int n);  // n * n * (n/2 + 1), r2c layout

// Unnormalized r2c transform / normalized c2r inverse.
std::vector<cplx> fft_forward(const ScalarField& f);
ScalarField fft_backward(const Grid3& g, const std::vector<cplx>& spec);

// Angular wavenumber of mode index m; Nyquist plane maps to zero.
double wavenumber(int m, int n, double L);

template <typename Fn>
void for_each_mode(const Grid3& g, Fn&& fn) {
    const int n = g.n, nzh = n / 2 + 1;
    const double L = g.length();
    std::size_t idx = 0;
    for (int mx = 0; mx < n; ++mx) {
        double kx = wavenumber(mx, n, L);
        for (int my = 0; my < n; ++my) {
            double ky = wavenumber(my, n, L);
            for (int mz = 0; mz < nzh; ++mz, ++idx) {
                double kz = wavenumber(mz, n, L);
                fn(idx, kx, ky, kz, mx, my, mz);
            }
        }
    }
}

}  // namespace restframe::detail
