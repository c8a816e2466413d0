#pragma once

#include <vector>

#include "sst/harmonics.hpp"

namespace sst {

/// Rotation-group sample grid: 2L-1 uniform nodes per Euler axis, the minimal
/// alias-free count for trigonometric polynomials of order < L. All three
/// axes run over [0, 2pi); the first L vartheta nodes lie in [0, pi] and are
/// the physically distinct ones, the rest are the periodic extension kept so
/// the FFT output maps one-to-one onto the cube.
struct SO3Grid {
    int bandlimit = 0;
    std::vector<double> varphi, vartheta, omega; // each 2L-1 nodes 2*pi*j/(2L-1)

    int n() const { return 2 * bandlimit - 1; }
};

SO3Grid build_so3_grid(int L);

/// F_{g_alpha}(rho) sampled on an SO3Grid, laid out (varphi, vartheta, omega)
/// with omega fastest.
struct SO3Signal {
    SO3Grid grid;
    int alpha = 1;
    std::vector<cplx> values; // size n^3

    cplx& at(int i, int j, int k) {
        int n = grid.n();
        return values[(static_cast<std::size_t>(i) * n + j) * n + k];
    }
    cplx at(int i, int j, int k) const {
        int n = grid.n();
        return values[(static_cast<std::size_t>(i) * n + j) * n + k];
    }
};

/// SO(3) spectral coefficients (F)^l_{m,m'}, |m|,|m'| <= l < L, stored
/// degree-major: degree l starts at (4l^3 - l)/3 and holds a dense
/// (2l+1) x (2l+1) block indexed (m+l)*(2l+1) + (m'+l).
struct WignerCoefficients {
    int bandlimit = 0;
    std::vector<cplx> coeffs;

    explicit WignerCoefficients(int L = 0)
        : bandlimit(L), coeffs(static_cast<std::size_t>(offset(L)), cplx(0.0)) {}

    static long long offset(int ell) { return (4LL * ell * ell * ell - ell) / 3; }

    cplx& at(int ell, int m, int mp) {
        return coeffs[offset(ell) + static_cast<long long>(m + ell) * (2 * ell + 1) + (mp + ell)];
    }
    cplx at(int ell, int m, int mp) const {
        return coeffs[offset(ell) + static_cast<long long>(m + ell) * (2 * ell + 1) + (mp + ell)];
    }
};

/// Separated Fourier orders of the transform: F(rho) =
/// sum C_{m,m',m''} e^{i(m varphi + m'' vartheta + m' omega)}, each order in
/// [-(L-1), L-1]. Internal layout matches the FFT axes (m, m'', m'), m'
/// fastest; at() takes the (m, m', m'') order used in the defining sum.
struct CCube {
    int bandlimit = 0;
    std::vector<cplx> values; // size n^3, [(m+L-1)*n + (m''+L-1)]*n + (m'+L-1)

    explicit CCube(int L = 0)
        : bandlimit(L), values(L > 0 ? static_cast<std::size_t>(2 * L - 1) * (2 * L - 1) * (2 * L - 1) : 0,
                               cplx(0.0)) {}

    int n() const { return 2 * bandlimit - 1; }

    cplx& at(int m, int mp, int mpp) {
        int h = bandlimit - 1, nn = n();
        return values[(static_cast<std::size_t>(m + h) * nn + (mpp + h)) * nn + (mp + h)];
    }
    cplx at(int m, int mp, int mpp) const {
        int h = bandlimit - 1, nn = n();
        return values[(static_cast<std::size_t>(m + h) * nn + (mpp + h)) * nn + (mp + h)];
    }
};

} // namespace sst
