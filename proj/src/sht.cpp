#include "sst/sht.hpp"

#include <cmath>
#include <numbers>

#include "sst/errors.hpp"

namespace sst {

namespace {

std::vector<cplx> twiddle_table(int n) {
    std::vector<cplx> tw(n);
    for (int j = 0; j < n; ++j)
        tw[j] = std::polar(1.0, 2.0 * std::numbers::pi * j / n);
    return tw;
}

void check_grid(const SphereGrid& g, int L) {
    if (L < 1) throw grid_mismatch_error("bandlimit must be positive");
    if (g.n_theta() < L || g.n_phi() < 2 * L - 1)
        throw grid_mismatch_error("grid undersampled for bandlimit");
}

} // namespace

HarmonicCoefficients sht_forward(const SphereSignal& s, int L) {
    check_grid(s.grid, L);
    const int nt = s.grid.n_theta(), np = s.grid.n_phi();
    const double dphi = 2.0 * std::numbers::pi / np;
    const auto tw = twiddle_table(np);

    HarmonicCoefficients c(L);
    // ring DFT: G(i, m) = dphi * sum_k s(i,k) e^{-i m phi_k}
    Eigen::MatrixXcd G(nt, 2 * L - 1);
    for (int i = 0; i < nt; ++i) {
        for (int m = -(L - 1); m <= L - 1; ++m) {
            cplx acc = 0.0;
            for (int k = 0; k < np; ++k) {
                int idx = static_cast<int>((static_cast<long long>(-m) * k % np + np) % np);
                acc += s.values(i, k) * tw[idx];
            }
            G(i, m + L - 1) = acc * dphi;
        }
    }
    for (int i = 0; i < nt; ++i) {
        LegendreTable tab(L, std::cos(s.grid.theta[i]));
        double w = s.grid.weights[i];
        for (int m = -(L - 1); m <= L - 1; ++m) {
            int am = std::abs(m);
            double sign = (m < 0 && am % 2 == 1) ? -1.0 : 1.0;
            cplx g = G(i, m + L - 1);
            for (int ell = am; ell < L; ++ell)
                c.at(ell, m) += sign * w * tab(ell, am) * g;
        }
    }
    return c;
}

SphereSignal sht_inverse(const HarmonicCoefficients& c, const SphereGrid& grid) {
    const int L = c.bandlimit;
    check_grid(grid, L);
    const int nt = grid.n_theta(), np = grid.n_phi();
    const auto tw = twiddle_table(np);

    SphereSignal s(grid);
    for (int i = 0; i < nt; ++i) {
        LegendreTable tab(L, std::cos(grid.theta[i]));
        // H(m) = sum_l (c)_l^m Pbar_l^{|m|} (signed for m < 0)
        std::vector<cplx> H(2 * L - 1, cplx(0.0));
        for (int m = -(L - 1); m <= L - 1; ++m) {
            int am = std::abs(m);
            double sign = (m < 0 && am % 2 == 1) ? -1.0 : 1.0;
            cplx acc = 0.0;
            for (int ell = am; ell < L; ++ell) acc += c.at(ell, m) * tab(ell, am);
            H[m + L - 1] = sign * acc;
        }
        for (int k = 0; k < np; ++k) {
            cplx acc = 0.0;
            for (int m = -(L - 1); m <= L - 1; ++m) {
                int idx = static_cast<int>((static_cast<long long>(m) * k % np + np) % np);
                acc += H[m + L - 1] * tw[idx];
            }
            s.values(i, k) = acc;
        }
    }
    return s;
}

cplx inner_product(const SphereSignal& s, const SphereSignal& t) {
    if (s.grid.n_theta() != t.grid.n_theta() || s.grid.n_phi() != t.grid.n_phi())
        throw grid_mismatch_error("inner_product: signals on different grids");
    const double dphi = 2.0 * std::numbers::pi / s.grid.n_phi();
    cplx acc = 0.0;
    for (int i = 0; i < s.grid.n_theta(); ++i) {
        cplx row = 0.0;
        for (int k = 0; k < s.grid.n_phi(); ++k)
            row += s.values(i, k) * std::conj(t.values(i, k));
        acc += s.grid.weights[i] * row;
    }
    return acc * dphi;
}

cplx inner_product(const HarmonicCoefficients& f, const HarmonicCoefficients& h) {
    if (f.bandlimit != h.bandlimit)
        throw grid_mismatch_error("inner_product: coefficient bandlimits differ");
    return (h.coeffs.conjugate().array() * f.coeffs.array()).sum();
}

} // namespace sst
