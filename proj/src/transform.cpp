#include "sst/transform.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <fftw3.h>

#include "sst/errors.hpp"
#include "sst/wigner.hpp"

namespace sst {

namespace {

constexpr double pi = std::numbers::pi;

void check_inputs(int L_f, const SlepianBasis& basis, int alpha) {
    if (L_f != basis.bandlimit)
        throw grid_mismatch_error("sst: signal and basis bandlimits differ");
    if (alpha < 1 || alpha > basis.n_stored())
        throw std::out_of_range("sst: scale alpha outside stored columns");
}

/// integral_0^pi e^{i k vartheta} sin(vartheta) dvartheta.
cplx theta_mode_integral(int k) {
    if (k == 1) return {0.0, pi / 2.0};
    if (k == -1) return {0.0, -pi / 2.0};
    if (k % 2 != 0) return {0.0, 0.0};
    return {2.0 / (1.0 - static_cast<double>(k) * k), 0.0};
}

/// integral_SO(3) |F|^2 from the Fourier orders: the varphi and omega
/// integrals are 2*pi deltas in (m, m'), the vartheta one couples m'' pairs
/// through theta_mode_integral.
double so3_energy(const CCube& cube) {
    const int h = cube.bandlimit - 1, n = cube.n();
    std::vector<cplx> kernel(2 * n - 1);
    for (int k = -(n - 1); k <= n - 1; ++k) kernel[k + n - 1] = theta_mode_integral(k);

    double acc = 0.0;
    const cplx* data = cube.values.data();
    for (int m = -h; m <= h; ++m) {
        for (int mp = -h; mp <= h; ++mp) {
            // m'' = 0 entry of the (m, m') fiber; the m'' stride is n
            const cplx* v = data + (static_cast<std::size_t>(m + h) * n + h) * n + (mp + h);
            for (int k = -h; k <= h; ++k) {
                cplx ck = v[static_cast<std::ptrdiff_t>(k) * n];
                if (ck == cplx(0.0)) continue;
                for (int kt = -h; kt <= h; ++kt) {
                    cplx p = ck * std::conj(v[static_cast<std::ptrdiff_t>(kt) * n]);
                    acc += (p * kernel[k - kt + n - 1]).real();
                }
            }
        }
    }
    return 4.0 * pi * pi * acc;
}

} // namespace

cplx sst_point(const HarmonicCoefficients& f, const SlepianBasis& basis, int alpha,
               const EulerAngles& rho) {
    check_inputs(f.bandlimit, basis, alpha);
    const int L = f.bandlimit, h = L - 1;
    const auto& g = basis.eigenvectors;

    std::vector<cplx> ephi(2 * L - 1), eomg(2 * L - 1);
    for (int m = -h; m <= h; ++m) {
        ephi[h + m] = std::polar(1.0, m * rho.varphi);
        eomg[h + m] = std::polar(1.0, m * rho.omega);
    }

    // conj(D^l_{m,m'}) = e^{i m varphi} d^l_{m,m'}(vartheta) e^{i m' omega}
    RisboPlane d(rho.vartheta);
    cplx acc = 0.0;
    for (int ell = 0; ell < L; ++ell) {
        if (ell > 0) d.advance();
        for (int m = -ell; m <= ell; ++m) {
            cplx fm = f.at(ell, m) * ephi[h + m];
            cplx inner = 0.0;
            for (int mp = -ell; mp <= ell; ++mp)
                inner += std::conj(g(flat_index(ell, mp), alpha - 1)) * d.value(m, mp) *
                         eomg[h + mp];
            acc += fm * inner;
        }
    }
    return acc;
}

CCube compute_C(const HarmonicCoefficients& f, const SlepianBasis& basis, int alpha) {
    check_inputs(f.bandlimit, basis, alpha);
    const int L = f.bandlimit, h = L - 1, n = 2 * L - 1;
    const auto& g = basis.eigenvectors;
    CCube cube(L);

    // A_{m,m',m''} = sum_l f_l^m conj(g_l^{m'}) Delta_{m'',m} Delta_{m'',m'}
    // for m'' >= 0, as rank-1 updates over (m, m') per (l, m'').
    DeltaSlice slice;
    std::vector<double> row(n);
    std::vector<cplx> a(n), b(n);
    for (int ell = 0; ell < L; ++ell) {
        if (ell > 0) slice.advance();
        const int mp_hi = basis.zonal ? 0 : ell;
        for (int mpp = 0; mpp <= ell; ++mpp) {
            double sgn = ((ell + mpp) % 2 == 0) ? 1.0 : -1.0; // Delta_{m'',-m} sign
            for (int m = 0; m <= ell; ++m) {
                double q = slice.quadrant(mpp, m);
                row[h + m] = q;
                row[h - m] = sgn * q;
            }
            for (int m = -ell; m <= ell; ++m) a[h + m] = f.at(ell, m) * row[h + m];
            for (int mp = -ell; mp <= mp_hi; ++mp)
                b[h + mp] = std::conj(g(flat_index(ell, mp), alpha - 1)) * row[h + mp];
            for (int m = -ell; m <= ell; ++m) {
                cplx am = a[h + m];
                if (am == cplx(0.0)) continue;
                cplx* dst = &cube.at(m, 0, mpp);
                for (int mp = -ell; mp <= mp_hi; ++mp) dst[mp] += am * b[h + mp];
            }
        }
    }

    // i^{m'-m} phases on the computed half, then the m'' < 0 mirror
    // C_{m,m',-m''} = (-1)^{m+m'} C_{m,m',m''}.
    for (int m = -h; m <= h; ++m) {
        for (int mpp = 0; mpp <= h; ++mpp) {
            cplx* base = &cube.at(m, 0, mpp);
            for (int mp = -h; mp <= h; ++mp) base[mp] *= i_pow(mp - m);
        }
        for (int mpp = 1; mpp <= h; ++mpp) {
            const cplx* src = &cube.at(m, 0, mpp);
            cplx* dst = &cube.at(m, 0, -mpp);
            for (int mp = -h; mp <= h; ++mp)
                dst[mp] = ((m + mp) % 2 == 0) ? src[mp] : -src[mp];
        }
    }
    return cube;
}

SO3Signal so3_synthesis(const CCube& cube, int alpha) {
    const int L = cube.bandlimit;
    if (L < 1) throw std::invalid_argument("so3_synthesis: empty cube");
    if (alpha < 1) throw std::out_of_range("so3_synthesis: scale alpha must be positive");
    const int h = L - 1, n = 2 * L - 1;

    SO3Signal F;
    F.grid = build_so3_grid(L);
    F.alpha = alpha;
    F.values.assign(static_cast<std::size_t>(n) * n * n, cplx(0.0));

    // Axes (varphi, vartheta, omega) carry orders (m, m'', m'); negative
    // orders wrap to the high indices: k -> k + n.
    const cplx* data = cube.values.data();
    for (int m = -h; m <= h; ++m) {
        const int im = m < 0 ? m + n : m;
        for (int mpp = -h; mpp <= h; ++mpp) {
            const int ipp = mpp < 0 ? mpp + n : mpp;
            const cplx* src =
                data + (static_cast<std::size_t>(m + h) * n + (mpp + h)) * n + h;
            cplx* dst = &F.values[(static_cast<std::size_t>(im) * n + ipp) * n];
            for (int mp = -h; mp <= h; ++mp) dst[mp < 0 ? mp + n : mp] = src[mp];
        }
    }

    fftw_plan plan =
        fftw_plan_dft_3d(n, n, n, reinterpret_cast<fftw_complex*>(F.values.data()),
                         reinterpret_cast<fftw_complex*>(F.values.data()), FFTW_BACKWARD,
                         FFTW_ESTIMATE);
    if (plan == nullptr) throw numerical_error("so3_synthesis: FFT planning failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    return F;
}

SO3Signal sst_fast(const HarmonicCoefficients& f, const SlepianBasis& basis, int alpha) {
    return so3_synthesis(compute_C(f, basis, alpha), alpha);
}

WignerCoefficients wigner_analysis(const SO3Signal& F) {
    const int L = F.grid.bandlimit;
    if (L < 1) throw std::invalid_argument("wigner_analysis: empty signal");
    const int h = L - 1, n = 2 * L - 1;
    const std::size_t total = static_cast<std::size_t>(n) * n * n;
    if (F.values.size() != total)
        throw grid_mismatch_error("wigner_analysis: cube size does not match its grid");

    std::vector<cplx> work(F.values);
    fftw_plan plan = fftw_plan_dft_3d(n, n, n, reinterpret_cast<fftw_complex*>(work.data()),
                                      reinterpret_cast<fftw_complex*>(work.data()), FFTW_FORWARD,
                                      FFTW_ESTIMATE);
    if (plan == nullptr) throw numerical_error("wigner_analysis: FFT planning failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    const double inv = 1.0 / static_cast<double>(total);

    CCube cube(L);
    for (int m = -h; m <= h; ++m) {
        const int im = m < 0 ? m + n : m;
        for (int mpp = -h; mpp <= h; ++mpp) {
            const int ipp = mpp < 0 ? mpp + n : mpp;
            const cplx* src = &work[(static_cast<std::size_t>(im) * n + ipp) * n];
            cplx* dst = &cube.at(m, 0, mpp);
            for (int mp = -h; mp <= h; ++mp) dst[mp] = src[mp < 0 ? mp + n : mp] * inv;
        }
    }

    // C_{m,m',m''} i^{m-m'} = sum_l (F)^l_{m,m'} Delta_{m'',m} Delta_{m'',m'};
    // the m'' < 0 rows repeat the m'' >= 0 ones up to (-1)^{m+m'}, so the
    // non-negative half carries all the information.
    DeltaTable table(L);
    WignerCoefficients Fw(L);
    Eigen::MatrixXd M(h + 1, L);
    Eigen::VectorXd br(h + 1), bi(h + 1);
    for (int m = -h; m <= h; ++m) {
        for (int mp = -h; mp <= h; ++mp) {
            const int lmin = std::max(std::abs(m), std::abs(mp));
            const int cols = L - lmin;
            const cplx phase = i_pow(m - mp);
            for (int mpp = 0; mpp <= h; ++mpp) {
                for (int ell = lmin; ell < L; ++ell)
                    M(mpp, ell - lmin) =
                        mpp <= ell ? table.value(ell, mpp, m) * table.value(ell, mpp, mp) : 0.0;
                const cplx rhs = cube.at(m, mp, mpp) * phase;
                br(mpp) = rhs.real();
                bi(mpp) = rhs.imag();
            }
            Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M.leftCols(cols));
            Eigen::VectorXd xr = qr.solve(br), xi = qr.solve(bi);
            for (int ell = lmin; ell < L; ++ell) Fw.at(ell, m, mp) = {xr(ell - lmin), xi(ell - lmin)};
        }
    }
    return Fw;
}

WignerCoefficients sst_wigner_coefficients(const HarmonicCoefficients& f,
                                           const SlepianBasis& basis, int alpha) {
    check_inputs(f.bandlimit, basis, alpha);
    const int L = f.bandlimit;
    const auto& g = basis.eigenvectors;
    WignerCoefficients Fw(L);
    for (int ell = 0; ell < L; ++ell)
        for (int m = -ell; m <= ell; ++m) {
            cplx fm = f.at(ell, m);
            for (int mp = -ell; mp <= ell; ++mp)
                Fw.at(ell, m, mp) = fm * std::conj(g(flat_index(ell, mp), alpha - 1));
        }
    return Fw;
}

HarmonicCoefficients inverse_sst(const WignerCoefficients& Fw, const SlepianBasis& basis,
                                 int alpha, double epsilon) {
    check_inputs(Fw.bandlimit, basis, alpha);
    const int L = Fw.bandlimit;
    const auto g = basis.eigenvectors.col(alpha - 1);
    const double thresh = epsilon < 0.0 ? 1e-12 * g.cwiseAbs().maxCoeff() : epsilon;

    HarmonicCoefficients f(L);
    std::vector<int> bad;
    for (int ell = 0; ell < L; ++ell) {
        int mp_star = -ell;
        double best = -1.0;
        for (int mp = -ell; mp <= ell; ++mp) {
            double mag = std::abs(g(flat_index(ell, mp)));
            if (mag > best) {
                best = mag;
                mp_star = mp;
            }
        }
        if (best <= thresh) {
            bad.push_back(ell);
            continue;
        }
        cplx div = std::conj(g(flat_index(ell, mp_star)));
        for (int m = -ell; m <= ell; ++m) f.at(ell, m) = Fw.at(ell, m, mp_star) / div;
    }
    if (!bad.empty()) {
        std::ostringstream msg;
        msg << "inverse_sst: window column " << alpha << " has no order above threshold "
            << thresh << " at degrees";
        for (int ell : bad) msg << ' ' << ell;
        throw non_invertible_error(msg.str(), std::move(bad));
    }
    return f;
}

double tight_frame_ratio(const HarmonicCoefficients& f, const SlepianBasis& basis) {
    if (f.bandlimit != basis.bandlimit)
        throw grid_mismatch_error("tight_frame_ratio: signal and basis bandlimits differ");
    if (f.coeffs.squaredNorm() == 0.0)
        throw std::invalid_argument("tight_frame_ratio: zero signal");
    const int L = f.bandlimit;
    const int n_well = std::min(basis.n_well, basis.n_stored());

    double num = 0.0, den = 0.0;
    for (int alpha = 1; alpha <= n_well; ++alpha) {
        num += so3_energy(compute_C(f, basis, alpha));
        WignerCoefficients Fw = sst_wigner_coefficients(f, basis, alpha);
        for (int ell = 0; ell < L; ++ell) {
            double w = 8.0 * pi * pi / (2 * ell + 1);
            double e = 0.0;
            for (int m = -ell; m <= ell; ++m)
                for (int mp = -ell; mp <= ell; ++mp) e += std::norm(Fw.at(ell, m, mp));
            den += w * e;
        }
    }
    return num / den;
}

double frame_constant(const SlepianBasis& basis, int n) {
    if (n < 1 || n > basis.n_stored())
        throw std::out_of_range("frame_constant: column count outside stored range");
    const int L = basis.bandlimit;
    double acc = 0.0;
    for (int alpha = 1; alpha <= n; ++alpha)
        for (int ell = 0; ell < L; ++ell) {
            double e = 0.0;
            for (int m = -ell; m <= ell; ++m)
                e += std::norm(basis.eigenvectors(flat_index(ell, m), alpha - 1));
            acc += 8.0 * pi * pi / (2 * ell + 1) * e;
        }
    return acc;
}

HarmonicCoefficients zonal_sst_coefficients(const HarmonicCoefficients& f,
                                            const SlepianBasis& zb, int alpha) {
    if (!zb.zonal) throw std::invalid_argument("zonal_sst: basis is not zonal");
    check_inputs(f.bandlimit, zb, alpha);
    const int L = f.bandlimit;
    HarmonicCoefficients F(L);
    for (int ell = 0; ell < L; ++ell) {
        cplx factor = std::sqrt(4.0 * pi / (2 * ell + 1)) *
                      std::conj(zb.eigenvectors(flat_index(ell, 0), alpha - 1));
        for (int m = -ell; m <= ell; ++m) F.at(ell, m) = factor * f.at(ell, m);
    }
    return F;
}

SphereSignal zonal_sst(const HarmonicCoefficients& f, const SlepianBasis& zb, int alpha,
                       const SphereGrid& grid) {
    return sht_inverse(zonal_sst_coefficients(f, zb, alpha), grid);
}

HarmonicCoefficients zonal_inverse(const HarmonicCoefficients& Fs, const SlepianBasis& zb,
                                   int alpha, double epsilon) {
    if (!zb.zonal) throw std::invalid_argument("zonal_inverse: basis is not zonal");
    check_inputs(Fs.bandlimit, zb, alpha);
    const int L = Fs.bandlimit;
    const auto g = zb.eigenvectors.col(alpha - 1);
    const double thresh = epsilon < 0.0 ? 1e-12 * g.cwiseAbs().maxCoeff() : epsilon;

    HarmonicCoefficients f(L);
    std::vector<int> bad;
    for (int ell = 0; ell < L; ++ell) {
        cplx gz = g(flat_index(ell, 0));
        if (std::abs(gz) <= thresh) {
            bad.push_back(ell);
            continue;
        }
        cplx scale = std::sqrt((2 * ell + 1) / (4.0 * pi)) / std::conj(gz);
        for (int m = -ell; m <= ell; ++m) f.at(ell, m) = scale * Fs.at(ell, m);
    }
    if (!bad.empty()) {
        std::ostringstream msg;
        msg << "zonal_inverse: window column " << alpha << " vanishes at degrees";
        for (int ell : bad) msg << ' ' << ell;
        throw non_invertible_error(msg.str(), std::move(bad));
    }
    return f;
}

} // namespace sst
