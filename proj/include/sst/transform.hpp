#pragma once

#include "sst/slepian.hpp"
#include "sst/so3.hpp"

namespace sst {

/// F_{g_alpha}(rho) = <f, D_rho g_alpha> by the direct triple sum
/// sum_{l,m,m'} (f)_l^m conj((g_alpha)_l^{m'}) conj(D^l_{m,m'}(rho)).
/// O(L^3) per point; the oracle for the fast path.
cplx sst_point(const HarmonicCoefficients& f, const SlepianBasis& basis, int alpha,
               const EulerAngles& rho);

/// Fourier orders of the transform,
/// C_{m,m',m''} = i^{m'-m} sum_l (f)_l^m conj((g_alpha)_l^{m'})
///                Delta^l_{m'',m} Delta^l_{m'',m'},
/// accumulated from on-the-fly half-pi Wigner rows (no stored table), the
/// m'' < 0 half filled by the mirror C_{m,m',-m''} = (-1)^{m+m'} C_{m,m',m''}.
/// O(L^4) work, O(L^3) memory.
CCube compute_C(const HarmonicCoefficients& f, const SlepianBasis& basis, int alpha);

/// Evaluates a C cube on the 2L-1 cubed grid by a single 3D inverse DFT,
/// negative orders wrapped to the high indices of each axis. O(L^3 log L).
SO3Signal so3_synthesis(const CCube& C, int alpha = 1);

/// Samples F on the 2L-1 cubed grid: compute_C then so3_synthesis. O(L^4)
/// total, dominated by compute_C.
SO3Signal sst_fast(const HarmonicCoefficients& f, const SlepianBasis& basis, int alpha);

/// Recovers the Wigner coefficients of a bandlimited rotation-group signal
/// from its 2L-1 cubed samples: the forward DFT restores the Fourier-order
/// cube exactly (no order aliases on this grid), and each (m, m') fiber is
/// resolved over degrees against the half-pi Delta-product columns, which are
/// linearly independent across l. Left inverse of so3_synthesis; in
/// particular wigner_analysis(sst_fast(f, b, a)) recovers
/// sst_wigner_coefficients(f, b, a) to rounding.
WignerCoefficients wigner_analysis(const SO3Signal& F);

/// SO(3) spectral form of the transform: (F)^l_{m,m'} = (f)_l^m
/// conj((g_alpha)_l^{m'}), a rank-1 block per degree.
WignerCoefficients sst_wigner_coefficients(const HarmonicCoefficients& f,
                                           const SlepianBasis& basis, int alpha);

/// Recovers f from the spectral form: per degree picks m'* maximizing
/// |(g_alpha)_l^{m'}| and divides the m'* column out. Degrees whose whole
/// g-row magnitude is <= epsilon make the scale non-invertible
/// (non_invertible_error lists them). epsilon < 0 selects the scale-free
/// default 1e-12 x max |(g_alpha)_l^{m'}|.
HarmonicCoefficients inverse_sst(const WignerCoefficients& Fw, const SlepianBasis& basis,
                                 int alpha, double epsilon = -1.0);

/// Energy captured by the well-concentrated scales, computed twice:
/// numerator sum_{alpha<=n_well} integral_SO(3) |F_{g_alpha}|^2 evaluated in
/// the Fourier domain from the C cubes (phi and omega integrals collapse to
/// 2*pi deltas, the vartheta integral of e^{i k vartheta} sin vartheta is
/// closed-form), denominator the same quantity through the Wigner-Parseval
/// identity sum (8pi^2/(2l+1)) |(F)^l_{m,m'}|^2. The two routes agree
/// identically, so the ratio is 1 for every nonzero f; deviations expose
/// errors in either pipeline. Zero f is invalid_argument.
double tight_frame_ratio(const HarmonicCoefficients& f, const SlepianBasis& basis);

/// sum_{alpha<=n} sum_l (8pi^2/(2l+1)) E_l(g_alpha): the constant that would
/// make the first n scales a tight frame if their degree energies E_l summed
/// proportionally to 2l+1. Exactly 8pi^2 per degree for the complete L^2
/// basis (unitarity); a diagnostic of frame quality for truncated families.
double frame_constant(const SlepianBasis& basis, int n);

/// Zonal specialization: with (g_alpha)_l^{m'} = 0 for m' != 0 the omega
/// rotation drops out and F lives on the sphere,
/// (F)_l^m = sqrt(4pi/(2l+1)) (f)_l^m conj((g_alpha)_l^0).
HarmonicCoefficients zonal_sst_coefficients(const HarmonicCoefficients& f,
                                            const SlepianBasis& zb, int alpha);

/// zonal_sst_coefficients synthesized on a sphere grid.
SphereSignal zonal_sst(const HarmonicCoefficients& f, const SlepianBasis& zb, int alpha,
                       const SphereGrid& grid);

/// Inverse of the zonal map: (f)_l^m = sqrt((2l+1)/4pi) (F)_l^m /
/// conj((g_alpha)_l^0). epsilon as in inverse_sst.
HarmonicCoefficients zonal_inverse(const HarmonicCoefficients& Fs, const SlepianBasis& zb,
                                   int alpha, double epsilon = -1.0);

} // namespace sst
