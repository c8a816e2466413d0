#pragma once

#include <Eigen/Dense>

#include "sst/region.hpp"
#include "sst/sht.hpp"

namespace sst {

/// Band-limited functions maximizing their energy fraction inside a region,
/// i.e. eigenvectors of the concentration matrix K ordered by descending
/// eigenvalue. Column alpha-1 of `eigenvectors` holds (g_alpha)_l^m in flat
/// index order; `shannon` counts the well-concentrated functions ((A_R/4pi)L^2
/// = sum of all eigenvalues for a full basis, L Theta_c / pi for a zonal one)
/// and n_well rounds it half-up. A basis may store only its leading columns.
struct SlepianBasis {
    int bandlimit = 0;
    Region region;
    bool zonal = false;
    double shannon = 0.0;
    int n_well = 0;
    Eigen::VectorXd eigenvalues;   // descending, length n_stored
    Eigen::MatrixXcd eigenvectors; // L^2 x n_stored, orthonormal columns

    int n_stored() const { return static_cast<int>(eigenvalues.size()); }

    /// Spectrum of g_alpha (1-based scale, out_of_range otherwise).
    HarmonicCoefficients column(int alpha) const;
};

/// K_{lm,pq} = integral over R of conj(Y_l^m) Y_p^q. Hermitian positive
/// semi-definite; block-diagonal in m for caps. Cap blocks use Gauss-Legendre
/// on [cos Theta_c, 1] with L nodes, which is exact; the ellipse uses exact
/// per-ring phi integrals, Gauss-Legendre across rings, and a spectral
/// rotation K = M K_0 M^H applied per degree pair.
Eigen::MatrixXcd concentration_matrix(const Region& R, int L);

/// trace(K) without materializing K (= (A_R/4pi)L^2 up to quadrature).
double concentration_trace(const Region& R, int L);

/// Eigendecomposition of a precomputed K: eigenvalues clamped to [0,1] when
/// within 1e-12 outside, sorted descending; each column's first component
/// above 1e-12 of its largest is made real positive. shannon = sum of
/// eigenvalues, n_well = round-half-up.
SlepianBasis solve_slepian(const Eigen::MatrixXcd& K, const Region& R, int L);

/// Basis for the region without forming the full K where structure allows:
/// caps solve one real block per order m; the ellipse solves the unrotated
/// (real) problem and rotates the eigenvectors. Agrees with
/// solve_slepian(concentration_matrix(R, L), R, L) up to roundoff.
/// n_store < 0 keeps all L^2 columns; otherwise only the leading n_store are
/// retained (shannon and n_well still come from the full spectrum), which
/// caps memory at O(L^2 n_store) instead of O(L^4).
SlepianBasis build_basis(const Region& R, int L, int n_store = -1);

/// Axisymmetric basis of the polar cap: only the m = 0 block is solved, the
/// L columns live entirely on the m = 0 entries, and shannon = L Theta_c / pi.
SlepianBasis zonal_basis(double Theta_c, int L);

/// g_alpha sampled on a grid (1-based scale).
SphereSignal slepian_eval(const SlepianBasis& basis, int alpha, const SphereGrid& grid);

/// Slepian coefficients (h)_alpha = g_alpha^H h of a spectral signal.
Eigen::VectorXcd slepian_analysis(const HarmonicCoefficients& c, const SlepianBasis& basis);

/// h = sum_alpha coeff_alpha g_alpha, the inverse of slepian_analysis when all
/// L^2 columns are stored.
HarmonicCoefficients slepian_synthesis(const Eigen::VectorXcd& coeffs, const SlepianBasis& basis);

} // namespace sst
