#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace sst {

using cplx = std::complex<double>;

/// Flat position of (ell, m) in the degree-major coefficient layout
/// (0,0), (1,-1), (1,0), (1,1), ...: ell^2 + ell + m.
constexpr int flat_index(int ell, int m) { return ell * ell + ell + m; }

/// Inverse of flat_index.
void flat_to_lm(int idx, int& ell, int& m);

/// Associated Legendre P_l^m(x) with the Condon-Shortley phase, 0 <= m <= l.
/// Unnormalized; factorial growth limits usable degrees to roughly l < 150,
/// band-limited evaluation paths use the normalized recursion instead.
double associated_legendre(int ell, int m, double x);

/// Table of fully normalized associated Legendre functions at one x:
/// Pbar_l^m = sqrt((2l+1)/(4pi) (l-m)!/(l+m)!) P_l^m, so that
/// Y_l^m(theta,phi) = Pbar_l^m(cos theta) e^{i m phi}.
/// Stored for 0 <= m <= l < L at pbar[l*(l+1)/2 + m].
class LegendreTable {
  public:
    LegendreTable(int L, double x);
    double operator()(int ell, int m) const { return pbar_[ell * (ell + 1) / 2 + m]; }
    int bandlimit() const { return L_; }

  private:
    int L_;
    std::vector<double> pbar_;
};

/// Y_l^m(theta, phi) for any |m| <= l; m < 0 via Y_l^{-m} = (-1)^m conj(Y_l^m).
cplx ylm_eval(int ell, int m, double theta, double phi);

/// Spectral-domain signal: coefficients in flat_index order, length L^2.
struct HarmonicCoefficients {
    int bandlimit = 0;
    Eigen::VectorXcd coeffs;

    HarmonicCoefficients() = default;
    explicit HarmonicCoefficients(int L) : bandlimit(L), coeffs(Eigen::VectorXcd::Zero(L * L)) {}

    cplx& at(int ell, int m) { return coeffs(flat_index(ell, m)); }
    cplx at(int ell, int m) const { return coeffs(flat_index(ell, m)); }
    double norm_sq() const { return coeffs.squaredNorm(); }
};

} // namespace sst
