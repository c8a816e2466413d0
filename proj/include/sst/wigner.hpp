#pragma once

#include <complex>
#include <vector>

#include "sst/geometry.hpp"
#include "sst/harmonics.hpp"

namespace sst {

/// i^k for any integer k.
inline cplx i_pow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

/// One degree of the half-pi Wigner table Delta^l_{m'',m} = d^l_{m'',m}(pi/2),
/// held as the non-negative quadrant (the other quadrants follow from the
/// sign symmetries applied in value()). advance() steps l -> l+1 using the
/// closed-form ratio for the m''=l row plus the fixed-l three-term recursion
/// descending in m'', so a full sweep to L costs O(L^3) with O(L^2) memory.
class DeltaSlice {
  public:
    DeltaSlice(); // starts at l = 0
    void advance();
    int degree() const { return ell_; }

    /// Quadrant lookup, requires 0 <= m'', m <= l.
    double quadrant(int mpp, int m) const { return quad_[mpp * (ell_ + 1) + m]; }

    /// Any -l <= m'', m <= l via Delta_{-m'',m} = (-1)^{l+m} Delta_{m'',m} and
    /// Delta_{m'',-m} = (-1)^{l+m''} Delta_{m'',m}.
    double value(int mpp, int m) const;

  private:
    int ell_;
    std::vector<double> quad_;
    std::vector<double> top_; // scratch: previous top row
};

/// All degrees l < L of the half-pi table.
class DeltaTable {
  public:
    explicit DeltaTable(int L);
    int bandlimit() const { return L_; }
    double value(int ell, int mpp, int m) const;
    double quadrant(int ell, int mpp, int m) const {
        return data_[offset_[ell] + mpp * (ell + 1) + m];
    }

    /// Triangular quadrant storage, degree-major; used by the cache file format.
    const std::vector<double>& raw() const { return data_; }
    static DeltaTable from_raw(int L, std::vector<double> data);

  private:
    DeltaTable() = default;
    int L_ = 0;
    std::vector<std::size_t> offset_;
    std::vector<double> data_;
};

DeltaTable build_delta_table(int L);

/// Full Wigner-d plane d^l_{m,m'}(beta) advanced one degree at a time by
/// Risbo's two half-spin passes. Independent of the half-pi recursion; serves
/// as its cross-check and as the direct evaluation path for rotations.
class RisboPlane {
  public:
    explicit RisboPlane(double beta); // starts at l = 0
    void advance();
    int degree() const { return ell_; }
    double value(int m, int mp) const {
        return buf_[(ell_ - m) * (2 * ell_ + 1) + (ell_ - mp)];
    }

  private:
    int ell_;
    double cosb2_, sinb2_;
    std::vector<double> buf_, dd_;
};

/// d^l_{m,m'}(theta) from the half-pi table:
/// i^{m-m'} sum_{m''} Delta_{m'',m} Delta_{m'',m'} e^{-i m'' theta}.
/// The imaginary residual of the sum must stay below 1e-10 (numerical_error
/// otherwise); the real part is returned.
double wigner_d(int ell, int m, int mp, double theta, const DeltaTable& table);

/// D^l_{m,m'}(rho) = e^{-i m varphi} d^l_{m,m'}(vartheta) e^{-i m' omega}.
cplx wigner_D(int ell, int m, int mp, const EulerAngles& rho, const DeltaTable& table);

/// Coefficients of the rotated signal (D_rho f)(x) = f(R^{-1} x):
/// (D_rho f)_l^m = sum_{m'} D^l_{m,m'}(rho) (f)_l^{m'}.
HarmonicCoefficients rotate_coefficients(const HarmonicCoefficients& c, const EulerAngles& rho);

} // namespace sst
