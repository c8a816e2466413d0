#include "sst/wigner.hpp"

#include <cmath>
#include <numbers>

#include "sst/errors.hpp"

namespace sst {

// ---------------------------------------------------------------------------
// half-pi table

DeltaSlice::DeltaSlice() : ell_(0), quad_{1.0} {}

void DeltaSlice::advance() {
    const int el = ell_ + 1;
    // save previous top row Delta^{el-1}_{el-1, m}
    top_.assign(quad_.begin() + ell_ * (ell_ + 1), quad_.end());
    quad_.assign(static_cast<std::size_t>(el + 1) * (el + 1), 0.0);
    double* top = quad_.data() + el * (el + 1);
    // new top row from the previous one
    top[0] = -std::sqrt((2.0 * el - 1.0) / (2.0 * el)) * top_[0];
    for (int m = 1; m <= el; ++m)
        top[m] = std::sqrt(el * (2.0 * el - 1.0) / (2.0 * (el + m) * (el + m - 1.0))) * top_[m - 1];
    // descend in m'' at fixed degree
    for (int mpp = el - 1; mpp >= 0; --mpp) {
        double norm = std::sqrt(static_cast<double>(el - mpp) * (el + mpp + 1.0));
        double c2 = (mpp + 2 <= el)
                        ? std::sqrt((el - mpp - 1.0) * (el + mpp + 2.0)) / norm
                        : 0.0;
        double* row = quad_.data() + mpp * (el + 1);
        const double* r1 = quad_.data() + (mpp + 1) * (el + 1);
        const double* r2 = quad_.data() + (mpp + 2) * (el + 1);
        for (int m = 0; m <= el; ++m) {
            double v = (2.0 * m / norm) * r1[m];
            if (mpp + 2 <= el) v -= c2 * r2[m];
            row[m] = v;
        }
    }
    ell_ = el;
}

double DeltaSlice::value(int mpp, int m) const {
    double sign = 1.0;
    if (mpp < 0) {
        if ((ell_ + m) & 1) sign = -sign;
        mpp = -mpp;
    }
    if (m < 0) {
        if ((ell_ + mpp) & 1) sign = -sign;
        m = -m;
    }
    return sign * quadrant(mpp, m);
}

DeltaTable::DeltaTable(int L) : L_(L) {
    if (L < 1) throw std::invalid_argument("DeltaTable: bandlimit must be positive");
    offset_.resize(L);
    std::size_t total = 0;
    for (int ell = 0; ell < L; ++ell) {
        offset_[ell] = total;
        total += static_cast<std::size_t>(ell + 1) * (ell + 1);
    }
    data_.resize(total);
    DeltaSlice slice;
    for (int ell = 0; ell < L; ++ell) {
        if (ell > 0) slice.advance();
        for (int mpp = 0; mpp <= ell; ++mpp)
            for (int m = 0; m <= ell; ++m)
                data_[offset_[ell] + mpp * (ell + 1) + m] = slice.quadrant(mpp, m);
    }
}

double DeltaTable::value(int ell, int mpp, int m) const {
    double sign = 1.0;
    if (mpp < 0) {
        if ((ell + m) & 1) sign = -sign;
        mpp = -mpp;
    }
    if (m < 0) {
        if ((ell + mpp) & 1) sign = -sign;
        m = -m;
    }
    return sign * quadrant(ell, mpp, m);
}

DeltaTable DeltaTable::from_raw(int L, std::vector<double> data) {
    DeltaTable t;
    t.L_ = L;
    t.offset_.resize(L);
    std::size_t total = 0;
    for (int ell = 0; ell < L; ++ell) {
        t.offset_[ell] = total;
        total += static_cast<std::size_t>(ell + 1) * (ell + 1);
    }
    if (data.size() != total) throw io_error("delta table payload has wrong length");
    t.data_ = std::move(data);
    return t;
}

DeltaTable build_delta_table(int L) { return DeltaTable(L); }

// ---------------------------------------------------------------------------
// Risbo planes

RisboPlane::RisboPlane(double beta)
    : ell_(0), cosb2_(std::cos(beta / 2)), sinb2_(std::sin(beta / 2)), buf_{1.0} {}

void RisboPlane::advance() {
    const int el = ell_ + 1;
    // first half-spin pass: degree el-1 plane (j x j) -> dd ((j+1) x (j+1))
    int j = 2 * el - 1;
    dd_.assign(static_cast<std::size_t>(j + 1) * (j + 1), 0.0);
    for (int k = 0; k < j; ++k) {
        for (int i = 0; i < j; ++i) {
            double dlj = buf_[static_cast<std::size_t>(k) * j + i] / j;
            double sjmi = std::sqrt(static_cast<double>(j - i));
            double sjmk = std::sqrt(static_cast<double>(j - k));
            double sip1 = std::sqrt(i + 1.0);
            double skp1 = std::sqrt(k + 1.0);
            dd_[static_cast<std::size_t>(k) * (j + 1) + i] += sjmi * sjmk * dlj * cosb2_;
            dd_[static_cast<std::size_t>(k) * (j + 1) + i + 1] -= sip1 * sjmk * dlj * sinb2_;
            dd_[static_cast<std::size_t>(k + 1) * (j + 1) + i] += sjmi * skp1 * dlj * sinb2_;
            dd_[static_cast<std::size_t>(k + 1) * (j + 1) + i + 1] += sip1 * skp1 * dlj * cosb2_;
        }
    }
    // second pass: dd -> degree el plane
    j = 2 * el;
    buf_.assign(static_cast<std::size_t>(j + 1) * (j + 1), 0.0);
    for (int k = 0; k < j; ++k) {
        for (int i = 0; i < j; ++i) {
            double dlj = dd_[static_cast<std::size_t>(k) * j + i] / j;
            double sjmi = std::sqrt(static_cast<double>(j - i));
            double sjmk = std::sqrt(static_cast<double>(j - k));
            double sip1 = std::sqrt(i + 1.0);
            double skp1 = std::sqrt(k + 1.0);
            buf_[static_cast<std::size_t>(k) * (j + 1) + i] += sjmi * sjmk * dlj * cosb2_;
            buf_[static_cast<std::size_t>(k) * (j + 1) + i + 1] -= sip1 * sjmk * dlj * sinb2_;
            buf_[static_cast<std::size_t>(k + 1) * (j + 1) + i] += sjmi * skp1 * dlj * sinb2_;
            buf_[static_cast<std::size_t>(k + 1) * (j + 1) + i + 1] += sip1 * skp1 * dlj * cosb2_;
        }
    }
    ell_ = el;
}

// ---------------------------------------------------------------------------

double wigner_d(int ell, int m, int mp, double theta, const DeltaTable& table) {
    cplx acc = 0.0;
    for (int mpp = -ell; mpp <= ell; ++mpp)
        acc += table.value(ell, mpp, m) * table.value(ell, mpp, mp) *
               std::polar(1.0, -mpp * theta);
    cplx val = i_pow(m - mp) * acc;
    if (std::abs(val.imag()) > 1e-10)
        throw numerical_error("wigner_d: imaginary residual above 1e-10");
    return val.real();
}

cplx wigner_D(int ell, int m, int mp, const EulerAngles& rho, const DeltaTable& table) {
    return std::polar(1.0, -m * rho.varphi) * wigner_d(ell, m, mp, rho.vartheta, table) *
           std::polar(1.0, -mp * rho.omega);
}

HarmonicCoefficients rotate_coefficients(const HarmonicCoefficients& c, const EulerAngles& rho) {
    const int L = c.bandlimit;
    HarmonicCoefficients out(L);
    RisboPlane plane(rho.vartheta);
    for (int ell = 0; ell < L; ++ell) {
        if (ell > 0) plane.advance();
        for (int m = -ell; m <= ell; ++m) {
            cplx acc = 0.0;
            for (int mp = -ell; mp <= ell; ++mp)
                acc += plane.value(m, mp) * std::polar(1.0, -mp * rho.omega) * c.at(ell, mp);
            out.at(ell, m) = std::polar(1.0, -m * rho.varphi) * acc;
        }
    }
    return out;
}

} // namespace sst
