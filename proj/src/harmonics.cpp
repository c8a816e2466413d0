#include "sst/harmonics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sst {

void flat_to_lm(int idx, int& ell, int& m) {
    ell = static_cast<int>(std::sqrt(static_cast<double>(idx)));
    // guard against rounding at perfect squares
    while (ell * ell > idx) --ell;
    while ((ell + 1) * (ell + 1) <= idx) ++ell;
    m = idx - ell * ell - ell;
}

double associated_legendre(int ell, int m, double x) {
    if (m < 0 || m > ell) throw std::domain_error("associated_legendre: need 0 <= m <= l");
    if (std::abs(x) > 1.0) throw std::domain_error("associated_legendre: |x| must be <= 1");
    // P_m^m = (-1)^m (2m-1)!! (1-x^2)^{m/2}, then upward in degree.
    double pmm = 1.0;
    if (m > 0) {
        double s = std::sqrt((1.0 - x) * (1.0 + x));
        double fact = 1.0;
        for (int i = 1; i <= m; ++i) {
            pmm *= -fact * s;
            fact += 2.0;
        }
    }
    if (ell == m) return pmm;
    double pm1 = x * (2 * m + 1) * pmm;
    if (ell == m + 1) return pm1;
    double p = 0.0;
    for (int k = m + 2; k <= ell; ++k) {
        p = ((2 * k - 1) * x * pm1 - (k + m - 1) * pmm) / (k - m);
        pmm = pm1;
        pm1 = p;
    }
    return p;
}

LegendreTable::LegendreTable(int L, double x) : L_(L) {
    if (L < 1) throw std::invalid_argument("LegendreTable: bandlimit must be positive");
    pbar_.resize(static_cast<std::size_t>(L) * (L + 1) / 2);
    const double s = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
    // Pbar_0^0, then diagonal, off-diagonal and three-term upward recursions,
    // all on normalized values so no factorials appear.
    double pmm = 1.0 / std::sqrt(4.0 * std::numbers::pi);
    for (int m = 0; m < L; ++m) {
        if (m > 0) pmm *= -s * std::sqrt((2.0 * m + 1.0) / (2.0 * m));
        pbar_[m * (m + 1) / 2 + m] = pmm;
        if (m + 1 < L) {
            double pl1 = x * std::sqrt(2.0 * m + 3.0) * pmm;
            pbar_[(m + 1) * (m + 2) / 2 + m] = pl1;
            double plm2 = pmm, plm1 = pl1;
            for (int ell = m + 2; ell < L; ++ell) {
                double a = std::sqrt((4.0 * ell * ell - 1.0) /
                                     (static_cast<double>(ell) * ell - static_cast<double>(m) * m));
                double b = std::sqrt((4.0 * (ell - 1.0) * (ell - 1.0) - 1.0) /
                                     ((ell - 1.0) * (ell - 1.0) - static_cast<double>(m) * m));
                double p = a * (x * plm1 - plm2 / b);
                pbar_[ell * (ell + 1) / 2 + m] = p;
                plm2 = plm1;
                plm1 = p;
            }
        }
    }
}

cplx ylm_eval(int ell, int m, double theta, double phi) {
    int am = std::abs(m);
    if (am > ell) throw std::domain_error("ylm_eval: need |m| <= l");
    LegendreTable tab(ell + 1, std::cos(theta));
    double pb = tab(ell, am);
    cplx val = pb * std::polar(1.0, am * phi);
    if (m < 0) val = (am % 2 == 0 ? 1.0 : -1.0) * std::conj(val);
    return val;
}

} // namespace sst
