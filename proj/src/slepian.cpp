#include "sst/slepian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "sst/errors.hpp"
#include "sst/grid.hpp"
#include "sst/wigner.hpp"

namespace sst {

namespace {

constexpr double pi = std::numbers::pi;

double pbar_sign(int m) { return (m < 0 && std::abs(m) % 2 == 1) ? -1.0 : 1.0; }

/// 2 pi int_{cos Theta_c}^1 Pbar_l^m Pbar_p^m dx for l, p in [m, L); the
/// integrand is a polynomial of degree <= 2L-2 in x, so L Gauss-Legendre
/// nodes integrate it exactly.
Eigen::MatrixXd cap_m_block(double Theta_c, int m, int L) {
    int n = L - m;
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
    auto rule = gauss_legendre(L);
    double mid = 0.5 * (1.0 + std::cos(Theta_c)), half = 0.5 * (1.0 - std::cos(Theta_c));
    Eigen::VectorXd col(n);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        LegendreTable T(L, mid + half * rule.nodes[i]);
        // sqrt-scaled rank-1 update keeps B symmetric to the last bit
        double s = std::sqrt(2.0 * pi * half * rule.weights[i]);
        for (int ell = m; ell < L; ++ell) col(ell - m) = s * T(ell, m);
        B.noalias() += col * col.transpose();
    }
    return B;
}

struct EllipseQuadrature {
    std::vector<double> theta, weight; // weight includes sin(theta) and maps
    std::vector<double> halfwidth;     // phi arc half-width per node (pi/2 on full rings)
};

/// Colatitude quadrature of the unrotated ellipse: exact-degree nodes on the
/// full-ring band [0, b] plus a cubic-mapped rule on the arc band [b, a]
/// (the arc half-width has square-root edges; the vanishing-slope map makes
/// the integrand smooth again).
EllipseQuadrature ellipse_quadrature(const Region& R, int L, int n_arc) {
    EllipseQuadrature q;
    double b = R.semi_minor();
    double cb = std::cos(b);
    auto r1 = gauss_legendre(L + 1);
    for (std::size_t i = 0; i < r1.nodes.size(); ++i) {
        double x = 0.5 * (1.0 + cb) + 0.5 * (1.0 - cb) * r1.nodes[i];
        q.theta.push_back(std::acos(x));
        q.weight.push_back(0.5 * (1.0 - cb) * r1.weights[i]); // dx = sin(theta) dtheta
        q.halfwidth.push_back(pi / 2);
    }
    auto r2 = gauss_legendre(n_arc);
    for (std::size_t i = 0; i < r2.nodes.size(); ++i) {
        double t = 0.5 * (r2.nodes[i] + 1.0);
        double theta = b + (R.a - b) * t * t * (3.0 - 2.0 * t);
        double jac = 0.5 * (R.a - b) * 6.0 * t * (1.0 - t);
        q.theta.push_back(theta);
        q.weight.push_back(r2.weights[i] * jac * std::sin(theta));
        q.halfwidth.push_back(ellipse_ring_halfwidth(R, theta));
    }
    return q;
}

/// K of the *unrotated* ellipse, which is real: the phi integral over the
/// ring arcs is (1 + (-1)^k) 2 sin(k hw)/k for k = q - m (4 hw at k = 0),
/// vanishing for odd k and reducing to 2 pi delta_{k0} on full rings.
Eigen::MatrixXd ellipse_k_unrotated(const Region& R, int L, int n_arc) {
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    RowMajor K = RowMajor::Zero(L * L, L * L);
    auto quad = ellipse_quadrature(R, L, n_arc);
    std::vector<double> ring(2 * L - 1);
    std::vector<std::pair<int, double>> cols; // (q, weight) with nonzero phi integral
    for (std::size_t i = 0; i < quad.theta.size(); ++i) {
        double hw = quad.halfwidth[i];
        ring[0] = 4.0 * hw;
        for (int k = 1; k <= 2 * L - 2; ++k)
            ring[k] = (k % 2 == 1) ? 0.0 : 4.0 * std::sin(k * hw) / k;
        LegendreTable T(L, std::cos(quad.theta[i]));
        for (int m = -(L - 1); m <= L - 1; ++m) {
            int am = std::abs(m);
            cols.clear();
            for (int q = -(L - 1); q <= L - 1; ++q) {
                if ((q - m) % 2 != 0) continue;
                double f = quad.weight[i] * pbar_sign(m) * pbar_sign(q) * ring[std::abs(q - m)];
                if (f != 0.0) cols.emplace_back(q, f);
            }
            for (int ell = am; ell < L; ++ell) {
                double* row = K.data() + static_cast<std::size_t>(flat_index(ell, m)) * (L * L);
                double pl = T(ell, am);
                for (const auto& [q, f] : cols) {
                    double fl = f * pl;
                    int aq = std::abs(q);
                    for (int p = aq; p < L; ++p) row[flat_index(p, q)] += fl * T(p, aq);
                }
            }
        }
    }
    return Eigen::MatrixXd(K);
}

/// Per-degree rotation matrices D^l(rho), block l indexed by (m + l, m' + l).
std::vector<Eigen::MatrixXcd> rotation_blocks(int L, const EulerAngles& rho) {
    std::vector<Eigen::MatrixXcd> D(L);
    RisboPlane plane(rho.vartheta);
    for (int ell = 0; ell < L; ++ell) {
        if (ell > 0) plane.advance();
        D[ell].resize(2 * ell + 1, 2 * ell + 1);
        for (int m = -ell; m <= ell; ++m)
            for (int mp = -ell; mp <= ell; ++mp)
                D[ell](m + ell, mp + ell) = std::polar(1.0, -m * rho.varphi) *
                                            plane.value(m, mp) *
                                            std::polar(1.0, -mp * rho.omega);
    }
    return D;
}

bool is_identity(const EulerAngles& rho) {
    return rho.varphi == 0.0 && rho.vartheta == 0.0 && rho.omega == 0.0;
}

/// First component above 1e-12 of the column maximum is made real positive.
void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
    double mx = v.cwiseAbs().maxCoeff();
    if (mx == 0.0) return;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) > 1e-12 * mx) {
            v *= std::conj(v(i)) / std::abs(v(i));
            return;
        }
}

double clamp_eigenvalue(double lambda, int L) {
    if (lambda < -1e-12 || lambda > 1.0 + 1e-12)
        throw numerical_error("concentration eigenvalue " + std::to_string(lambda) +
                              " outside [0,1] beyond tolerance at L=" + std::to_string(L));
    return std::clamp(lambda, 0.0, 1.0);
}

int round_half_up(double x) { return std::max(1, static_cast<int>(std::floor(x + 0.5))); }

struct BlockEntry {
    double lambda;
    int abs_m;
    int neg; // 0 for m >= 0, 1 for m < 0
    int k;   // index within the block, descending lambda
    int m;
    Eigen::VectorXd vec;
};

} // namespace

HarmonicCoefficients SlepianBasis::column(int alpha) const {
    if (alpha < 1 || alpha > n_stored())
        throw std::out_of_range("SlepianBasis::column: scale out of range");
    HarmonicCoefficients c(bandlimit);
    c.coeffs = eigenvectors.col(alpha - 1);
    return c;
}

Eigen::MatrixXcd concentration_matrix(const Region& R, int L) {
    if (L < 1) throw std::invalid_argument("concentration_matrix: bandlimit must be positive");
    if (R.kind == Region::Kind::polar_cap) {
        Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(L * L, L * L);
        for (int m = 0; m < L; ++m) {
            Eigen::MatrixXd B = cap_m_block(R.cap_theta, m, L);
            for (int ell = m; ell < L; ++ell)
                for (int p = m; p < L; ++p) {
                    K(flat_index(ell, m), flat_index(p, m)) = B(ell - m, p - m);
                    if (m > 0) K(flat_index(ell, -m), flat_index(p, -m)) = B(ell - m, p - m);
                }
        }
        return K;
    }
    Eigen::MatrixXcd K = ellipse_k_unrotated(R, L, 320).cast<cplx>();
    if (!is_identity(R.rotation)) {
        auto D = rotation_blocks(L, R.rotation);
        for (int ell = 0; ell < L; ++ell)
            K.middleRows(ell * ell, 2 * ell + 1) = D[ell] * K.middleRows(ell * ell, 2 * ell + 1);
        for (int p = 0; p < L; ++p)
            K.middleCols(p * p, 2 * p + 1) = K.middleCols(p * p, 2 * p + 1) * D[p].adjoint();
    }
    K = 0.5 * (K + K.adjoint().eval()); // restore bitwise Hermiticity after the products
    return K;
}

double concentration_trace(const Region& R, int L) {
    if (L < 1) throw std::invalid_argument("concentration_trace: bandlimit must be positive");
    double tr = 0.0;
    if (R.kind == Region::Kind::polar_cap) {
        auto rule = gauss_legendre(L);
        double mid = 0.5 * (1.0 + std::cos(R.cap_theta)), half = 0.5 * (1.0 - std::cos(R.cap_theta));
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            LegendreTable T(L, mid + half * rule.nodes[i]);
            double s = 0.0;
            for (int ell = 0; ell < L; ++ell)
                for (int m = 0; m <= ell; ++m) s += (m == 0 ? 1.0 : 2.0) * T(ell, m) * T(ell, m);
            tr += 2.0 * pi * half * rule.weights[i] * s;
        }
        return tr;
    }
    auto quad = ellipse_quadrature(R, L, 320);
    for (std::size_t i = 0; i < quad.theta.size(); ++i) {
        LegendreTable T(L, std::cos(quad.theta[i]));
        double s = 0.0;
        for (int ell = 0; ell < L; ++ell)
            for (int m = 0; m <= ell; ++m) s += (m == 0 ? 1.0 : 2.0) * T(ell, m) * T(ell, m);
        tr += quad.weight[i] * 4.0 * quad.halfwidth[i] * s;
    }
    return tr;
}

SlepianBasis solve_slepian(const Eigen::MatrixXcd& K, const Region& R, int L) {
    if (K.rows() != L * L || K.cols() != L * L)
        throw std::invalid_argument("solve_slepian: K must be L^2 x L^2");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(K);
    if (es.info() != Eigen::Success)
        throw numerical_error("solve_slepian: eigensolver failed to converge (size " +
                              std::to_string(L * L) + ", |K| = " + std::to_string(K.norm()) + ")");
    SlepianBasis basis;
    basis.bandlimit = L;
    basis.region = R;
    basis.eigenvalues.resize(L * L);
    basis.eigenvectors.resize(L * L, L * L);
    for (int i = 0; i < L * L; ++i) { // solver returns ascending eigenvalues
        basis.eigenvalues(i) = clamp_eigenvalue(es.eigenvalues()(L * L - 1 - i), L);
        basis.eigenvectors.col(i) = es.eigenvectors().col(L * L - 1 - i);
        fix_phase(basis.eigenvectors.col(i));
    }
    basis.shannon = basis.eigenvalues.sum();
    basis.n_well = round_half_up(basis.shannon);
    return basis;
}

SlepianBasis build_basis(const Region& R, int L, int n_store) {
    if (L < 1) throw std::invalid_argument("build_basis: bandlimit must be positive");
    if (n_store == 0 || n_store > L * L)
        throw std::invalid_argument("build_basis: n_store must be in [1, L^2], or negative for all");
    const int keep = n_store < 0 ? L * L : n_store;
    SlepianBasis basis;
    basis.bandlimit = L;
    basis.region = R;
    Eigen::VectorXd spectrum(L * L);
    basis.eigenvectors = Eigen::MatrixXcd::Zero(L * L, keep);

    if (R.kind == Region::Kind::polar_cap) {
        std::vector<BlockEntry> entries;
        entries.reserve(L * L);
        for (int m = 0; m < L; ++m) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cap_m_block(R.cap_theta, m, L));
            if (es.info() != Eigen::Success)
                throw numerical_error("build_basis: cap block eigensolver failed at m = " +
                                      std::to_string(m));
            int n = L - m;
            for (int k = 0; k < n; ++k) {
                double lambda = clamp_eigenvalue(es.eigenvalues()(n - 1 - k), L);
                entries.push_back({lambda, m, 0, k, m, es.eigenvectors().col(n - 1 - k)});
                if (m > 0) entries.push_back({lambda, m, 1, k, -m, entries.back().vec});
            }
        }
        std::sort(entries.begin(), entries.end(), [](const BlockEntry& x, const BlockEntry& y) {
            if (x.lambda != y.lambda) return x.lambda > y.lambda;
            if (x.abs_m != y.abs_m) return x.abs_m < y.abs_m;
            if (x.neg != y.neg) return x.neg < y.neg;
            return x.k < y.k;
        });
        for (int i = 0; i < L * L; ++i) {
            const BlockEntry& e = entries[i];
            spectrum(i) = e.lambda;
            if (i >= keep) continue;
            for (int ell = e.abs_m; ell < L; ++ell)
                basis.eigenvectors(flat_index(ell, e.m), i) = e.vec(ell - e.abs_m);
            fix_phase(basis.eigenvectors.col(i));
        }
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ellipse_k_unrotated(R, L, 320));
        if (es.info() != Eigen::Success)
            throw numerical_error("build_basis: ellipse eigensolver failed to converge");
        for (int i = 0; i < L * L; ++i) {
            spectrum(i) = clamp_eigenvalue(es.eigenvalues()(L * L - 1 - i), L);
            if (i < keep) basis.eigenvectors.col(i) = es.eigenvectors().col(L * L - 1 - i).cast<cplx>();
        }
        if (!is_identity(R.rotation)) {
            auto D = rotation_blocks(L, R.rotation);
            for (int ell = 0; ell < L; ++ell)
                basis.eigenvectors.middleRows(ell * ell, 2 * ell + 1) =
                    D[ell] * basis.eigenvectors.middleRows(ell * ell, 2 * ell + 1);
        }
        for (int i = 0; i < keep; ++i) fix_phase(basis.eigenvectors.col(i));
    }
    basis.shannon = spectrum.sum();
    basis.n_well = round_half_up(basis.shannon);
    basis.eigenvalues = spectrum.head(keep);
    return basis;
}

SlepianBasis zonal_basis(double Theta_c, int L) {
    Region R = Region::cap(Theta_c);
    if (L < 1) throw std::invalid_argument("zonal_basis: bandlimit must be positive");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cap_m_block(Theta_c, 0, L));
    if (es.info() != Eigen::Success)
        throw numerical_error("zonal_basis: eigensolver failed to converge");
    SlepianBasis basis;
    basis.bandlimit = L;
    basis.region = R;
    basis.zonal = true;
    basis.shannon = L * Theta_c / pi;
    basis.n_well = round_half_up(basis.shannon);
    basis.eigenvalues.resize(L);
    basis.eigenvectors = Eigen::MatrixXcd::Zero(L * L, L);
    for (int k = 0; k < L; ++k) {
        basis.eigenvalues(k) = clamp_eigenvalue(es.eigenvalues()(L - 1 - k), L);
        for (int ell = 0; ell < L; ++ell)
            basis.eigenvectors(flat_index(ell, 0), k) = es.eigenvectors()(ell, L - 1 - k);
        fix_phase(basis.eigenvectors.col(k));
    }
    return basis;
}

SphereSignal slepian_eval(const SlepianBasis& basis, int alpha, const SphereGrid& grid) {
    return sht_inverse(basis.column(alpha), grid);
}

Eigen::VectorXcd slepian_analysis(const HarmonicCoefficients& c, const SlepianBasis& basis) {
    if (c.bandlimit != basis.bandlimit)
        throw grid_mismatch_error("slepian_analysis: bandlimit mismatch");
    return basis.eigenvectors.adjoint() * c.coeffs;
}

HarmonicCoefficients slepian_synthesis(const Eigen::VectorXcd& coeffs, const SlepianBasis& basis) {
    if (coeffs.size() != basis.n_stored())
        throw grid_mismatch_error("slepian_synthesis: coefficient count mismatch");
    HarmonicCoefficients c(basis.bandlimit);
    c.coeffs = basis.eigenvectors * coeffs;
    return c;
}

} // namespace sst
