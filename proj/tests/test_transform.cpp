#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "sst/errors.hpp"
#include "sst/slepian.hpp"
#include "sst/so3.hpp"
#include "sst/transform.hpp"
#include "sst/wigner.hpp"

using namespace sst;
using oracle::pi;

namespace {

HarmonicCoefficients random_coefficients(int L, std::uint64_t seed) {
    oracle::Rng rng(seed);
    HarmonicCoefficients f(L);
    for (int i = 0; i < L * L; ++i) f.coeffs(i) = rng.cnormal();
    return f;
}

/// F(rho) from the separated orders by the plain triple sum.
cplx cube_synthesis(const CCube& C, const EulerAngles& rho) {
    const int h = C.bandlimit - 1;
    cplx acc = 0.0;
    for (int m = -h; m <= h; ++m)
        for (int mp = -h; mp <= h; ++mp)
            for (int mpp = -h; mpp <= h; ++mpp)
                acc += C.at(m, mp, mpp) *
                       std::polar(1.0, m * rho.varphi + mpp * rho.vartheta + mp * rho.omega);
    return acc;
}

} // namespace

TEST_CASE("so3 grid layout") {
    SO3Grid g = build_so3_grid(4);
    CHECK(g.bandlimit == 4);
    CHECK(g.n() == 7);
    REQUIRE(g.varphi.size() == 7);
    REQUIRE(g.vartheta.size() == 7);
    REQUIRE(g.omega.size() == 7);
    for (int j = 0; j < 7; ++j) {
        CHECK(g.varphi[j] == 2.0 * pi * j / 7);
        CHECK(g.vartheta[j] == g.varphi[j]);
        CHECK(g.omega[j] == g.varphi[j]);
    }
    // first L vartheta nodes stay within [0, pi], the rest extend periodically
    for (int j = 0; j < 4; ++j) CHECK(g.vartheta[j] <= pi);
    CHECK(g.vartheta[4] > pi);
    CHECK_THROWS_AS(build_so3_grid(0), std::invalid_argument);
}

TEST_CASE("wigner coefficient storage is degree-major triangular") {
    CHECK(WignerCoefficients::offset(0) == 0);
    long long expect = 0;
    for (int ell = 0; ell <= 12; ++ell) {
        CHECK(WignerCoefficients::offset(ell) == expect);
        expect += static_cast<long long>(2 * ell + 1) * (2 * ell + 1);
    }

    WignerCoefficients Fw(5);
    CHECK(Fw.coeffs.size() == static_cast<std::size_t>(WignerCoefficients::offset(5)));
    Fw.at(3, -2, 1) = cplx(2.0, -1.0);
    CHECK(Fw.coeffs[WignerCoefficients::offset(3) + (-2 + 3) * 7 + (1 + 3)] == cplx(2.0, -1.0));
}

TEST_CASE("c cube indexing round trip") {
    CCube C(3);
    CHECK(C.n() == 5);
    CHECK(C.values.size() == 125);
    C.at(-2, 1, -1) = cplx(1.0, 3.0);
    C.at(2, -2, 0) = cplx(-4.0, 0.5);
    CHECK(C.at(-2, 1, -1) == cplx(1.0, 3.0));
    CHECK(C.at(2, -2, 0) == cplx(-4.0, 0.5));
    // m' is the fastest-varying axis
    CHECK(&C.at(-2, -1, -2) == &C.at(-2, -2, -2) + 1);
    int n = C.n();
    CHECK(C.values[(static_cast<std::size_t>(0) * n + 1) * n + 2] ==
          C.at(-2, 0, -1)); // (m, m'', m') = (-2+2, -1+2, 0+2) -> (0, 1, 2)
}

TEST_CASE("sst_point orthonormality and validation") {
    const int L = 8;
    SlepianBasis basis = build_basis(Region::cap(0.6), L);

    HarmonicCoefficients f1 = basis.column(1);
    HarmonicCoefficients f2 = basis.column(2);
    EulerAngles id{0.0, 0.0, 0.0};
    CHECK(std::abs(sst_point(f1, basis, 1, id) - cplx(1.0)) < 1e-12);
    CHECK(std::abs(sst_point(f2, basis, 1, id)) < 1e-12);
    CHECK(std::abs(sst_point(f1, basis, 2, id)) < 1e-12);

    // degree-0 signals see only D^0 = 1: constant over all rotations
    HarmonicCoefficients c(L);
    c.at(0, 0) = cplx(0.7, -0.3);
    cplx expect = c.at(0, 0) * std::conj(basis.eigenvectors(0, 0));
    oracle::Rng rng(11);
    for (int t = 0; t < 5; ++t) {
        EulerAngles rho{2 * pi * rng.uniform(), pi * rng.uniform(), 2 * pi * rng.uniform()};
        CHECK(std::abs(sst_point(c, basis, 1, rho) - expect) < 1e-13);
    }

    HarmonicCoefficients wrong(L + 1);
    CHECK_THROWS_AS(sst_point(wrong, basis, 1, id), grid_mismatch_error);
    CHECK_THROWS_AS(sst_point(f1, basis, 0, id), std::out_of_range);
    CHECK_THROWS_AS(sst_point(f1, basis, L * L + 1, id), std::out_of_range);
}

TEST_CASE("compute_C smallest case and zonal sparsity") {
    SlepianBasis b1 = zonal_basis(0.5, 1);
    HarmonicCoefficients f(1);
    f.at(0, 0) = cplx(0.3, 0.4);
    CCube C1 = compute_C(f, b1, 1);
    CHECK(C1.values.size() == 1);
    cplx expect = f.at(0, 0) * std::conj(b1.eigenvectors(0, 0));
    CHECK(std::abs(C1.at(0, 0, 0) - expect) < 1e-15);

    const int L = 8;
    SlepianBasis zb = zonal_basis(0.9, L);
    HarmonicCoefficients g = random_coefficients(L, 5);
    CCube C = compute_C(g, zb, 2);
    int nonzero_mp0 = 0;
    for (int m = -(L - 1); m <= L - 1; ++m)
        for (int mp = -(L - 1); mp <= L - 1; ++mp)
            for (int mpp = -(L - 1); mpp <= L - 1; ++mpp) {
                if (mp != 0)
                    CHECK(C.at(m, mp, mpp) == cplx(0.0));
                else if (C.at(m, mp, mpp) != cplx(0.0))
                    ++nonzero_mp0;
            }
    CHECK(nonzero_mp0 > 0);
}

TEST_CASE("compute_C reconstructs the direct transform at random rotations") {
    const int L = 8;
    SlepianBasis basis = build_basis(Region::cap(0.8), L);
    HarmonicCoefficients f = random_coefficients(L, 21);
    CCube C = compute_C(f, basis, 1);

    oracle::Rng rng(22);
    for (int t = 0; t < 5; ++t) {
        EulerAngles rho{2 * pi * rng.uniform(), pi * rng.uniform(), 2 * pi * rng.uniform()};
        cplx direct = sst_point(f, basis, 1, rho);
        cplx series = cube_synthesis(C, rho);
        CHECK(std::abs(series - direct) < 1e-10);
    }
}

TEST_CASE("c cube mirror and determinism are bit-exact") {
    const int L = 6;
    SlepianBasis basis = build_basis(Region::cap(1.0), L);
    HarmonicCoefficients f = random_coefficients(L, 33);
    CCube C = compute_C(f, basis, 3);
    // negative-m'' half is the sign-flipped copy of the positive half
    for (int m = -(L - 1); m <= L - 1; ++m)
        for (int mp = -(L - 1); mp <= L - 1; ++mp)
            for (int mpp = 1; mpp <= L - 1; ++mpp) {
                cplx lhs = C.at(m, mp, -mpp);
                cplx rhs = C.at(m, mp, mpp);
                if ((m + mp) % 2 != 0) rhs = -rhs;
                CHECK(lhs == rhs);
            }
    CCube C2 = compute_C(f, basis, 3);
    CHECK(C.values == C2.values);
}

TEST_CASE("fast transform matches the direct sum on the full rotation grid") {
    for (int L : {2, 4, 8, 16}) {
        Region R = Region::cap(0.7);
        SlepianBasis basis = build_basis(R, L);
        HarmonicCoefficients f = random_coefficients(L, 100 + L);
        for (int alpha : {1, 2}) {
            SO3Signal F = sst_fast(f, basis, alpha);
            const int n = F.grid.n();
            REQUIRE(static_cast<int>(F.values.size()) == n * n * n);
            CHECK(F.alpha == alpha);
            double worst = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        EulerAngles rho{F.grid.varphi[i], F.grid.vartheta[j], F.grid.omega[k]};
                        worst = std::max(worst,
                                         std::abs(F.at(i, j, k) - sst_point(f, basis, alpha, rho)));
                    }
            CHECK(worst < 1e-10);
        }
    }
}

TEST_CASE("fast transform matches the direct sum for a rotated ellipse window") {
    const int L = 8;
    Region R = Region::ellipse(0.25, 0.4, {1.1, 0.7, -0.4});
    SlepianBasis basis = build_basis(R, L);
    HarmonicCoefficients f = random_coefficients(L, 7);
    SO3Signal F = sst_fast(f, basis, 1);
    const int n = F.grid.n();
    double worst = 0.0;
    for (int i = 0; i < n; i += 3)
        for (int j = 0; j < n; j += 2)
            for (int k = 0; k < n; k += 3) {
                EulerAngles rho{F.grid.varphi[i], F.grid.vartheta[j], F.grid.omega[k]};
                worst = std::max(worst, std::abs(F.at(i, j, k) - sst_point(f, basis, 1, rho)));
            }
    CHECK(worst < 1e-10);
}

TEST_CASE("zonal windows give omega-independent cubes and zero signals vanish") {
    const int L = 8;
    SlepianBasis zb = zonal_basis(0.8, L);
    HarmonicCoefficients f = random_coefficients(L, 55);
    SO3Signal F = sst_fast(f, zb, 1);
    const int n = F.grid.n();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 1; k < n; ++k)
                CHECK(std::abs(F.at(i, j, k) - F.at(i, j, 0)) < 1e-12);

    HarmonicCoefficients zero(L);
    SO3Signal Z = sst_fast(zero, zb, 1);
    for (const cplx& v : Z.values) CHECK(v == cplx(0.0));
}

TEST_CASE("wigner coefficients form rank-1 degree blocks") {
    const int L = 8;
    SlepianBasis basis = build_basis(Region::cap(0.9), L);
    HarmonicCoefficients f = random_coefficients(L, 17);
    WignerCoefficients Fw = sst_wigner_coefficients(f, basis, 1);

    CHECK(std::abs(Fw.at(0, 0, 0) - f.at(0, 0) * std::conj(basis.eigenvectors(0, 0))) < 1e-15);

    for (int ell = 1; ell < L; ++ell) {
        int w = 2 * ell + 1;
        Eigen::MatrixXcd B(w, w);
        for (int m = -ell; m <= ell; ++m)
            for (int mp = -ell; mp <= ell; ++mp) B(m + ell, mp + ell) = Fw.at(ell, m, mp);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(B);
        const auto& s = svd.singularValues();
        CHECK(s(0) > 0.0);
        CHECK(s(1) * 1e8 < s(0));
    }
}

TEST_CASE("wigner coefficients equal the rotation-group quadrature of F") {
    // quadrature: 4L-3 uniform nodes in varphi and omega (alias-free for
    // combined orders up to 2L-2), 2L Gauss-Legendre nodes in cos(vartheta)
    // (the surviving integrand is a polynomial of degree <= 2L-2 there)
    const int L = 6;
    SlepianBasis basis = build_basis(Region::cap(1.1), L);
    HarmonicCoefficients f = random_coefficients(L, 40);
    WignerCoefficients Fw = sst_wigner_coefficients(f, basis, 2);

    const int na = 4 * L - 3;
    GaussLegendreRule rule = gauss_legendre(2 * L);
    DeltaTable table(L);

    std::vector<cplx> Fval(static_cast<std::size_t>(na) * rule.nodes.size() * na);
    std::vector<double> theta(rule.nodes.size());
    for (std::size_t jx = 0; jx < rule.nodes.size(); ++jx) theta[jx] = std::acos(rule.nodes[jx]);
    std::size_t idx = 0;
    for (int i = 0; i < na; ++i)
        for (std::size_t jx = 0; jx < rule.nodes.size(); ++jx)
            for (int k = 0; k < na; ++k) {
                EulerAngles rho{2 * pi * i / na, theta[jx], 2 * pi * k / na};
                Fval[idx++] = sst_point(f, basis, 2, rho);
            }

    double worst = 0.0;
    for (int ell = 0; ell < L; ++ell)
        for (int m = -ell; m <= ell; ++m)
            for (int mp = -ell; mp <= ell; ++mp) {
                cplx acc = 0.0;
                idx = 0;
                for (int i = 0; i < na; ++i)
                    for (std::size_t jx = 0; jx < rule.nodes.size(); ++jx)
                        for (int k = 0; k < na; ++k) {
                            EulerAngles rho{2 * pi * i / na, theta[jx], 2 * pi * k / na};
                            acc += rule.weights[jx] * Fval[idx++] *
                                   wigner_D(ell, m, mp, rho, table);
                        }
                acc *= (2 * pi / na) * (2 * pi / na) * (2 * ell + 1) / (8 * pi * pi);
                worst = std::max(worst, std::abs(acc - Fw.at(ell, m, mp)));
            }
    CHECK(worst < 1e-10);
}

TEST_CASE("inverse recovers the signal from its wigner coefficients") {
    const int L = 16;
    SlepianBasis basis = build_basis(Region::cap(0.7), L);
    HarmonicCoefficients f = random_coefficients(L, 71);
    HarmonicCoefficients back = inverse_sst(sst_wigner_coefficients(f, basis, 1), basis, 1);
    double rel = (back.coeffs - f.coeffs).norm() / f.coeffs.norm();
    CHECK(rel < 1e-10);

    // recovering a window column from its own transform
    HarmonicCoefficients g3 = basis.column(3);
    HarmonicCoefficients back3 = inverse_sst(sst_wigner_coefficients(g3, basis, 1), basis, 1);
    CHECK((back3.coeffs - g3.coeffs).norm() < 1e-10);
}

TEST_CASE("inverse reports degrees whose window row is below threshold") {
    const int L = 4;
    SlepianBasis basis = build_basis(Region::cap(0.6), L);
    // zero out the whole degree-2 row of column 1
    for (int mp = -2; mp <= 2; ++mp) basis.eigenvectors(flat_index(2, mp), 0) = 0.0;
    HarmonicCoefficients f = random_coefficients(L, 3);
    WignerCoefficients Fw = sst_wigner_coefficients(f, basis, 2);
    try {
        inverse_sst(Fw, basis, 1, 1e-12);
        FAIL("expected non_invertible_error");
    } catch (const non_invertible_error& e) {
        REQUIRE(e.degrees().size() == 1);
        CHECK(e.degrees()[0] == 2);
    }
}

TEST_CASE("both energy routes agree for every window family") {
    const int L = 16;
    SlepianBasis zb = zonal_basis(3.0 * pi / 16.0, L);
    CHECK(zb.n_well == 3);
    for (int t = 0; t < 20; ++t) {
        HarmonicCoefficients f = random_coefficients(L, 500 + t);
        CHECK(std::abs(tight_frame_ratio(f, zb) - 1.0) < 1e-10);
    }

    // single harmonic
    HarmonicCoefficients y32(L);
    y32.at(3, 2) = 1.0;
    CHECK(std::abs(tight_frame_ratio(y32, zb) - 1.0) < 1e-10);

    // non-zonal family exercises the m' != 0 and mirrored m'' paths
    SlepianBasis cap8 = build_basis(Region::cap(0.7), 8);
    HarmonicCoefficients h = random_coefficients(8, 9);
    CHECK(std::abs(tight_frame_ratio(h, cap8) - 1.0) < 1e-10);

    SlepianBasis ell8 = build_basis(Region::ellipse(0.3, 0.45, {0.4, 1.2, 2.0}), 8);
    CHECK(std::abs(tight_frame_ratio(h, ell8) - 1.0) < 1e-10);

    HarmonicCoefficients zero(L);
    CHECK_THROWS_AS(tight_frame_ratio(zero, zb), std::invalid_argument);
}

TEST_CASE("frame constant diagnostic") {
    const int L = 12;
    SlepianBasis zb = zonal_basis(0.7, L);
    double expect = 0.0;
    for (int ell = 0; ell < L; ++ell)
        expect += 8.0 * pi * pi * std::norm(zb.eigenvectors(flat_index(ell, 0), 0)) /
                  (2 * ell + 1);
    CHECK(frame_constant(zb, 1) == doctest::Approx(expect).epsilon(1e-13));

    // complete basis: unitarity makes each degree contribute exactly 8 pi^2
    SlepianBasis full = build_basis(Region::cap(0.9), 6);
    REQUIRE(full.n_stored() == 36);
    CHECK(frame_constant(full, 36) == doctest::Approx(8.0 * pi * pi * 6).epsilon(1e-12));

    CHECK_THROWS_AS(frame_constant(zb, 0), std::out_of_range);
    CHECK_THROWS_AS(frame_constant(zb, L + 1), std::out_of_range);
}

TEST_CASE("zonal transform lives on the sphere") {
    const int L = 8;
    SlepianBasis zb = zonal_basis(0.8, L);

    // coefficient delta maps to a single scaled entry
    HarmonicCoefficients f(L);
    f.at(5, -3) = 1.0;
    HarmonicCoefficients Fc = zonal_sst_coefficients(f, zb, 2);
    cplx expect = std::sqrt(4.0 * pi / 11.0) * std::conj(zb.eigenvectors(flat_index(5, 0), 1));
    CHECK(std::abs(Fc.at(5, -3) - expect) < 1e-15);
    for (int i = 0; i < L * L; ++i)
        if (i != flat_index(5, -3)) CHECK(Fc.coeffs(i) == cplx(0.0));

    SlepianBasis nonzonal = build_basis(Region::cap(0.8), L);
    CHECK_THROWS_AS(zonal_sst_coefficients(f, nonzonal, 1), std::invalid_argument);
}

TEST_CASE("zonal transform agrees with the omega = 0 slice of the cube") {
    const int L = 8;
    SlepianBasis zb = zonal_basis(1.0, L);
    HarmonicCoefficients f = random_coefficients(L, 77);
    SO3Signal F = sst_fast(f, zb, 1);

    // synthesize on the (vartheta_j, varphi_i) sub-lattice of the cube
    SphereGrid grid;
    grid.bandlimit = L;
    grid.theta.assign(F.grid.vartheta.begin(), F.grid.vartheta.begin() + L);
    grid.weights.assign(L, 0.0); // synthesis does not use weights
    grid.phi = F.grid.varphi;
    SphereSignal S = zonal_sst(f, zb, 1, grid);

    double worst = 0.0;
    for (int j = 0; j < L; ++j)
        for (int i = 0; i < F.grid.n(); ++i)
            worst = std::max(worst, std::abs(S.values(j, i) - F.at(i, j, 0)));
    CHECK(worst < 1e-11);
}

TEST_CASE("zonal inverse round trip and error paths") {
    const int L = 32;
    SlepianBasis zb = zonal_basis(pi / 3.0, L);
    const auto g = zb.eigenvectors.col(0);
    double gmin = 1e300;
    for (int ell = 0; ell < L; ++ell) gmin = std::min(gmin, std::abs(g(flat_index(ell, 0))));
    REQUIRE(gmin > 0.0);

    HarmonicCoefficients f = random_coefficients(L, 88);
    HarmonicCoefficients back = zonal_inverse(zonal_sst_coefficients(f, zb, 1), zb, 1, 0.0);
    CHECK((back.coeffs - f.coeffs).norm() / f.coeffs.norm() < 1e-10);

    HarmonicCoefficients zero(L);
    HarmonicCoefficients zback = zonal_inverse(zonal_sst_coefficients(zero, zb, 1), zb, 1, 0.0);
    CHECK(zback.coeffs.norm() == 0.0);

    SlepianBasis broken = zb;
    broken.eigenvectors(flat_index(5, 0), 0) = 0.0;
    try {
        zonal_inverse(zonal_sst_coefficients(f, zb, 1), broken, 1, 1e-12);
        FAIL("expected non_invertible_error");
    } catch (const non_invertible_error& e) {
        REQUIRE(e.degrees().size() == 1);
        CHECK(e.degrees()[0] == 5);
    }
}

TEST_CASE("sample analysis recovers the wigner coefficients") {
    // full window at L = 8, zonal window at L = 16: wigner_analysis inverts
    // so3_synthesis, so the rank-1 spectral form survives the grid round trip
    struct Case {
        int L;
        SlepianBasis basis;
    };
    std::vector<Case> cases;
    cases.push_back({8, build_basis(Region::cap(0.7), 8)});
    cases.push_back({16, zonal_basis(0.6, 16)});

    for (const Case& c : cases) {
        HarmonicCoefficients f = random_coefficients(c.L, 97 + c.L);
        SO3Signal F = sst_fast(f, c.basis, 1);
        WignerCoefficients rec = wigner_analysis(F);
        WignerCoefficients ref = sst_wigner_coefficients(f, c.basis, 1);
        REQUIRE(rec.coeffs.size() == ref.coeffs.size());
        double worst = 0.0;
        for (std::size_t i = 0; i < ref.coeffs.size(); ++i)
            worst = std::max(worst, std::abs(rec.coeffs[i] - ref.coeffs[i]));
        CHECK(worst < 1e-10);
    }

    SO3Signal empty;
    CHECK_THROWS_AS(wigner_analysis(empty), std::invalid_argument);
    SO3Signal torn;
    torn.grid = build_so3_grid(4);
    torn.values.assign(10, cplx(0.0));
    CHECK_THROWS_AS(wigner_analysis(torn), grid_mismatch_error);
}

TEST_CASE("the fast transform is the synthesis of its fourier cube") {
    const int L = 4;
    SlepianBasis basis = build_basis(Region::cap(0.8), L);
    HarmonicCoefficients f = random_coefficients(L, 113);
    CCube C = compute_C(f, basis, 2);
    SO3Signal direct = so3_synthesis(C, 2);
    SO3Signal fast = sst_fast(f, basis, 2);
    CHECK(direct.alpha == 2);
    bool bitwise = direct.values.size() == fast.values.size();
    for (std::size_t i = 0; bitwise && i < fast.values.size(); ++i)
        bitwise = direct.values[i] == fast.values[i];
    CHECK(bitwise);
    CHECK_THROWS_AS(so3_synthesis(C, 0), std::out_of_range);
    CHECK_THROWS_AS(so3_synthesis(CCube(0)), std::invalid_argument);
}
