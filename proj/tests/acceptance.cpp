// End-to-end acceptance gate: one self-contained check per release property,
// each printing a PASS/FAIL line with its measured figure and runtime.
// Tolerances are pinned here on purpose -- loosening one is a release
// decision, not a test edit. Exit status is the number of failed checks.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <vector>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "sst/lva.hpp"
#include "sst/region.hpp"
#include "sst/slepian.hpp"
#include "sst/transform.hpp"

using namespace sst;
using oracle::pi;

namespace {

double rad(double deg) { return deg * pi / 180.0; }

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail, double elapsed) {
    std::printf("%d. %-34s %s  (%s, %.2f s)\n", id, name, ok ? "PASS" : "FAIL", detail.c_str(),
                elapsed);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

HarmonicCoefficients random_coefficients(int L, std::uint64_t seed) {
    HarmonicCoefficients c(L);
    oracle::Rng rng(seed);
    for (int i = 0; i < L * L; ++i) c.coeffs(i) = rng.cnormal();
    return c;
}

Region tilted_ellipse() { return Region::ellipse(rad(15), rad(20), {rad(60), rad(90), rad(45)}); }

// --- 1. zonal Shannon counts -----------------------------------------------

void check_shannon() {
    constexpr double tol = 1e-12;
    Timer t;
    SlepianBasis a = zonal_basis(rad(15), 32);
    SlepianBasis b = zonal_basis(rad(15), 128);
    double worst = std::max(std::abs(a.shannon - 32.0 * 15.0 / 180.0),
                            std::abs(b.shannon - 128.0 * 15.0 / 180.0));
    bool ok = worst < tol && a.n_well == 3 && b.n_well == 11 && t.seconds() < 1.0;
    report(1, "zonal Shannon counts", ok,
           fmt("worst %.2e, n_well %.0f and %.0f", worst, double(a.n_well), double(b.n_well)),
           t.seconds());
}

// --- 2. concentration trace identity ---------------------------------------

Eigen::MatrixXcd g_ellipse_K; // computed here, reused by the orthogonality check

void check_trace() {
    constexpr double cap_tol = 1e-8, ellipse_tol = 1e-3;
    Timer t;
    double worst_cap = 0.0;
    for (int L : {4, 16, 64})
        for (double deg : {10.0, 15.0, 40.0, 90.0, 150.0}) {
            double target = 0.5 * (1.0 - std::cos(rad(deg))) * L * L;
            double tr = concentration_trace(Region::cap(rad(deg)), L);
            worst_cap = std::max(worst_cap, std::abs(tr - target) / target);
        }
    g_ellipse_K = concentration_matrix(tilted_ellipse(), 32);
    double target = region_area(tilted_ellipse(), 512) / (4.0 * pi) * 32 * 32;
    double rel_ell = std::abs(g_ellipse_K.trace().real() - target) / target;
    bool ok = worst_cap < cap_tol && rel_ell < ellipse_tol && t.seconds() < 30.0;
    report(2, "concentration trace identity", ok,
           fmt("caps %.2e, ellipse %.2e", worst_cap, rel_ell), t.seconds());
}

// --- 3. dual orthogonality --------------------------------------------------

double dual_orthogonality(const SlepianBasis& basis, const Eigen::MatrixXcd& K, int pairs) {
    const auto V = basis.eigenvectors.leftCols(pairs);
    Eigen::MatrixXcd I = V.adjoint() * V;
    I.diagonal().array() -= 1.0;
    Eigen::MatrixXcd G = V.adjoint() * (K * V);
    G.diagonal() -= basis.eigenvalues.head(pairs).cast<cplx>();
    return std::max(I.cwiseAbs().maxCoeff(), G.cwiseAbs().maxCoeff());
}

void check_orthogonality() {
    constexpr double tol = 1e-9;
    constexpr int pairs = 30;
    Timer t;
    Region cap = Region::cap(rad(15));
    double dev_cap = dual_orthogonality(build_basis(cap, 32, pairs),
                                        concentration_matrix(cap, 32), pairs);
    double dev_ell = dual_orthogonality(build_basis(tilted_ellipse(), 32, pairs), g_ellipse_K, pairs);
    g_ellipse_K.resize(0, 0);
    bool ok = dev_cap < tol && dev_ell < tol;
    report(3, "dual orthogonality, 30 pairs", ok, fmt("cap %.2e, ellipse %.2e", dev_cap, dev_ell),
           t.seconds());
}

// --- 4. fast transform against the pointwise oracle -------------------------

void check_oracle_equivalence() {
    constexpr double tol = 1e-10;
    Timer t;

    SlepianBasis b8 = build_basis(Region::cap(rad(40)), 8, 1);
    HarmonicCoefficients f8 = random_coefficients(8, 11);
    SO3Signal F8 = sst_fast(f8, b8, 1);
    double worst8 = 0.0;
    const int n8 = F8.grid.n();
    for (int i = 0; i < n8; ++i)
        for (int j = 0; j < n8; ++j)
            for (int k = 0; k < n8; ++k) {
                EulerAngles rho{F8.grid.varphi[i], F8.grid.vartheta[j], F8.grid.omega[k]};
                worst8 = std::max(worst8, std::abs(F8.at(i, j, k) - sst_point(f8, b8, 1, rho)));
            }

    SlepianBasis b16 = build_basis(Region::cap(rad(40)), 16, 2);
    HarmonicCoefficients f16 = random_coefficients(16, 12);
    SO3Signal F16 = sst_fast(f16, b16, 2);
    double worst16 = 0.0;
    oracle::Rng rng(13);
    const int n16 = F16.grid.n();
    for (int s = 0; s < 64; ++s) {
        int i = int(rng.next() % n16), j = int(rng.next() % n16), k = int(rng.next() % n16);
        EulerAngles rho{F16.grid.varphi[i], F16.grid.vartheta[j], F16.grid.omega[k]};
        worst16 = std::max(worst16, std::abs(F16.at(i, j, k) - sst_point(f16, b16, 2, rho)));
    }

    bool ok = worst8 < tol && worst16 < tol && t.seconds() < 60.0;
    report(4, "fast vs pointwise oracle", ok, fmt("L=8 %.2e, L=16 %.2e", worst8, worst16),
           t.seconds());
}

// --- 5. inversion round trips -----------------------------------------------

void check_inversion() {
    constexpr double tol = 1e-9;
    Timer t;

    SlepianBasis b16 = build_basis(Region::cap(rad(40)), 16, 1);
    HarmonicCoefficients f16 = random_coefficients(16, 21);
    HarmonicCoefficients r16 = inverse_sst(sst_wigner_coefficients(f16, b16, 1), b16, 1);
    double rel16 = (r16.coeffs - f16.coeffs).norm() / f16.coeffs.norm();

    SlepianBasis zb = zonal_basis(rad(40), 32);
    HarmonicCoefficients f32 = random_coefficients(32, 22);
    HarmonicCoefficients r32 = zonal_inverse(zonal_sst_coefficients(f32, zb, 1), zb, 1);
    double rel32 = (r32.coeffs - f32.coeffs).norm() / f32.coeffs.norm();

    bool ok = rel16 < tol && rel32 < tol;
    report(5, "inversion round trips", ok, fmt("full %.2e, zonal %.2e", rel16, rel32),
           t.seconds());
}

// --- 6. tight frame ratio ----------------------------------------------------

void check_tight_frame() {
    constexpr double tol = 1e-10;
    Timer t;
    SlepianBasis zb = zonal_basis(3.0 * pi / 16.0, 16); // Shannon number 3 by construction
    double worst = 0.0;
    for (int s = 0; s < 20; ++s) {
        HarmonicCoefficients f = synthesize_background(16, 1000 + s);
        worst = std::max(worst, std::abs(tight_frame_ratio(f, zb) - 1.0));
    }
    bool ok = worst < tol && zb.n_well == 3;
    report(6, "tight frame ratio", ok, fmt("worst |ratio-1| %.2e over 20 signals", worst),
           t.seconds());
}

// --- 7. complexity scaling ---------------------------------------------------

double timed_compute_C(const HarmonicCoefficients& f, const SlepianBasis& basis) {
    // Repeat until a quarter second has accumulated so the small sizes are
    // measured above clock noise; big sizes run once.
    int reps = 0;
    Timer t;
    do {
        CCube C = compute_C(f, basis, 1);
        ++reps;
    } while (t.seconds() < 0.25);
    return t.seconds() / reps;
}

void check_complexity() {
    constexpr double slope_lo = 3.5, slope_hi = 4.5, budget = 300.0;
    Timer t;
    const std::vector<int> Ls{16, 32, 64, 128};
    std::vector<double> times;
    SlepianBasis b128;
    HarmonicCoefficients f128;
    for (int L : Ls) {
        SlepianBasis basis = build_basis(Region::cap(rad(40)), L, 1);
        HarmonicCoefficients f = synthesize_background(L, 7);
        times.push_back(timed_compute_C(f, basis));
        if (L == 128) {
            b128 = basis;
            f128 = f;
        }
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < Ls.size(); ++i) {
        double x = std::log(double(Ls[i])), y = std::log(times[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = double(Ls.size());
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

    Timer single;
    SO3Signal F = sst_fast(f128, b128, 1);
    double t128 = single.seconds();
    (void)F;

    bool ok = slope >= slope_lo && slope <= slope_hi && t128 < budget;
    report(7, "complexity scaling", ok, fmt("slope %.2f, L=128 transform %.1f s", slope, t128),
           t.seconds());
}

// --- 8. localized variation detection ----------------------------------------

// Detection lattice with rows uniform in cos(theta), so each node carries the
// same surface area and point fractions equal area fractions. On quadrature
// lattices the equator is undersampled per area by 2/pi, which caps the
// coverage fraction below the threshold no matter how sharp the map is.
SphereGrid equal_area_grid(int nt, int np) {
    SphereGrid g;
    g.bandlimit = 0;
    g.theta.resize(nt);
    g.weights.assign(nt, 0.0);
    g.phi.resize(np);
    for (int j = 0; j < nt; ++j) g.theta[j] = std::acos(1.0 - 2.0 * (j + 0.5) / nt);
    for (int k = 0; k < np; ++k) g.phi[k] = 2.0 * pi * k / np;
    return g;
}

void check_detection() {
    constexpr int need = 18, seeds = 20;
    constexpr double coverage = 0.70;
    Timer t;
    Region Rv = Region::ellipse(rad(20), rad(25), {rad(60), rad(90), rad(45)});
    SlepianBasis zb = zonal_basis(rad(15), 32);
    SphereGrid grid = equal_area_grid(32, 63);
    int argmax_hits = 0, coverage_hits = 0;
    for (int seed = 1; seed <= seeds; ++seed) {
        Ensemble ens = build_ensemble(32, 10, Rv, 20.0, seed);
        VarianceMap vm = variance_maps(ens.observations, zb, {1}, grid);
        const Eigen::MatrixXd& map = vm.maps[0];

        Eigen::Index r = 0, c = 0;
        map.maxCoeff(&r, &c);
        if (region_membership(Rv, grid.theta[r], grid.phi[c])) ++argmax_hits;

        auto mask = detect_region(map, 0.95);
        int total = 0, inside = 0;
        for (Eigen::Index i = 0; i < mask.rows(); ++i)
            for (Eigen::Index j = 0; j < mask.cols(); ++j)
                if (mask(i, j)) {
                    ++total;
                    if (region_membership_dilated(Rv, grid.theta[i], grid.phi[j], rad(5)))
                        ++inside;
                }
        if (total > 0 && double(inside) >= coverage * double(total)) ++coverage_hits;
    }
    bool ok = argmax_hits >= need && coverage_hits >= need && t.seconds() < 600.0;
    report(8, "localized variation detection", ok,
           fmt("argmax %.0f/20, coverage %.0f/20", double(argmax_hits), double(coverage_hits)),
           t.seconds());
}

// --- 9. background cancellation ----------------------------------------------

void check_cancellation() {
    constexpr double tol = 1e-12;
    Timer t;
    double worst = 0.0;
    for (std::uint64_t seed : {3ull, 14ull}) {
        Ensemble ens = build_ensemble(16, 6, Region::cap(rad(30)), 15.0, seed);
        SlepianBasis zb = zonal_basis(rad(20), 16);
        SphereGrid grid = build_grid(16);
        VarianceMap from_obs = variance_maps(ens.observations, zb, {1, 2}, grid);
        VarianceMap from_var = variance_maps(ens.variations, zb, {1, 2}, grid);
        for (std::size_t a = 0; a < from_obs.maps.size(); ++a)
            worst = std::max(worst,
                             (from_obs.maps[a] - from_var.maps[a]).cwiseAbs().maxCoeff());
    }
    bool ok = worst < tol;
    report(9, "background cancellation", ok, fmt("worst map deviation %.2e", worst), t.seconds());
}

} // namespace

int main() {
    std::printf("spatial-Slepian transform acceptance\n");
    check_shannon();
    check_trace();
    check_orthogonality();
    check_oracle_equivalence();
    check_inversion();
    check_tight_frame();
    check_complexity();
    check_detection();
    check_cancellation();
    std::printf("%d/9 passed\n", 9 - failures);
    return failures;
}
