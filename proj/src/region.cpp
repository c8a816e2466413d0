#include "sst/region.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sst/errors.hpp"
#include "sst/grid.hpp"

namespace sst {

namespace {

constexpr double pi = std::numbers::pi;

/// Focal-distance sum of the unrotated ellipse at (theta, phi).
double focal_sum(double theta_c, double theta, double phi) {
    double A = std::cos(theta) * std::cos(theta_c);
    double B = std::sin(theta) * std::sin(theta_c);
    double u = std::cos(phi);
    return std::acos(std::clamp(A + B * u, -1.0, 1.0)) +
           std::acos(std::clamp(A - B * u, -1.0, 1.0));
}

/// Colatitude/longitude of the point carried back by the inverse rotation.
void unrotate(const Region& R, double& theta, double& phi) {
    Mat3 rinv = transpose(rotation_matrix(R.rotation));
    cartesian_to_spherical(matvec(rinv, spherical_to_cartesian(theta, phi)), theta, phi);
}

bool ellipse_member(const Region& R, double theta, double phi, double a_eff) {
    unrotate(R, theta, phi);
    return focal_sum(R.theta_c, theta, phi) <= 2.0 * a_eff;
}

} // namespace

Region Region::cap(double Theta_c) {
    if (!(Theta_c > 0.0 && Theta_c <= pi))
        throw std::invalid_argument("Region::cap: Theta_c must lie in (0, pi]");
    Region r;
    r.kind = Kind::polar_cap;
    r.cap_theta = Theta_c;
    return r;
}

Region Region::ellipse(double theta_c, double a, const EulerAngles& rotation) {
    if (!(theta_c > 0.0 && theta_c < a && a < pi / 2))
        throw std::invalid_argument("Region::ellipse: require 0 < theta_c < a < pi/2");
    Region r;
    r.kind = Kind::spherical_ellipse;
    r.theta_c = theta_c;
    r.a = a;
    r.rotation = rotation;
    return r;
}

double Region::semi_minor() const {
    return std::acos(std::cos(a) / std::cos(theta_c));
}

bool region_membership(const Region& R, double theta, double phi) {
    if (R.kind == Region::Kind::polar_cap) return theta <= R.cap_theta;
    return ellipse_member(R, theta, phi, R.a);
}

bool region_membership_dilated(const Region& R, double theta, double phi, double delta) {
    if (delta < 0.0) throw std::invalid_argument("region_membership_dilated: delta must be >= 0");
    if (R.kind == Region::Kind::polar_cap) return theta <= std::min(R.cap_theta + delta, pi);
    return ellipse_member(R, theta, phi, R.a + delta);
}

double ellipse_ring_halfwidth(const Region& R, double theta) {
    // On a fixed ring the focal sum rises monotonically in phi from
    // 2 max(theta, theta_c) at phi = 0 to its maximum at phi = pi/2, so the
    // boundary crossing is a clean bisection target.
    if (theta > R.a) return 0.0;
    if (focal_sum(R.theta_c, theta, pi / 2) <= 2.0 * R.a) return pi / 2;
    double lo = 0.0, hi = pi / 2;
    for (int it = 0; it < 64; ++it) {
        double mid = 0.5 * (lo + hi);
        (focal_sum(R.theta_c, theta, mid) <= 2.0 * R.a ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double region_area(const Region& R, int L_quad) {
    if (L_quad < 1) throw std::invalid_argument("region_area: L_quad must be >= 1");
    if (R.kind == Region::Kind::polar_cap) return 2.0 * pi * (1.0 - std::cos(R.cap_theta));

    // Full rings up to the semi-minor colatitude b in closed form, then the
    // two-arc band [b, a]. The arc half-width behaves like a square root at
    // both band edges, so the cubic map theta(t) with vanishing slope at the
    // endpoints restores fast Gauss-Legendre convergence.
    double b = R.semi_minor();
    double area = 2.0 * pi * (1.0 - std::cos(b));
    auto rule = gauss_legendre(std::max(64, 2 * L_quad));
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double t = 0.5 * (rule.nodes[i] + 1.0);
        double theta = b + (R.a - b) * t * t * (3.0 - 2.0 * t);
        double jac = 0.5 * (R.a - b) * 6.0 * t * (1.0 - t);
        area += rule.weights[i] * jac * 4.0 * ellipse_ring_halfwidth(R, theta) * std::sin(theta);
    }
    return area;
}

cplx inner_product_region(const SphereSignal& s, const SphereSignal& t, const Region& R) {
    if (s.grid.theta != t.grid.theta || s.grid.phi != t.grid.phi)
        throw grid_mismatch_error("inner_product_region: signals on different grids");
    const auto& g = s.grid;
    double dphi = 2.0 * pi / static_cast<double>(g.phi.size());
    cplx acc = 0.0;
    for (std::size_t i = 0; i < g.theta.size(); ++i) {
        cplx row = 0.0;
        for (std::size_t k = 0; k < g.phi.size(); ++k)
            if (region_membership(R, g.theta[i], g.phi[k]))
                row += s.values(i, k) * std::conj(t.values(i, k));
        acc += g.weights[i] * dphi * row;
    }
    return acc;
}

} // namespace sst
