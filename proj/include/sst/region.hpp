#pragma once

#include "sst/geometry.hpp"
#include "sst/sht.hpp"

namespace sst {

/// Spatial localization region: a polar cap theta <= Theta_c, or a spherical
/// ellipse (geodesic-distance-sum locus: d(x, F+) + d(x, F-) <= 2a for foci at
/// colatitude theta_c on the x-z great circle, then rotated by `rotation`).
struct Region {
    enum class Kind { polar_cap, spherical_ellipse };

    Kind kind = Kind::polar_cap;
    double cap_theta = 0.0;      // polar cap: Theta_c in (0, pi]
    double theta_c = 0.0;        // ellipse: focus colatitude
    double a = 0.0;              // ellipse: semi-major arc length, theta_c < a < pi/2
    EulerAngles rotation{};      // ellipse orientation (identity for caps)

    static Region cap(double Theta_c);
    static Region ellipse(double theta_c, double a, const EulerAngles& rotation = {});

    /// Semi-minor arc length b = arccos(cos a / cos theta_c) (ellipse only).
    double semi_minor() const;
};

bool region_membership(const Region& R, double theta, double phi);

/// Membership in the region grown by delta: caps grow Theta_c by delta; the
/// ellipse grows the focal-sum bound to 2(a + delta), which contains every
/// point within geodesic distance delta of the ellipse.
bool region_membership_dilated(const Region& R, double theta, double phi, double delta);

/// Half-width (in [0, pi/2]) of the phi-arc around phi = 0 cut out of the
/// colatitude ring theta by the *unrotated* ellipse. The ring intersection is
/// {|phi| <= hw} union {|phi - pi| <= hw}, total measure 4*hw; full rings
/// (theta <= b) report pi/2 and empty rings (theta > a) report 0.
double ellipse_ring_halfwidth(const Region& R, double theta);

/// Surface area. Caps use the closed form 2 pi (1 - cos Theta_c); the ellipse
/// integrates exact per-ring arc measures over colatitude (rotation-invariant),
/// with quadrature effort scaled by L_quad.
double region_area(const Region& R, int L_quad);

/// <s, t> restricted to R by masking the grid quadrature. Boundary rings are
/// resolved only to the grid spacing, so accuracy is limited accordingly.
cplx inner_product_region(const SphereSignal& s, const SphereSignal& t, const Region& R);

} // namespace sst
