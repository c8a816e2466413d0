#pragma once

#include <vector>

namespace sst {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// exact for polynomials of degree <= 2n-1. Nodes ascend.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int n);

/// Sampling grid for band-limited sphere signals: n_theta Gauss-Legendre
/// colatitudes (theta = acos(x), descending x so theta ascends) crossed with
/// n_phi uniform longitudes starting at phi = 0.
struct SphereGrid {
    int bandlimit = 0; // grid was built for this L; 0 for ad-hoc grids
    std::vector<double> theta;   // colatitude nodes, ascending in theta
    std::vector<double> weights; // Gauss-Legendre weights in x = cos(theta)
    std::vector<double> phi;     // uniform longitudes

    int n_theta() const { return static_cast<int>(theta.size()); }
    int n_phi() const { return static_cast<int>(phi.size()); }
};

/// Quadrature grid with L colatitudes and 2L-1 longitudes; together with the
/// Gauss-Legendre weights it integrates products of two degree-(L-1) signals
/// exactly.
SphereGrid build_grid(int L);

/// Same layout with n_theta >= L colatitude nodes (oversampled analysis grid).
SphereGrid build_grid(int L, int n_theta, int n_phi);

} // namespace sst
