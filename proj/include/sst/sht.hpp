#pragma once

#include <Eigen/Dense>

#include "sst/grid.hpp"
#include "sst/harmonics.hpp"

namespace sst {

/// Samples over a SphereGrid, values(i, k) at (theta_i, phi_k).
struct SphereSignal {
    SphereGrid grid;
    Eigen::MatrixXcd values;

    SphereSignal() = default;
    explicit SphereSignal(SphereGrid g)
        : grid(std::move(g)), values(Eigen::MatrixXcd::Zero(grid.n_theta(), grid.n_phi())) {}
};

/// <s, Y_l^m> for all l < L via longitude DFT + Gauss-Legendre colatitude sums.
/// Exact for signals band-limited to L when the grid satisfies
/// n_theta >= L, n_phi >= 2L-1 (grid_mismatch_error otherwise).
HarmonicCoefficients sht_forward(const SphereSignal& s, int L);

/// Synthesis of the band-limited signal on the given grid.
SphereSignal sht_inverse(const HarmonicCoefficients& c, const SphereGrid& grid);

/// <s, t> = integral of s * conj(t); both signals must share one grid.
cplx inner_product(const SphereSignal& s, const SphereSignal& t);

/// Spectral-side <f, h> = sum_lm (f)_l^m conj((h)_l^m).
cplx inner_product(const HarmonicCoefficients& f, const HarmonicCoefficients& h);

} // namespace sst
