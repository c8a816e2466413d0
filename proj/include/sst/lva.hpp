#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "sst/slepian.hpp"
#include "sst/so3.hpp"
#include "sst/transform.hpp"

namespace sst {

/// Synthetic observation set for localized variation analysis:
/// observation_j = background + variation_j coefficient-wise, each variation
/// rescaled so the background-to-variation ratio hits the target exactly.
struct Ensemble {
    int bandlimit = 0;
    int count = 0; // N
    std::uint64_t seed = 0;
    HarmonicCoefficients background;
    std::vector<HarmonicCoefficients> variations;
    std::vector<HarmonicCoefficients> observations;
};

/// Per-scale sample-variance maps over the spherical detection domain.
struct VarianceMap {
    SphereGrid grid;
    std::vector<int> scales;            // window scale alpha per layer
    std::vector<Eigen::MatrixXd> maps;  // same shape as the grid, values >= 0
};

/// Zero-mean Gaussian background: every coefficient with l >= 1 draws
/// independent standard normals for both components, (b)_0^0 is real
/// standard normal. Draws occur in flat coefficient order (real before
/// imaginary), so a seed pins the signal bit-exactly.
HarmonicCoefficients synthesize_background(int L, std::uint64_t seed);

/// Region-localized variation v = sum_{beta<=n_well} a_beta g_beta with
/// i.i.d. standard normal scalars a_beta, drawn in scale order.
HarmonicCoefficients synthesize_variation(const SlepianBasis& basis, std::uint64_t seed);

/// Background-to-variation ratio 10 log10(|b|^2 / |v|^2) in dB;
/// invalid_argument on a zero variation.
double bvr(const HarmonicCoefficients& b, const HarmonicCoefficients& v);

/// One background plus N variations synthesized over the variation region,
/// each rescaled to the target BVR; sub-seeds derive deterministically from
/// the master seed (stream 0 = background, stream j = variation j).
Ensemble build_ensemble(int L, int N, const Region& variation_region, double target_bvr_db,
                        std::uint64_t seed);

/// Pointwise biased sample variance (1/N) sum_j |z_j - mean|^2 of a stack of
/// sphere signals on one common grid.
Eigen::MatrixXd sample_variance(const std::vector<SphereSignal>& stack);

/// Same for rotation-group cubes.
std::vector<double> sample_variance(const std::vector<SO3Signal>& stack);

/// Zonal-window variance maps of a coefficient stack: each member is pushed
/// through the zonal transform at every requested scale and the stack's
/// sample variance is taken pointwise. Feeding observations or variations
/// gives identical maps (the common background cancels in the deviations).
VarianceMap variance_maps(const std::vector<HarmonicCoefficients>& stack,
                          const SlepianBasis& zonal_window, const std::vector<int>& scales,
                          const SphereGrid& grid);

/// Grid points strictly above the q-quantile of the map (quantile by sorted
/// rank floor(q (n-1)); a constant map yields an empty mask).
Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> detect_region(const Eigen::MatrixXd& map,
                                                                 double q);

} // namespace sst
