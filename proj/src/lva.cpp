#include "sst/lva.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "sst/errors.hpp"

namespace sst {

namespace {

/// splitmix64 of seed + stream: decorrelated engine seeds per component.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

HarmonicCoefficients synthesize_background(int L, std::uint64_t seed) {
    if (L < 1) throw std::invalid_argument("synthesize_background: bandlimit must be positive");
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> normal;
    HarmonicCoefficients b(L);
    b.coeffs(0) = normal(eng);
    for (int i = 1; i < L * L; ++i) {
        double re = normal(eng);
        double im = normal(eng);
        b.coeffs(i) = cplx(re, im);
    }
    return b;
}

HarmonicCoefficients synthesize_variation(const SlepianBasis& basis, std::uint64_t seed) {
    const int n = basis.n_well;
    if (n > basis.n_stored())
        throw std::invalid_argument(
            "synthesize_variation: basis stores fewer columns than its well-concentrated count");
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> normal;
    Eigen::VectorXd a(n);
    for (int beta = 0; beta < n; ++beta) a(beta) = normal(eng);

    HarmonicCoefficients v(basis.bandlimit);
    v.coeffs = basis.eigenvectors.leftCols(n) * a.cast<cplx>();
    return v;
}

double bvr(const HarmonicCoefficients& b, const HarmonicCoefficients& v) {
    double vn = v.norm_sq();
    if (vn == 0.0) throw std::invalid_argument("bvr: zero variation");
    return 10.0 * std::log10(b.norm_sq() / vn);
}

Ensemble build_ensemble(int L, int N, const Region& variation_region, double target_bvr_db,
                        std::uint64_t seed) {
    if (N < 1) throw std::invalid_argument("build_ensemble: need at least one instance");
    SlepianBasis basis = build_basis(variation_region, L);

    Ensemble e;
    e.bandlimit = L;
    e.count = N;
    e.seed = seed;
    e.background = synthesize_background(L, sub_seed(seed, 0));
    const double b_energy = e.background.norm_sq();

    e.variations.reserve(N);
    e.observations.reserve(N);
    for (int j = 1; j <= N; ++j) {
        HarmonicCoefficients v = synthesize_variation(basis, sub_seed(seed, j));
        double vn = v.norm_sq();
        if (vn == 0.0) throw numerical_error("build_ensemble: degenerate zero variation");
        // after scaling, |b|^2 / |v|^2 = 10^(target/10) exactly
        v.coeffs *= std::sqrt(b_energy / (vn * std::pow(10.0, target_bvr_db / 10.0)));
        HarmonicCoefficients f(L);
        f.coeffs = e.background.coeffs + v.coeffs;
        e.variations.push_back(std::move(v));
        e.observations.push_back(std::move(f));
    }
    return e;
}

Eigen::MatrixXd sample_variance(const std::vector<SphereSignal>& stack) {
    if (stack.empty()) throw std::invalid_argument("sample_variance: empty stack");
    const int nt = stack[0].grid.n_theta(), np = stack[0].grid.n_phi();
    for (const SphereSignal& s : stack)
        if (s.grid.n_theta() != nt || s.grid.n_phi() != np)
            throw grid_mismatch_error("sample_variance: stack entries on different grids");

    // shifted two-pass: deviations relative to the first member keep the
    // all-identical case exactly zero and avoid large-mean cancellation
    const double inv_n = 1.0 / static_cast<double>(stack.size());
    Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(nt, np);
    for (const SphereSignal& s : stack) mean += s.values - stack[0].values;
    mean *= inv_n;

    Eigen::MatrixXd var = Eigen::MatrixXd::Zero(nt, np);
    for (const SphereSignal& s : stack) var += (s.values - stack[0].values - mean).cwiseAbs2();
    return var * inv_n;
}

std::vector<double> sample_variance(const std::vector<SO3Signal>& stack) {
    if (stack.empty()) throw std::invalid_argument("sample_variance: empty stack");
    const std::size_t size = stack[0].values.size();
    for (const SO3Signal& s : stack)
        if (s.values.size() != size || s.grid.bandlimit != stack[0].grid.bandlimit)
            throw grid_mismatch_error("sample_variance: stack entries on different grids");

    const double inv_n = 1.0 / static_cast<double>(stack.size());
    const std::vector<cplx>& anchor = stack[0].values;
    std::vector<cplx> mean(size, cplx(0.0));
    for (const SO3Signal& s : stack)
        for (std::size_t i = 0; i < size; ++i) mean[i] += s.values[i] - anchor[i];
    for (cplx& m : mean) m *= inv_n;

    std::vector<double> var(size, 0.0);
    for (const SO3Signal& s : stack)
        for (std::size_t i = 0; i < size; ++i)
            var[i] += std::norm(s.values[i] - anchor[i] - mean[i]);
    for (double& v : var) v *= inv_n;
    return var;
}

VarianceMap variance_maps(const std::vector<HarmonicCoefficients>& stack,
                          const SlepianBasis& zonal_window, const std::vector<int>& scales,
                          const SphereGrid& grid) {
    if (stack.empty()) throw std::invalid_argument("variance_maps: empty stack");
    VarianceMap out;
    out.grid = grid;
    out.scales = scales;
    out.maps.reserve(scales.size());
    for (int alpha : scales) {
        std::vector<SphereSignal> layer;
        layer.reserve(stack.size());
        for (const HarmonicCoefficients& f : stack)
            layer.push_back(zonal_sst(f, zonal_window, alpha, grid));
        out.maps.push_back(sample_variance(layer));
    }
    return out;
}

Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> detect_region(const Eigen::MatrixXd& map,
                                                                 double q) {
    if (!(q > 0.0 && q < 1.0))
        throw std::invalid_argument("detect_region: quantile must lie in (0, 1)");
    std::vector<double> sorted(map.data(), map.data() + map.size());
    std::sort(sorted.begin(), sorted.end());
    const auto rank =
        static_cast<std::size_t>(std::floor(q * static_cast<double>(sorted.size() - 1)));
    const double threshold = sorted[rank];
    return map.array() > threshold;
}

} // namespace sst
