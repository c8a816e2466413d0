#include "sst/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sst {

GaussLegendreRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton on P_n with the usual asymptotic initial guess; nodes come in
    // +/- pairs so only the non-negative half is iterated.
    int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[n - 1 - i] = x; // positive node at the descending-index end
        rule.nodes[i] = -x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

SphereGrid build_grid(int L) { return build_grid(L, L, 2 * L - 1); }

SphereGrid build_grid(int L, int n_theta, int n_phi) {
    if (L < 1) throw std::invalid_argument("build_grid: bandlimit must be positive");
    if (n_theta < L || n_phi < 2 * L - 1)
        throw std::invalid_argument("build_grid: grid undersampled for bandlimit");
    SphereGrid g;
    g.bandlimit = L;
    GaussLegendreRule rule = gauss_legendre(n_theta);
    g.theta.resize(n_theta);
    g.weights.resize(n_theta);
    for (int i = 0; i < n_theta; ++i) {
        // rule.nodes ascend in x; theta = acos(x) ascends when x descends
        double x = rule.nodes[n_theta - 1 - i];
        g.theta[i] = std::acos(x);
        g.weights[i] = rule.weights[n_theta - 1 - i];
    }
    g.phi.resize(n_phi);
    for (int k = 0; k < n_phi; ++k) g.phi[k] = 2.0 * std::numbers::pi * k / n_phi;
    return g;
}

} // namespace sst
