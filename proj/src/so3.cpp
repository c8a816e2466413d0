#include "sst/so3.hpp"

#include <numbers>
#include <stdexcept>

namespace sst {

SO3Grid build_so3_grid(int L) {
    if (L < 1) throw std::invalid_argument("build_so3_grid: bandlimit must be positive");
    SO3Grid g;
    g.bandlimit = L;
    const int n = 2 * L - 1;
    g.varphi.resize(n);
    for (int j = 0; j < n; ++j) g.varphi[j] = 2.0 * std::numbers::pi * j / n;
    g.vartheta = g.varphi;
    g.omega = g.varphi;
    return g;
}

} // namespace sst
