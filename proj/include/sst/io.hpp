#pragma once

#include <string>

#include <json.hpp>

#include "sst/lva.hpp"
#include "sst/sht.hpp"
#include "sst/slepian.hpp"
#include "sst/so3.hpp"
#include "sst/version.hpp"
#include "sst/wigner.hpp"

namespace sst {

/// All binary formats share one envelope: a single-line JSON header
/// terminated by '\n', then raw little-endian float64 payload (complex data
/// interleaved re, im). Writers merge `extra` into the header (config echo);
/// every header carries a "version" field. Any structural problem raises
/// io_error.

/// {bandlimit, n_theta, n_phi, dtype:"c64le-interleaved", order:"theta-major",
///  grid:"gauss-legendre"|"equiangular"} + values row-major by theta ring.
/// Gauss-Legendre grids are rebuilt from (bandlimit, n_theta, n_phi) on read;
/// equiangular grids use theta_j = pi (j + 1/2) / n_theta and carry no
/// quadrature weights.
void write_sphere_signal(const std::string& path, const SphereSignal& s,
                         const nlohmann::json& extra = nlohmann::json::object());
SphereSignal read_sphere_signal(const std::string& path);

/// Plain-text export/ingest: a "# {json}" provenance line (version + extra),
/// a header row "theta,phi,re,im", then one row per grid point, theta-major,
/// full round-trip precision.
void write_sphere_signal_csv(const std::string& path, const SphereSignal& s,
                             const nlohmann::json& extra = nlohmann::json::object());
/// Accepts 3-column (theta,phi,value) real or 4-column complex data laid out
/// as a rectangular theta-major lattice; "#" comment lines are skipped.
SphereSignal read_sphere_signal_csv(const std::string& path);

/// {bandlimit, dtype, order:"flat l^2+l+m"} + L^2 complex coefficients.
void write_harmonic_coefficients(const std::string& path, const HarmonicCoefficients& c,
                                 const nlohmann::json& extra = nlohmann::json::object());
HarmonicCoefficients read_harmonic_coefficients(const std::string& path);

/// {bandlimit, region:{...}, zonal, shannon, n_well, n_stored, dtype} +
/// eigenvalues (n_stored f64) + eigenvector columns (column-major complex).
/// store_first < 0 stores min(n_well, n_stored) columns.
void write_basis(const std::string& path, const SlepianBasis& basis, int store_first = -1,
                 const nlohmann::json& extra = nlohmann::json::object());
SlepianBasis read_basis(const std::string& path);

/// {bandlimit, alpha, axes:"varphi,vartheta,omega", n:2L-1, dtype} + cube.
void write_so3_signal(const std::string& path, const SO3Signal& F,
                      const nlohmann::json& extra = nlohmann::json::object());
SO3Signal read_so3_signal(const std::string& path);

/// {bandlimit, dtype:"f64le", layout:"ell-major triangular"} + quadrant table.
void write_delta_cache(const std::string& path, const DeltaTable& table);
DeltaTable read_delta_cache(const std::string& path);

/// Real-valued sphere map (variance layers): the sphere-signal header with
/// dtype:"f64le" plus the window scale alpha.
void write_variance_map(const std::string& path, const SphereGrid& grid,
                        const Eigen::MatrixXd& map, int alpha,
                        const nlohmann::json& extra = nlohmann::json::object());
Eigen::MatrixXd read_variance_map(const std::string& path, SphereGrid* grid = nullptr,
                                  int* alpha = nullptr);

/// Detection mask as CSV rows "i_theta,i_phi" (provenance and header rows
/// included), one row per flagged grid point in theta-major order.
void write_mask_csv(const std::string& path,
                    const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& mask,
                    const nlohmann::json& extra = nlohmann::json::object());

} // namespace sst
