#include "sst/io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "sst/errors.hpp"
#include "sst/grid.hpp"

namespace sst {

namespace {

using nlohmann::json;

constexpr const char* dtype_complex = "c64le-interleaved";
constexpr const char* dtype_real = "f64le";

json header_base(const char* dtype, const json& extra) {
    json h = extra.is_object() ? extra : json::object();
    h["version"] = library_version;
    h["dtype"] = dtype;
    return h;
}

json csv_provenance(const json& extra) {
    json h = extra.is_object() ? extra : json::object();
    h["version"] = library_version;
    return h;
}

void write_header_and_payload(const std::string& path, const json& header,
                              const std::vector<double>& payload) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw io_error("cannot open for writing: " + path);
    os << header.dump() << '\n';
    os.write(reinterpret_cast<const char*>(payload.data()),
             static_cast<std::streamsize>(payload.size() * sizeof(double)));
    if (!os) throw io_error("write failed: " + path);
}

json read_header(std::ifstream& is, const std::string& path) {
    std::string line;
    if (!std::getline(is, line)) throw io_error("missing header line: " + path);
    json h = json::parse(line, nullptr, false);
    if (h.is_discarded() || !h.is_object()) throw io_error("malformed header: " + path);
    return h;
}

std::vector<double> read_payload(std::ifstream& is, std::size_t count, const std::string& path) {
    std::vector<double> data(count);
    is.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (static_cast<std::size_t>(is.gcount()) != count * sizeof(double))
        throw io_error("payload shorter than the header promises: " + path);
    if (is.peek() != std::ifstream::traits_type::eof())
        throw io_error("trailing bytes after payload: " + path);
    return data;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("cannot open: " + path);
    return is;
}

template <typename T>
T field(const json& h, const char* key, const std::string& path) {
    auto it = h.find(key);
    if (it == h.end()) throw io_error(std::string("header misses \"") + key + "\": " + path);
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw io_error(std::string("header field \"") + key + "\" has the wrong type: " + path);
    }
}

void expect(const json& h, const char* key, const std::string& want, const std::string& path) {
    if (field<std::string>(h, key, path) != want)
        throw io_error(std::string("unsupported ") + key + " (want " + want + "): " + path);
}

json region_to_json(const Region& R) {
    if (R.kind == Region::Kind::polar_cap) return {{"kind", "cap"}, {"Theta_c", R.cap_theta}};
    return {{"kind", "ellipse"},
            {"theta_c", R.theta_c},
            {"a", R.a},
            {"rotation", {R.rotation.varphi, R.rotation.vartheta, R.rotation.omega}}};
}

Region region_from_json(const json& j, const std::string& path) {
    std::string kind = field<std::string>(j, "kind", path);
    if (kind == "cap") return Region::cap(field<double>(j, "Theta_c", path));
    if (kind == "ellipse") {
        auto rot = field<std::vector<double>>(j, "rotation", path);
        if (rot.size() != 3) throw io_error("region rotation needs three angles: " + path);
        return Region::ellipse(field<double>(j, "theta_c", path), field<double>(j, "a", path),
                               {rot[0], rot[1], rot[2]});
    }
    throw io_error("unknown region kind \"" + kind + "\": " + path);
}

void append_complex(std::vector<double>& buf, const cplx& z) {
    buf.push_back(z.real());
    buf.push_back(z.imag());
}

json sphere_header(const SphereGrid& grid, const char* dtype, bool equiangular,
                   const json& extra) {
    json h = header_base(dtype, extra);
    h["bandlimit"] = grid.bandlimit;
    h["n_theta"] = grid.n_theta();
    h["n_phi"] = grid.n_phi();
    h["order"] = "theta-major";
    h["grid"] = equiangular ? "equiangular" : "gauss-legendre";
    return h;
}

bool looks_equiangular(const SphereGrid& grid) {
    const int nt = grid.n_theta();
    for (int j = 0; j < nt; ++j)
        if (std::abs(grid.theta[j] - std::numbers::pi * (j + 0.5) / nt) > 1e-12) return false;
    return true;
}

/// The binary header only stores (bandlimit, n_theta, n_phi, grid kind), so a
/// grid is writable iff the reader can rebuild it from those: either the
/// equiangular lattice or the Gauss-Legendre grid of the same dimensions.
bool reproducible_gauss_legendre(const SphereGrid& grid) {
    if (grid.bandlimit < 1 || grid.n_theta() < grid.bandlimit ||
        grid.n_phi() < 2 * grid.bandlimit - 1)
        return false;
    SphereGrid ref = build_grid(grid.bandlimit, grid.n_theta(), grid.n_phi());
    return ref.theta == grid.theta && ref.weights == grid.weights && ref.phi == grid.phi;
}

SphereGrid grid_from_header(const json& h, const std::string& path) {
    const int L = field<int>(h, "bandlimit", path);
    const int nt = field<int>(h, "n_theta", path);
    const int np = field<int>(h, "n_phi", path);
    if (nt < 1 || np < 1) throw io_error("empty grid: " + path);
    const std::string kind = h.contains("grid") ? field<std::string>(h, "grid", path)
                                                : std::string("gauss-legendre");
    if (kind == "gauss-legendre") {
        if (L < 1 || nt < L || np < 2 * L - 1)
            throw io_error("gauss-legendre grid undersampled for its bandlimit: " + path);
        return build_grid(L, nt, np);
    }
    if (kind != "equiangular") throw io_error("unknown grid kind \"" + kind + "\": " + path);
    SphereGrid g;
    g.bandlimit = L;
    g.theta.resize(nt);
    for (int j = 0; j < nt; ++j) g.theta[j] = std::numbers::pi * (j + 0.5) / nt;
    g.weights.assign(nt, 0.0);
    g.phi.resize(np);
    for (int k = 0; k < np; ++k) g.phi[k] = 2.0 * std::numbers::pi * k / np;
    return g;
}

} // namespace

void write_sphere_signal(const std::string& path, const SphereSignal& s, const json& extra) {
    const bool equi = looks_equiangular(s.grid);
    if (!equi && !reproducible_gauss_legendre(s.grid))
        throw io_error("grid is neither equiangular nor a rebuildable quadrature grid: " + path);
    json h = sphere_header(s.grid, dtype_complex, equi, extra);
    std::vector<double> buf;
    buf.reserve(static_cast<std::size_t>(s.values.size()) * 2);
    for (int i = 0; i < s.grid.n_theta(); ++i)
        for (int k = 0; k < s.grid.n_phi(); ++k) append_complex(buf, s.values(i, k));
    write_header_and_payload(path, h, buf);
}

SphereSignal read_sphere_signal(const std::string& path) {
    std::ifstream is = open_input(path);
    json h = read_header(is, path);
    expect(h, "dtype", dtype_complex, path);
    expect(h, "order", "theta-major", path);
    SphereGrid grid = grid_from_header(h, path);
    const int nt = grid.n_theta(), np = grid.n_phi();
    std::vector<double> data = read_payload(is, static_cast<std::size_t>(nt) * np * 2, path);
    SphereSignal s(std::move(grid));
    std::size_t idx = 0;
    for (int i = 0; i < nt; ++i)
        for (int k = 0; k < np; ++k) {
            s.values(i, k) = cplx(data[idx], data[idx + 1]);
            idx += 2;
        }
    return s;
}

void write_sphere_signal_csv(const std::string& path, const SphereSignal& s, const json& extra) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw io_error("cannot open for writing: " + path);
    os << "# " << csv_provenance(extra).dump() << '\n';
    os << "theta,phi,re,im\n" << std::setprecision(17);
    for (int i = 0; i < s.grid.n_theta(); ++i)
        for (int k = 0; k < s.grid.n_phi(); ++k)
            os << s.grid.theta[i] << ',' << s.grid.phi[k] << ',' << s.values(i, k).real() << ','
               << s.values(i, k).imag() << '\n';
    if (!os) throw io_error("write failed: " + path);
}

SphereSignal read_sphere_signal_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw io_error("cannot open: " + path);
    std::vector<double> theta, phi;
    std::vector<cplx> vals;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::vector<double> cols;
        std::string cell;
        bool numeric = true;
        while (std::getline(row, cell, ',')) {
            try {
                std::size_t pos = 0;
                double v = std::stod(cell, &pos);
                if (pos != cell.size()) throw std::invalid_argument(cell);
                cols.push_back(v);
            } catch (const std::exception&) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (first) {
                first = false;
                continue; // header row
            }
            throw io_error("non-numeric row in " + path + ": " + line);
        }
        first = false;
        if (cols.size() != 3 && cols.size() != 4)
            throw io_error("rows must be theta,phi,re[,im]: " + path);
        theta.push_back(cols[0]);
        phi.push_back(cols[1]);
        vals.emplace_back(cols[2], cols.size() == 4 ? cols[3] : 0.0);
    }
    if (vals.empty()) throw io_error("no data rows: " + path);

    // theta-major rectangular lattice: ring length = run of the first theta
    std::size_t np = 1;
    while (np < theta.size() && theta[np] == theta[0]) ++np;
    if (theta.size() % np != 0)
        throw io_error("grid is not rectangular (ragged theta rings): " + path);
    const std::size_t nt = theta.size() / np;
    SphereGrid g;
    g.bandlimit = 0;
    g.theta.resize(nt);
    g.weights.assign(nt, 0.0);
    g.phi.assign(phi.begin(), phi.begin() + static_cast<std::ptrdiff_t>(np));
    for (std::size_t i = 0; i < nt; ++i) {
        g.theta[i] = theta[i * np];
        for (std::size_t k = 0; k < np; ++k) {
            if (theta[i * np + k] != g.theta[i] || phi[i * np + k] != g.phi[k])
                throw io_error("grid is not a consistent theta-major lattice: " + path);
        }
    }
    SphereSignal s(std::move(g));
    for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t k = 0; k < np; ++k)
            s.values(static_cast<int>(i), static_cast<int>(k)) = vals[i * np + k];
    return s;
}

void write_harmonic_coefficients(const std::string& path, const HarmonicCoefficients& c,
                                 const json& extra) {
    if (c.bandlimit < 1) throw io_error("cannot write empty coefficients: " + path);
    json h = header_base(dtype_complex, extra);
    h["bandlimit"] = c.bandlimit;
    h["order"] = "flat l^2+l+m";
    std::vector<double> buf;
    buf.reserve(static_cast<std::size_t>(c.coeffs.size()) * 2);
    for (Eigen::Index i = 0; i < c.coeffs.size(); ++i) append_complex(buf, c.coeffs(i));
    write_header_and_payload(path, h, buf);
}

HarmonicCoefficients read_harmonic_coefficients(const std::string& path) {
    std::ifstream is = open_input(path);
    json h = read_header(is, path);
    expect(h, "dtype", dtype_complex, path);
    expect(h, "order", "flat l^2+l+m", path);
    const int L = field<int>(h, "bandlimit", path);
    if (L < 1) throw io_error("bandlimit must be positive: " + path);
    std::vector<double> data = read_payload(is, static_cast<std::size_t>(L) * L * 2, path);
    HarmonicCoefficients c(L);
    for (int i = 0; i < L * L; ++i) c.coeffs(i) = cplx(data[2 * i], data[2 * i + 1]);
    return c;
}

void write_basis(const std::string& path, const SlepianBasis& basis, int store_first,
                 const json& extra) {
    int k = store_first < 0 ? std::min(basis.n_well, basis.n_stored()) : store_first;
    if (k < 1 || k > basis.n_stored())
        throw io_error("store-first count outside the stored columns: " + path);
    json h = header_base(dtype_complex, extra);
    h["bandlimit"] = basis.bandlimit;
    h["region"] = region_to_json(basis.region);
    h["zonal"] = basis.zonal;
    h["shannon"] = basis.shannon;
    h["n_well"] = basis.n_well;
    h["n_stored"] = k;
    h["layout"] = "eigenvalues then column-major eigenvector columns";

    const Eigen::Index rows = basis.eigenvectors.rows();
    std::vector<double> buf;
    buf.reserve(static_cast<std::size_t>(k) * (1 + 2 * rows));
    for (int a = 0; a < k; ++a) buf.push_back(basis.eigenvalues(a));
    for (int a = 0; a < k; ++a)
        for (Eigen::Index i = 0; i < rows; ++i) append_complex(buf, basis.eigenvectors(i, a));
    write_header_and_payload(path, h, buf);
}

SlepianBasis read_basis(const std::string& path) {
    std::ifstream is = open_input(path);
    json h = read_header(is, path);
    expect(h, "dtype", dtype_complex, path);
    const int L = field<int>(h, "bandlimit", path);
    const int k = field<int>(h, "n_stored", path);
    if (L < 1 || k < 1 || k > L * L) throw io_error("inconsistent basis dimensions: " + path);

    SlepianBasis b;
    b.bandlimit = L;
    b.region = region_from_json(field<json>(h, "region", path), path);
    b.zonal = field<bool>(h, "zonal", path);
    b.shannon = field<double>(h, "shannon", path);
    b.n_well = field<int>(h, "n_well", path);

    const std::size_t rows = static_cast<std::size_t>(L) * L;
    std::vector<double> data = read_payload(is, k + rows * 2 * k, path);
    b.eigenvalues.resize(k);
    for (int a = 0; a < k; ++a) b.eigenvalues(a) = data[a];
    b.eigenvectors.resize(static_cast<Eigen::Index>(rows), k);
    std::size_t idx = k;
    for (int a = 0; a < k; ++a)
        for (std::size_t i = 0; i < rows; ++i) {
            b.eigenvectors(static_cast<Eigen::Index>(i), a) = cplx(data[idx], data[idx + 1]);
            idx += 2;
        }
    return b;
}

void write_so3_signal(const std::string& path, const SO3Signal& F, const json& extra) {
    const int L = F.grid.bandlimit;
    if (L < 1) throw io_error("cannot write an empty rotation-group signal: " + path);
    const std::size_t n = static_cast<std::size_t>(F.grid.n());
    if (F.values.size() != n * n * n) throw io_error("cube size does not match grid: " + path);
    json h = header_base(dtype_complex, extra);
    h["bandlimit"] = L;
    h["alpha"] = F.alpha;
    h["axes"] = "varphi,vartheta,omega";
    h["n"] = F.grid.n();
    std::vector<double> buf;
    buf.reserve(F.values.size() * 2);
    for (const cplx& z : F.values) append_complex(buf, z);
    write_header_and_payload(path, h, buf);
}

SO3Signal read_so3_signal(const std::string& path) {
    std::ifstream is = open_input(path);
    json h = read_header(is, path);
    expect(h, "dtype", dtype_complex, path);
    expect(h, "axes", "varphi,vartheta,omega", path);
    const int L = field<int>(h, "bandlimit", path);
    const int n = field<int>(h, "n", path);
    if (L < 1 || n != 2 * L - 1) throw io_error("axis count must equal 2L-1: " + path);
    SO3Signal F;
    F.grid = build_so3_grid(L);
    F.alpha = field<int>(h, "alpha", path);
    if (F.alpha < 1) throw io_error("scale alpha must be positive: " + path);
    const std::size_t total = static_cast<std::size_t>(n) * n * n;
    std::vector<double> data = read_payload(is, total * 2, path);
    F.values.resize(total);
    for (std::size_t i = 0; i < total; ++i) F.values[i] = cplx(data[2 * i], data[2 * i + 1]);
    return F;
}

void write_delta_cache(const std::string& path, const DeltaTable& table) {
    json h = header_base(dtype_real, json::object());
    h["bandlimit"] = table.bandlimit();
    h["layout"] = "ell-major triangular";
    write_header_and_payload(path, h, table.raw());
}

DeltaTable read_delta_cache(const std::string& path) {
    std::ifstream is = open_input(path);
    json h = read_header(is, path);
    expect(h, "dtype", dtype_real, path);
    expect(h, "layout", "ell-major triangular", path);
    const int L = field<int>(h, "bandlimit", path);
    if (L < 1) throw io_error("bandlimit must be positive: " + path);
    std::size_t count = 0;
    for (int ell = 0; ell < L; ++ell) count += static_cast<std::size_t>(ell + 1) * (ell + 1);
    std::vector<double> data = read_payload(is, count, path);
    return DeltaTable::from_raw(L, std::move(data));
}

void write_variance_map(const std::string& path, const SphereGrid& grid,
                        const Eigen::MatrixXd& map, int alpha, const json& extra) {
    if (map.rows() != grid.n_theta() || map.cols() != grid.n_phi())
        throw io_error("map shape does not match grid: " + path);
    const bool equi = looks_equiangular(grid);
    if (!equi && !reproducible_gauss_legendre(grid))
        throw io_error("grid is neither equiangular nor a rebuildable quadrature grid: " + path);
    json h = sphere_header(grid, dtype_real, equi, extra);
    h["alpha"] = alpha;
    std::vector<double> buf;
    buf.reserve(static_cast<std::size_t>(map.size()));
    for (Eigen::Index i = 0; i < map.rows(); ++i)
        for (Eigen::Index k = 0; k < map.cols(); ++k) buf.push_back(map(i, k));
    write_header_and_payload(path, h, buf);
}

Eigen::MatrixXd read_variance_map(const std::string& path, SphereGrid* grid, int* alpha) {
    std::ifstream is = open_input(path);
    json h = read_header(is, path);
    expect(h, "dtype", dtype_real, path);
    expect(h, "order", "theta-major", path);
    SphereGrid g = grid_from_header(h, path);
    const int nt = g.n_theta(), np = g.n_phi();
    std::vector<double> data = read_payload(is, static_cast<std::size_t>(nt) * np, path);
    Eigen::MatrixXd map(nt, np);
    std::size_t idx = 0;
    for (int i = 0; i < nt; ++i)
        for (int k = 0; k < np; ++k) map(i, k) = data[idx++];
    if (alpha != nullptr) *alpha = h.contains("alpha") ? field<int>(h, "alpha", path) : 0;
    if (grid != nullptr) *grid = std::move(g);
    return map;
}

void write_mask_csv(const std::string& path,
                    const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& mask,
                    const json& extra) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw io_error("cannot open for writing: " + path);
    os << "# " << csv_provenance(extra).dump() << '\n';
    os << "i_theta,i_phi\n";
    for (Eigen::Index i = 0; i < mask.rows(); ++i)
        for (Eigen::Index k = 0; k < mask.cols(); ++k)
            if (mask(i, k)) os << i << ',' << k << '\n';
    if (!os) throw io_error("write failed: " + path);
}

} // namespace sst
