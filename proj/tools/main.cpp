#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "sst/errors.hpp"
#include "sst/grid.hpp"
#include "sst/harmonics.hpp"
#include "sst/io.hpp"
#include "sst/lva.hpp"
#include "sst/parallel.hpp"
#include "sst/region.hpp"
#include "sst/sht.hpp"
#include "sst/slepian.hpp"
#include "sst/so3.hpp"
#include "sst/transform.hpp"
#include "sst/version.hpp"

namespace {

using nlohmann::json;
using namespace sst;

constexpr int exit_usage = 2;
constexpr int exit_numerical = 3;
constexpr int exit_io = 4;
constexpr double pi = std::numbers::pi;

double rad(double degrees) { return degrees * pi / 180.0; }

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string part;
    while (std::getline(is, part, sep)) out.push_back(part);
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != s.size()) throw std::invalid_argument(what + ": not a number: " + s);
    return v;
}

/// "cap:THETA" or "ellipse:TC,A[:rot=V,T,O]", all angles in degrees.
Region parse_region_spec(const std::string& spec) {
    const std::string usage = "--region expects cap:THETA or ellipse:TC,A[:rot=V,T,O] (degrees)";
    std::vector<std::string> parts = split(spec, ':');
    if (parts.size() >= 2 && parts[0] == "cap") {
        if (parts.size() != 2) throw std::invalid_argument(usage);
        return Region::cap(rad(parse_double(parts[1], "--region cap")));
    }
    if (parts.size() >= 2 && parts[0] == "ellipse") {
        if (parts.size() > 3) throw std::invalid_argument(usage);
        std::vector<std::string> axes = split(parts[1], ',');
        if (axes.size() != 2) throw std::invalid_argument(usage);
        EulerAngles rot{};
        if (parts.size() == 3) {
            if (parts[2].rfind("rot=", 0) != 0) throw std::invalid_argument(usage);
            std::vector<std::string> r = split(parts[2].substr(4), ',');
            if (r.size() != 3) throw std::invalid_argument(usage);
            rot = {rad(parse_double(r[0], "--region rot")), rad(parse_double(r[1], "--region rot")),
                   rad(parse_double(r[2], "--region rot"))};
        }
        return Region::ellipse(rad(parse_double(axes[0], "--region ellipse")),
                               rad(parse_double(axes[1], "--region ellipse")), rot);
    }
    throw std::invalid_argument(usage);
}

json provenance(const json& cfg) { return json{{"config", cfg}, {"version", library_version}}; }

std::ofstream open_csv(const std::string& path, const json& cfg) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw io_error("cannot open for writing: " + path);
    os << "# " << provenance(cfg).dump() << '\n' << std::setprecision(17);
    return os;
}

void write_coefficients_csv(const std::string& path, const HarmonicCoefficients& c,
                            const json& cfg) {
    std::ofstream os = open_csv(path, cfg);
    os << "l,m,re,im\n";
    for (int ell = 0; ell < c.bandlimit; ++ell)
        for (int m = -ell; m <= ell; ++m)
            os << ell << ',' << m << ',' << c.at(ell, m).real() << ',' << c.at(ell, m).imag()
               << '\n';
    if (!os) throw io_error("write failed: " + path);
}

void write_so3_csv(const std::string& path, const SO3Signal& F, const json& cfg) {
    std::ofstream os = open_csv(path, cfg);
    os << "varphi,vartheta,omega,re,im\n";
    const int n = F.grid.n();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                cplx z = F.at(i, j, k);
                os << F.grid.varphi[i] << ',' << F.grid.vartheta[j] << ',' << F.grid.omega[k]
                   << ',' << z.real() << ',' << z.imag() << '\n';
            }
    if (!os) throw io_error("write failed: " + path);
}

void write_spectrum_csv(const std::string& path, const SlepianBasis& basis, int count,
                        const json& cfg) {
    std::ofstream os = open_csv(path, cfg);
    os << "alpha,eigenvalue\n";
    for (int a = 1; a <= count; ++a) os << a << ',' << basis.eigenvalues(a - 1) << '\n';
    if (!os) throw io_error("write failed: " + path);
}

void write_real_map_csv(const std::string& path, const SphereGrid& grid,
                        const Eigen::MatrixXd& map, const json& cfg) {
    std::ofstream os = open_csv(path, cfg);
    os << "theta,phi,variance\n";
    for (int i = 0; i < grid.n_theta(); ++i)
        for (int k = 0; k < grid.n_phi(); ++k)
            os << grid.theta[i] << ',' << grid.phi[k] << ',' << map(i, k) << '\n';
    if (!os) throw io_error("write failed: " + path);
}

/// Least-squares log-log slope of t against x.
double fitted_slope(const std::vector<int>& x, const std::vector<double>& t) {
    const std::size_t n = x.size();
    double sx = 0, st = 0, sxx = 0, sxt = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double lx = std::log(static_cast<double>(x[i]));
        double lt = std::log(std::max(t[i], 1e-12));
        sx += lx;
        st += lt;
        sxx += lx * lx;
        sxt += lx * lt;
    }
    return (n * sxt - sx * st) / (n * sxx - sx * sx);
}

bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// ---------------------------------------------------------------------------
// basis

struct BasisOpts {
    int L = 0;
    double cap_deg = 0.0;
    bool full = false;
    std::vector<double> ellipse;
    std::vector<double> rot{0.0, 0.0, 0.0};
    int store_first = -1;
    std::string out, format = "bin";
    bool have_cap = false, have_ellipse = false;
};

void run_basis(const BasisOpts& o) {
    json cfg{{"command", "basis"}, {"L", o.L},   {"store_first", o.store_first},
             {"format", o.format}, {"out", o.out}};
    SlepianBasis basis;
    if (o.have_cap) {
        cfg["cap_deg"] = o.cap_deg;
        cfg["full"] = o.full;
        basis = o.full ? build_basis(Region::cap(rad(o.cap_deg)), o.L, o.store_first)
                       : zonal_basis(rad(o.cap_deg), o.L);
    } else {
        cfg["ellipse_deg"] = o.ellipse;
        cfg["rot_deg"] = o.rot;
        basis = build_basis(Region::ellipse(rad(o.ellipse[0]), rad(o.ellipse[1]),
                                            {rad(o.rot[0]), rad(o.rot[1]), rad(o.rot[2])}),
                            o.L, o.store_first);
    }
    const int count = o.store_first < 0 ? std::min(basis.n_well, basis.n_stored()) : o.store_first;
    if (o.format == "csv")
        write_spectrum_csv(o.out, basis, count, cfg);
    else
        write_basis(o.out, basis, o.store_first, json{{"config", cfg}});
    std::cout << std::setprecision(17) << "basis: L=" << o.L << " shannon=" << basis.shannon
              << " n_well=" << basis.n_well << " stored=" << count << " out=" << o.out << '\n';
}

// ---------------------------------------------------------------------------
// ingest-map

bool uniform_longitudes(const std::vector<double>& phi) {
    const std::size_t np = phi.size();
    for (std::size_t k = 0; k < np; ++k)
        if (std::abs(phi[k] - 2.0 * pi * static_cast<double>(k) / static_cast<double>(np)) > 1e-9)
            return false;
    return true;
}

bool equiangular_colatitudes(const std::vector<double>& theta) {
    const std::size_t nt = theta.size();
    for (std::size_t j = 0; j < nt; ++j)
        if (std::abs(theta[j] - pi * (static_cast<double>(j) + 0.5) / static_cast<double>(nt)) >
            1e-9)
            return false;
    return true;
}

/// Bandlimited coefficients from an equiangular lattice: per-ring longitude
/// DFT isolates each order m (alias-free for n_phi >= 2L-1), then a per-order
/// least-squares fit against the normalized Legendre columns over the rings
/// recovers the degree coefficients (the unique bandlimited interpolant).
HarmonicCoefficients fit_equiangular(const SphereSignal& s, int L) {
    const int nt = s.grid.n_theta(), np = s.grid.n_phi(), h = L - 1;
    if (nt < L || np < 2 * L - 1)
        throw std::invalid_argument("ingest-map: input grid under-sampled for the requested "
                                    "bandlimit (need n_theta >= L, n_phi >= 2L-1)");

    Eigen::MatrixXcd ring(nt, 2 * L - 1);
    for (int j = 0; j < nt; ++j)
        for (int m = -h; m <= h; ++m) {
            cplx acc = 0.0;
            for (int k = 0; k < np; ++k)
                acc += s.values(j, k) * std::polar(1.0, -m * s.grid.phi[k]);
            ring(j, h + m) = acc / static_cast<double>(np);
        }

    std::vector<LegendreTable> tables;
    tables.reserve(nt);
    for (int j = 0; j < nt; ++j) tables.emplace_back(L, std::cos(s.grid.theta[j]));

    HarmonicCoefficients out(L);
    for (int m = -h; m <= h; ++m) {
        const int am = std::abs(m), cols = L - am;
        const double sgn = (m < 0 && am % 2 == 1) ? -1.0 : 1.0;
        Eigen::MatrixXd A(nt, cols);
        for (int j = 0; j < nt; ++j)
            for (int ell = am; ell < L; ++ell) A(j, ell - am) = sgn * tables[j](ell, am);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
        Eigen::VectorXd xr = qr.solve(ring.col(h + m).real().eval());
        Eigen::VectorXd xi = qr.solve(ring.col(h + m).imag().eval());
        for (int ell = am; ell < L; ++ell) out.at(ell, m) = {xr(ell - am), xi(ell - am)};
    }
    return out;
}

struct IngestOpts {
    std::string in, out, format = "bin";
    int L = 0;
};

void run_ingest(const IngestOpts& o) {
    json cfg{{"command", "ingest-map"},
             {"in", o.in},
             {"L", o.L},
             {"format", o.format},
             {"out", o.out}};
    SphereSignal s = has_suffix(o.in, ".csv") ? read_sphere_signal_csv(o.in)
                                              : read_sphere_signal(o.in);

    bool quadrature = false;
    for (double w : s.grid.weights) quadrature = quadrature || w != 0.0;

    HarmonicCoefficients c;
    if (quadrature) {
        c = sht_forward(s, o.L);
    } else {
        if (!equiangular_colatitudes(s.grid.theta) || !uniform_longitudes(s.grid.phi))
            throw std::invalid_argument(
                "ingest-map: input is neither a quadrature grid nor an equiangular lattice");
        // fit, then run the fitted signal through the quadrature analysis
        HarmonicCoefficients fitted = fit_equiangular(s, o.L);
        c = sht_forward(sht_inverse(fitted, build_grid(o.L)), o.L);
    }

    if (o.format == "csv")
        write_coefficients_csv(o.out, c, cfg);
    else
        write_harmonic_coefficients(o.out, c, json{{"config", cfg}});
    std::cout << "ingest-map: L=" << o.L << " coefficients=" << c.coeffs.size()
              << " out=" << o.out << '\n';
}

// ---------------------------------------------------------------------------
// forward / inverse

struct ForwardOpts {
    std::string signal, basis, out, format = "bin";
    int alpha = 1;
    bool direct = false;
};

void run_forward(const ForwardOpts& o) {
    json cfg{{"command", "forward"}, {"signal", o.signal}, {"basis", o.basis},
             {"alpha", o.alpha},     {"direct", o.direct}, {"format", o.format},
             {"out", o.out}};
    HarmonicCoefficients f = read_harmonic_coefficients(o.signal);
    SlepianBasis basis = read_basis(o.basis);

    SO3Signal F;
    if (o.direct) {
        F.grid = build_so3_grid(f.bandlimit);
        F.alpha = o.alpha;
        const int n = F.grid.n();
        F.values.assign(static_cast<std::size_t>(n) * n * n, cplx(0.0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    F.at(i, j, k) = sst_point(
                        f, basis, o.alpha,
                        {F.grid.varphi[i], F.grid.vartheta[j], F.grid.omega[k]});
    } else {
        F = sst_fast(f, basis, o.alpha);
    }

    if (o.format == "csv")
        write_so3_csv(o.out, F, cfg);
    else
        write_so3_signal(o.out, F, json{{"config", cfg}});
    std::cout << "forward: L=" << f.bandlimit << " alpha=" << o.alpha << " n=" << F.grid.n()
              << " out=" << o.out << '\n';
}

struct InverseOpts {
    std::string in, basis, out, format = "bin";
    int alpha = 0; // 0 = take the scale recorded in the input file
    double epsilon = -1.0;
};

void run_inverse(const InverseOpts& o) {
    json cfg{{"command", "inverse"}, {"in", o.in},           {"basis", o.basis},
             {"alpha", o.alpha},     {"epsilon", o.epsilon}, {"format", o.format},
             {"out", o.out}};
    SO3Signal F = read_so3_signal(o.in);
    SlepianBasis basis = read_basis(o.basis);
    const int alpha = o.alpha > 0 ? o.alpha : F.alpha;

    WignerCoefficients Fw = wigner_analysis(F);
    HarmonicCoefficients f = inverse_sst(Fw, basis, alpha, o.epsilon);

    if (o.format == "csv")
        write_coefficients_csv(o.out, f, cfg);
    else
        write_harmonic_coefficients(o.out, f, json{{"config", cfg}});
    std::cout << "inverse: L=" << f.bandlimit << " alpha=" << alpha << " out=" << o.out << '\n';
}

// ---------------------------------------------------------------------------
// frame-check

struct FrameOpts {
    std::string basis, signal, out;
    std::uint64_t seed = 0;
    bool have_seed = false;
    int trials = 20;
    double tol = 1e-8;
};

void run_frame_check(const FrameOpts& o) {
    json cfg{{"command", "frame-check"}, {"basis", o.basis}, {"trials", o.trials},
             {"tol", o.tol}};
    if (!o.signal.empty()) cfg["signal"] = o.signal;
    if (o.have_seed) cfg["seed"] = o.seed;

    SlepianBasis basis = read_basis(o.basis);
    std::vector<double> ratios;
    if (!o.signal.empty()) {
        ratios.push_back(tight_frame_ratio(read_harmonic_coefficients(o.signal), basis));
    } else {
        if (!o.have_seed)
            throw std::invalid_argument("frame-check: provide --signal or --seed");
        for (int t = 0; t < o.trials; ++t)
            ratios.push_back(
                tight_frame_ratio(synthesize_background(basis.bandlimit, o.seed + t), basis));
    }

    double worst = 0.0;
    for (double r : ratios) worst = std::max(worst, std::abs(r - 1.0));

    std::ostringstream report;
    report << std::setprecision(17) << "trial,ratio\n";
    for (std::size_t t = 0; t < ratios.size(); ++t) report << t + 1 << ',' << ratios[t] << '\n';
    report << "max_abs_deviation," << worst << '\n';
    if (o.out.empty()) {
        std::cout << report.str();
    } else {
        std::ofstream os = open_csv(o.out, cfg);
        os << report.str();
        if (!os) throw io_error("write failed: " + o.out);
        std::cout << std::setprecision(17) << "frame-check: max_abs_deviation=" << worst
                  << " out=" << o.out << '\n';
    }
    if (worst > o.tol) {
        std::ostringstream msg;
        msg << std::setprecision(17) << "frame-check: max |ratio - 1| = " << worst
            << " exceeds tolerance " << o.tol;
        throw numerical_error(msg.str());
    }
}

// ---------------------------------------------------------------------------
// bench

struct BenchOpts {
    int lmin = 16, lmax = 128;
    double cap_deg = 15.0;
    std::uint64_t seed = 0;
    std::string out;
};

void run_bench(const BenchOpts& o) {
    if (o.lmin < 2 || o.lmax < o.lmin)
        throw std::invalid_argument("bench: need 2 <= lmin <= lmax");
    json cfg{{"command", "bench"}, {"lmin", o.lmin},  {"lmax", o.lmax},
             {"cap_deg", o.cap_deg}, {"seed", o.seed}, {"out", o.out}};

    std::vector<int> Ls;
    for (int L = o.lmin; L <= o.lmax; L *= 2) Ls.push_back(L);

    std::vector<double> t_C, t_fft, t_total;
    for (int L : Ls) {
        SlepianBasis basis = build_basis(Region::cap(rad(o.cap_deg)), L, 1);
        HarmonicCoefficients f = synthesize_background(L, o.seed);
        Timer tc;
        CCube C = compute_C(f, basis, 1);
        t_C.push_back(tc.seconds());
        Timer tf;
        SO3Signal F = so3_synthesis(C, 1);
        t_fft.push_back(tf.seconds());
        t_total.push_back(t_C.back() + t_fft.back());
        std::cout << "bench: L=" << L << " t_C=" << t_C.back() << " t_fft=" << t_fft.back()
                  << " t_total=" << t_total.back() << '\n';
    }

    std::ofstream os = open_csv(o.out, cfg);
    os << "L,t_C,t_fft,t_total\n";
    for (std::size_t i = 0; i < Ls.size(); ++i)
        os << Ls[i] << ',' << t_C[i] << ',' << t_fft[i] << ',' << t_total[i] << '\n';
    if (Ls.size() >= 2)
        os << "slope," << fitted_slope(Ls, t_C) << ',' << fitted_slope(Ls, t_fft) << ','
           << fitted_slope(Ls, t_total) << '\n';
    if (!os) throw io_error("write failed: " + o.out);
    if (Ls.size() >= 2)
        std::cout << "bench: slope_C=" << fitted_slope(Ls, t_C)
                  << " slope_fft=" << fitted_slope(Ls, t_fft) << " out=" << o.out << '\n';
}

// ---------------------------------------------------------------------------
// lva run

struct LvaOpts {
    int L = 0, N = 0, scales = 0;
    double bvr_db = 0.0, cap_deg = 15.0, quantile = 0.95;
    std::string region, out, format = "bin";
    std::uint64_t seed = 0;
};

std::string member_name(const char* stem, int j) {
    std::ostringstream os;
    os << stem << '_' << std::setw(2) << std::setfill('0') << j << ".shc";
    return os.str();
}

void run_lva(const LvaOpts& o) {
    json cfg{{"command", "lva run"},   {"L", o.L},
             {"N", o.N},               {"bvr_db", o.bvr_db},
             {"region", o.region},     {"cap_deg", o.cap_deg},
             {"seed", o.seed},         {"scales", o.scales},
             {"quantile", o.quantile}, {"format", o.format},
             {"out", o.out}};
    const Region variation_region = parse_region_spec(o.region);
    if (o.quantile <= 0.0 || o.quantile >= 1.0)
        throw std::invalid_argument("lva run: --quantile must lie in (0, 1)");

    Ensemble ens = build_ensemble(o.L, o.N, variation_region, o.bvr_db, o.seed);
    SlepianBasis zb = zonal_basis(rad(o.cap_deg), o.L);
    SphereGrid grid = build_grid(o.L);

    const int n_scales = o.scales > 0 ? o.scales : std::min(zb.n_well, zb.n_stored());
    std::vector<int> scales(n_scales);
    for (int k = 0; k < n_scales; ++k) scales[k] = k + 1;

    VarianceMap vm = variance_maps(ens.observations, zb, scales, grid);

    namespace fs = std::filesystem;
    fs::create_directories(o.out);
    const auto path = [&](const std::string& name) { return (fs::path(o.out) / name).string(); };

    const json extra{{"config", cfg}};
    write_harmonic_coefficients(path("background.shc"), ens.background, extra);
    for (int j = 0; j < o.N; ++j) {
        write_harmonic_coefficients(path(member_name("variation", j + 1)), ens.variations[j],
                                    extra);
        write_harmonic_coefficients(path(member_name("observation", j + 1)),
                                    ens.observations[j], extra);
    }

    for (int k = 0; k < n_scales; ++k) {
        const int alpha = scales[k];
        const Eigen::MatrixXd& map = vm.maps[k];
        std::ostringstream stem;
        stem << "variance_alpha_" << alpha;
        if (o.format == "csv")
            write_real_map_csv(path(stem.str() + ".csv"), grid, map, cfg);
        else
            write_variance_map(path(stem.str() + ".map"), grid, map, alpha, extra);

        auto mask = detect_region(map, o.quantile);
        std::ostringstream mask_name;
        mask_name << "mask_alpha_" << alpha << ".csv";
        write_mask_csv(path(mask_name.str()), mask, extra);

        Eigen::Index imax = 0, kmax = 0;
        map.maxCoeff(&imax, &kmax);
        std::cout << std::setprecision(17) << "lva: alpha=" << alpha
                  << " argmax_theta_deg=" << grid.theta[imax] * 180.0 / pi
                  << " argmax_phi_deg=" << grid.phi[kmax] * 180.0 / pi
                  << " masked=" << mask.count() << '\n';
    }
    std::cout << "lva: N=" << o.N << " scales=" << n_scales << " out=" << o.out << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spatial-Slepian transform toolkit"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "cap worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);

    const auto format_check = CLI::IsMember({"bin", "csv"});

    BasisOpts basis;
    CLI::App* b = app.add_subcommand("basis", "build and store a Slepian basis");
    b->add_option("--L", basis.L, "bandlimit")->required()->check(CLI::PositiveNumber);
    CLI::Option* cap = b->add_option("--cap-deg", basis.cap_deg,
                                     "polar cap opening angle in degrees (zonal basis unless "
                                     "--full)");
    CLI::Option* full = b->add_flag("--full", basis.full, "full cap basis instead of zonal");
    CLI::Option* ell = b->add_option("--ellipse", basis.ellipse,
                                     "focus colatitude and semi-major axis in degrees: TC,A")
                           ->delimiter(',')
                           ->expected(2);
    b->add_option("--rot", basis.rot, "ellipse rotation V,T,O in degrees")
        ->delimiter(',')
        ->expected(3)
        ->needs(ell);
    b->add_option("--store-first", basis.store_first,
                  "store only the first N columns (default: n_well)");
    b->add_option("--out", basis.out, "output basis file")->required();
    b->add_option("--format", basis.format, "bin: full basis, csv: eigenvalue spectrum")
        ->check(format_check);
    cap->excludes(ell);
    ell->excludes(cap);
    full->needs(cap);
    b->callback([&] {
        basis.have_cap = cap->count() > 0;
        basis.have_ellipse = ell->count() > 0;
        if (!basis.have_cap && !basis.have_ellipse)
            throw CLI::ValidationError("basis", "provide --cap-deg or --ellipse");
        set_max_threads(threads);
        run_basis(basis);
    });

    IngestOpts ingest;
    CLI::App* ig = app.add_subcommand("ingest-map",
                                      "harmonic analysis of an external map (CSV or binary)");
    ig->add_option("--in", ingest.in, "input map (.csv or binary sphere signal)")->required();
    ig->add_option("--L", ingest.L, "target bandlimit")->required()->check(CLI::PositiveNumber);
    ig->add_option("--out", ingest.out, "output coefficient file")->required();
    ig->add_option("--format", ingest.format, "bin|csv")->check(format_check);
    ig->callback([&] {
        set_max_threads(threads);
        run_ingest(ingest);
    });

    ForwardOpts fwd;
    CLI::App* fw = app.add_subcommand("forward", "spatial-Slepian transform of a signal");
    fw->add_option("--signal", fwd.signal, "harmonic coefficient file")->required();
    fw->add_option("--basis", fwd.basis, "Slepian basis file")->required();
    fw->add_option("--alpha", fwd.alpha, "window scale (1-based)")->check(CLI::PositiveNumber);
    CLI::Option* fast = fw->add_flag("--fast", "factored Fourier evaluation (default)");
    CLI::Option* direct = fw->add_flag("--direct", fwd.direct, "pointwise evaluation (slow)");
    fast->excludes(direct);
    direct->excludes(fast);
    fw->add_option("--out", fwd.out, "output rotation-group cube")->required();
    fw->add_option("--format", fwd.format, "bin|csv")->check(format_check);
    fw->callback([&] {
        set_max_threads(threads);
        run_forward(fwd);
    });

    InverseOpts inv;
    CLI::App* iv = app.add_subcommand("inverse", "recover the signal from a transform cube");
    iv->add_option("--in", inv.in, "rotation-group cube file")->required();
    iv->add_option("--basis", inv.basis, "Slepian basis file")->required();
    iv->add_option("--alpha", inv.alpha, "window scale (default: from the input file)")
        ->check(CLI::PositiveNumber);
    iv->add_option("--epsilon", inv.epsilon,
                   "invertibility threshold (negative: scale-free default)");
    iv->add_option("--out", inv.out, "output coefficient file")->required();
    iv->add_option("--format", inv.format, "bin|csv")->check(format_check);
    iv->callback([&] {
        set_max_threads(threads);
        run_inverse(inv);
    });

    FrameOpts frame;
    CLI::App* fc = app.add_subcommand("frame-check",
                                      "verify the two-route energy identity on signals");
    fc->add_option("--basis", frame.basis, "Slepian basis file")->required();
    fc->add_option("--signal", frame.signal, "check this signal instead of random trials");
    CLI::Option* fseed = fc->add_option("--seed", frame.seed, "seed for random trials");
    fc->add_option("--trials", frame.trials, "number of random trials")
        ->check(CLI::PositiveNumber);
    fc->add_option("--tol", frame.tol, "maximum allowed |ratio - 1|");
    fc->add_option("--out", frame.out, "write the per-trial report to this CSV");
    fc->callback([&] {
        frame.have_seed = fseed->count() > 0;
        set_max_threads(threads);
        run_frame_check(frame);
    });

    BenchOpts bench;
    CLI::App* bn = app.add_subcommand("bench", "transform timings over a bandlimit sweep");
    bn->add_option("--lmin", bench.lmin, "smallest bandlimit")->check(CLI::PositiveNumber);
    bn->add_option("--lmax", bench.lmax, "largest bandlimit")->check(CLI::PositiveNumber);
    bn->add_option("--cap-deg", bench.cap_deg, "cap window opening angle in degrees");
    bn->add_option("--seed", bench.seed, "signal seed")->required();
    bn->add_option("--out", bench.out, "output CSV")->required();
    bn->callback([&] {
        set_max_threads(threads);
        run_bench(bench);
    });

    LvaOpts lva;
    CLI::App* lv = app.add_subcommand("lva", "localized variation analysis");
    lv->require_subcommand(1);
    CLI::App* lr = lv->add_subcommand("run", "ensemble, variance maps, and detection masks");
    lr->add_option("--L", lva.L, "bandlimit")->required()->check(CLI::PositiveNumber);
    lr->add_option("--N", lva.N, "ensemble size")->required()->check(CLI::PositiveNumber);
    lr->add_option("--bvr-db", lva.bvr_db, "background-to-variation ratio in dB")->required();
    lr->add_option("--region", lva.region,
                   "variation region: cap:THETA or ellipse:TC,A[:rot=V,T,O] (degrees)")
        ->required();
    lr->add_option("--cap-deg", lva.cap_deg, "zonal detection window opening angle in degrees");
    lr->add_option("--seed", lva.seed, "master seed")->required();
    lr->add_option("--scales", lva.scales, "number of window scales (default: zonal n_well)")
        ->check(CLI::PositiveNumber);
    lr->add_option("--quantile", lva.quantile, "detection mask quantile");
    lr->add_option("--out", lva.out, "output directory")->required();
    lr->add_option("--format", lva.format, "bin|csv for maps and members")->check(format_check);
    lr->callback([&] {
        set_max_threads(threads);
        run_lva(lva);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    } catch (const io_error& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return exit_io;
    } catch (const non_invertible_error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::out_of_range& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_numerical;
    }
    return 0;
}
