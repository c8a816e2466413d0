#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace sst {

/// zyz Euler angles (varphi, vartheta, omega): the rotation acts as
/// R = R_z(varphi) R_y(vartheta) R_z(omega).
struct EulerAngles {
    double varphi = 0.0;
    double vartheta = 0.0;
    double omega = 0.0;
};

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

inline Mat3 matmul(const Mat3& a, const Mat3& b) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
    return r;
}

inline Mat3 rot_z(double a) {
    double c = std::cos(a), s = std::sin(a);
    return {{{c, -s, 0.0}, {s, c, 0.0}, {0.0, 0.0, 1.0}}};
}

inline Mat3 rot_y(double a) {
    double c = std::cos(a), s = std::sin(a);
    return {{{c, 0.0, s}, {0.0, 1.0, 0.0}, {-s, 0.0, c}}};
}

inline Mat3 rotation_matrix(const EulerAngles& rho) {
    return matmul(rot_z(rho.varphi), matmul(rot_y(rho.vartheta), rot_z(rho.omega)));
}

inline Mat3 transpose(const Mat3& m) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = m[j][i];
    return r;
}

inline Vec3 matvec(const Mat3& m, const Vec3& v) {
    Vec3 r{};
    for (int i = 0; i < 3; ++i) r[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
    return r;
}

inline Vec3 spherical_to_cartesian(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

inline void cartesian_to_spherical(const Vec3& v, double& theta, double& phi) {
    theta = std::acos(std::clamp(v[2], -1.0, 1.0));
    phi = std::atan2(v[1], v[0]);
    if (phi < 0) phi += 2.0 * std::numbers::pi;
}

/// Great-circle distance between unit vectors.
inline double geodesic_distance(const Vec3& a, const Vec3& b) {
    double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    return std::acos(std::clamp(dot, -1.0, 1.0));
}

} // namespace sst
