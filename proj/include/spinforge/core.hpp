#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "spinforge/errors.hpp"

namespace spinforge {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

using complex = std::complex<double>;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }

    double norm_sq() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm_sq()); }

    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// Unit vector on the Bloch sphere. Construction rejects inputs whose norm is
// off by more than 1e-9 and then renormalizes exactly.
struct BlochVector {
    double n1;
    double n2;
    double n3;

    BlochVector(double a, double b, double c) : n1(a), n2(b), n3(c) {
        const double r = std::sqrt(n1 * n1 + n2 * n2 + n3 * n3);
        if (!std::isfinite(r) || std::abs(r - 1.0) > 1e-9)
            throw ConfigError("BlochVector norm deviates from 1 by more than 1e-9");
        n1 /= r;
        n2 /= r;
        n3 /= r;
    }

    explicit BlochVector(const Vec3& v) : BlochVector(v.x, v.y, v.z) {}

    Vec3 vec() const { return {n1, n2, n3}; }
};

inline BlochVector bloch_from_angles(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

// Normalized two-component state (up, down). Same 1e-9 construction gate as
// BlochVector, then exact renormalization.
struct Spinor {
    complex up;
    complex down;

    Spinor(complex u, complex d) : up(u), down(d) {
        const double r = std::sqrt(std::norm(up) + std::norm(down));
        if (!std::isfinite(r) || std::abs(r - 1.0) > 1e-9)
            throw ConfigError("Spinor norm deviates from 1 by more than 1e-9");
        up /= r;
        down /= r;
    }
};

inline Spinor spinor_from_angles(double theta, double phi) {
    return {complex(std::cos(theta / 2.0), 0.0),
            std::polar(std::sin(theta / 2.0), phi)};
}

inline complex inner(const Spinor& a, const Spinor& b) {
    return std::conj(a.up) * b.up + std::conj(a.down) * b.down;
}

// n1 = 2 Re(conj(up) down), n2 = 2 Im(conj(up) down), n3 = |up|^2 - |down|^2.
inline BlochVector bloch_from_spinor(const Spinor& psi) {
    const complex c = std::conj(psi.up) * psi.down;
    return {2.0 * c.real(), 2.0 * c.imag(), std::norm(psi.up) - std::norm(psi.down)};
}

// Element of SU(2), row-major entries. Construction verifies unitarity and
// |det| = 1 within 1e-9 but does not renormalize.
struct SU2Matrix {
    complex u00, u01, u10, u11;

    SU2Matrix(complex a, complex b, complex c, complex d)
        : u00(a), u01(b), u10(c), u11(d) {
        const double col0 = std::norm(u00) + std::norm(u10);
        const double col1 = std::norm(u01) + std::norm(u11);
        const complex off = std::conj(u00) * u01 + std::conj(u10) * u11;
        const complex det = u00 * u11 - u01 * u10;
        const bool ok = std::abs(col0 - 1.0) <= 1e-9 && std::abs(col1 - 1.0) <= 1e-9 &&
                        std::abs(off) <= 1e-9 && std::abs(std::abs(det) - 1.0) <= 1e-9;
        if (!ok || !std::isfinite(col0) || !std::isfinite(col1))
            throw ConfigError("SU2Matrix entries are not unitary within 1e-9");
    }

    static SU2Matrix identity() { return {1.0, 0.0, 0.0, 1.0}; }

    // w*I + i*(x s1 + y s2 + z s3) for a unit quaternion (w, x, y, z).
    static SU2Matrix from_quaternion(double w, double x, double y, double z) {
        return {complex(w, z), complex(y, x), complex(-y, x), complex(w, -z)};
    }

    complex trace() const { return u00 + u11; }

    double frobenius_norm_sq() const {
        return std::norm(u00) + std::norm(u01) + std::norm(u10) + std::norm(u11);
    }

    Spinor apply(const Spinor& psi) const {
        return {u00 * psi.up + u01 * psi.down, u10 * psi.up + u11 * psi.down};
    }

    SU2Matrix operator*(const SU2Matrix& o) const {
        return {u00 * o.u00 + u01 * o.u10, u00 * o.u01 + u01 * o.u11,
                u10 * o.u00 + u11 * o.u10, u10 * o.u01 + u11 * o.u11};
    }
};

// Proper rotation, row-major. Construction verifies orthogonality within
// 1e-9 and det = +1. Factories build right-handed active rotations:
// rotation_z(w) carries the x axis toward the y axis,
// rotation_y(w) carries the z axis toward the x axis.
struct SO3Matrix {
    std::array<double, 9> m;

    explicit SO3Matrix(const std::array<double, 9>& entries) : m(entries) {
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                double g = 0.0;
                for (int k = 0; k < 3; ++k) g += m[3 * k + i] * m[3 * k + j];
                const double want = (i == j) ? 1.0 : 0.0;
                if (!std::isfinite(g) || std::abs(g - want) > 1e-9)
                    throw ConfigError("SO3Matrix is not orthogonal within 1e-9");
            }
        }
        const double det = m[0] * (m[4] * m[8] - m[5] * m[7]) -
                           m[1] * (m[3] * m[8] - m[5] * m[6]) +
                           m[2] * (m[3] * m[7] - m[4] * m[6]);
        if (std::abs(det - 1.0) > 1e-9)
            throw ConfigError("SO3Matrix determinant deviates from +1");
    }

    static SO3Matrix identity() {
        return SO3Matrix({1, 0, 0, 0, 1, 0, 0, 0, 1});
    }

    static SO3Matrix rotation_z(double w) {
        const double c = std::cos(w), s = std::sin(w);
        return SO3Matrix({c, -s, 0, s, c, 0, 0, 0, 1});
    }

    static SO3Matrix rotation_y(double w) {
        const double c = std::cos(w), s = std::sin(w);
        return SO3Matrix({c, 0, s, 0, 1, 0, -s, 0, c});
    }

    Vec3 operator*(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }

    SO3Matrix operator*(const SO3Matrix& o) const {
        std::array<double, 9> r{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += m[3 * i + k] * o.m[3 * k + j];
                r[3 * i + j] = s;
            }
        return SO3Matrix(r);
    }

    SO3Matrix transpose() const {
        return SO3Matrix({m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]});
    }
};

// Uniform grid on [0, tau] with `steps` integration intervals.
struct TimeGrid {
    double tau;
    int steps;

    TimeGrid(double tau_, int steps_) : tau(tau_), steps(steps_) {
        if (!std::isfinite(tau) || tau <= 0.0)
            throw ConfigError("TimeGrid requires finite tau > 0");
        if (steps < 2)
            throw ConfigError("TimeGrid requires steps >= 2");
    }

    double dt() const { return tau / steps; }
    double node(int k) const { return tau * (static_cast<double>(k) / steps); }
    int size() const { return steps + 1; }
};

// Map an angle to the principal branch (-pi, pi].
inline double wrap_angle(double x) {
    double y = std::remainder(x, two_pi);
    if (y <= -pi) y += two_pi;
    return y;
}

}  // namespace spinforge
