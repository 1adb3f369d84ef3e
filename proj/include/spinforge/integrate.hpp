#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "spinforge/core.hpp"
#include "spinforge/errors.hpp"
#include "spinforge/field.hpp"

namespace spinforge {

// Classical fixed-step RK4 throughout. The state is renormalized after
// every step (projection back onto the sphere / SU(2)); max_norm_drift
// records the largest pre-projection norm error actually observed.

struct BlochTrajectory {
    TimeGrid grid;
    std::vector<BlochVector> samples;
    double max_norm_drift;

    const BlochVector& front() const { return samples.front(); }
    const BlochVector& back() const { return samples.back(); }
};

struct PropagatorTrajectory {
    TimeGrid grid;
    std::vector<SU2Matrix> samples;
    double max_norm_drift;

    const SU2Matrix& back() const { return samples.back(); }
};

namespace detail {

inline Vec3 checked_field(const FieldProgram& field, double t) {
    const Vec3 b = field.value(t);
    if (!b.finite()) throw NonFiniteField(t);
    return b;
}

// A sampled field is only resolved up to its sample spacing; refuse to step
// over samples by densifying the grid when needed. Sample times rounded
// through grid nodes jitter by about steps * eps relative, so the
// undersampling test needs slack on that scale or it densifies spuriously.
inline TimeGrid effective_grid(const FieldProgram& field, const TimeGrid& grid) {
    if (const auto spacing = field.min_sample_spacing()) {
        const double slack =
            std::numeric_limits<double>::epsilon() * (8.0 * grid.steps + 8.0);
        if (grid.dt() > *spacing * (1.0 + slack)) {
            const int needed = static_cast<int>(std::ceil(grid.tau / *spacing - 1e-9));
            if (needed > grid.steps) return TimeGrid(grid.tau, needed);
        }
    }
    return grid;
}

// Unit quaternion (w, v) representing w*I + i*(v . sigma). The evolution
// d(psi)/dt = (i/2)(b . sigma) psi becomes
//   w' = -(1/2) b . v,   v' = (1/2)(w b - b x v).
struct Quaternion {
    double w, x, y, z;

    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

    Quaternion operator+(const Quaternion& o) const { return {w + o.w, x + o.x, y + o.y, z + o.z}; }
    Quaternion operator*(double s) const { return {w * s, x * s, y * s, z * s}; }
};

inline Quaternion quaternion_rhs(const Quaternion& q, const Vec3& b) {
    const Vec3 v{q.x, q.y, q.z};
    const Vec3 dv = (b * q.w - cross(b, v)) * 0.5;
    return {-0.5 * dot(b, v), dv.x, dv.y, dv.z};
}

}  // namespace detail

inline BlochTrajectory integrate_bloch(const FieldProgram& field, const BlochVector& n0,
                                       const TimeGrid& requested) {
    const TimeGrid grid = detail::effective_grid(field, requested);
    const double h = grid.dt();

    std::vector<BlochVector> out;
    out.reserve(static_cast<std::size_t>(grid.size()));
    out.push_back(n0);

    Vec3 n = n0.vec();
    Vec3 b_left = detail::checked_field(field, 0.0);
    double drift = 0.0;

    for (int k = 0; k < grid.steps; ++k) {
        const double t = grid.node(k);
        const Vec3 b_mid = detail::checked_field(field, t + 0.5 * h);
        const Vec3 b_right = detail::checked_field(field, grid.node(k + 1));

        const Vec3 k1 = cross(n, b_left);
        const Vec3 k2 = cross(n + k1 * (0.5 * h), b_mid);
        const Vec3 k3 = cross(n + k2 * (0.5 * h), b_mid);
        const Vec3 k4 = cross(n + k3 * h, b_right);
        n = n + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);

        const double r = n.norm();
        drift = std::max(drift, std::abs(r - 1.0));
        n = n / r;
        out.emplace_back(n);
        b_left = b_right;
    }
    return {grid, std::move(out), drift};
}

inline PropagatorTrajectory integrate_propagator(const FieldProgram& field,
                                                 const TimeGrid& requested) {
    using detail::Quaternion;
    using detail::quaternion_rhs;

    const TimeGrid grid = detail::effective_grid(field, requested);
    const double h = grid.dt();

    std::vector<SU2Matrix> out;
    out.reserve(static_cast<std::size_t>(grid.size()));
    out.push_back(SU2Matrix::identity());

    Quaternion q{1.0, 0.0, 0.0, 0.0};
    Vec3 b_left = detail::checked_field(field, 0.0);
    double drift = 0.0;

    for (int k = 0; k < grid.steps; ++k) {
        const double t = grid.node(k);
        const Vec3 b_mid = detail::checked_field(field, t + 0.5 * h);
        const Vec3 b_right = detail::checked_field(field, grid.node(k + 1));

        const Quaternion k1 = quaternion_rhs(q, b_left);
        const Quaternion k2 = quaternion_rhs(q + k1 * (0.5 * h), b_mid);
        const Quaternion k3 = quaternion_rhs(q + k2 * (0.5 * h), b_mid);
        const Quaternion k4 = quaternion_rhs(q + k3 * h, b_right);
        q = q + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);

        const double r = q.norm();
        drift = std::max(drift, std::abs(r - 1.0));
        q = q * (1.0 / r);
        out.push_back(SU2Matrix::from_quaternion(q.w, q.x, q.y, q.z));
        b_left = b_right;
    }
    return {grid, std::move(out), drift};
}

inline std::vector<Spinor> integrate_spinor(const FieldProgram& field, const Spinor& psi0,
                                            const TimeGrid& grid) {
    const PropagatorTrajectory prop = integrate_propagator(field, grid);
    std::vector<Spinor> out;
    out.reserve(prop.samples.size());
    for (const SU2Matrix& u : prop.samples) out.push_back(u.apply(psi0));
    return out;
}

}  // namespace spinforge
