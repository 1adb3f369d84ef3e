#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "spinforge/core.hpp"
#include "spinforge/errors.hpp"
#include "spinforge/field.hpp"
#include "spinforge/integrate.hpp"
#include "spinforge/program.hpp"

namespace spinforge {

// Control-field synthesis: given where the spin should point, produce a
// field that drives it there. The longitudinal component b3 is never fixed
// by the target; each routine takes it as a gauge choice.

// Gauge that keeps the planar field amplitude proportional to alpha' and
// b3 = lambda * alpha' - beta'.
inline GaugeProgram invariant_gauge(const RotationProgram& prog) {
    const double lambda = prog.lambda();
    return GaugeProgram::custom([prog, lambda](double t) {
        return lambda * prog.alpha.derivative(t) - prog.beta.derivative(t);
    });
}

namespace detail {

// Second-order derivative estimates on a uniform grid: central differences
// inside, one-sided three-point stencils at the ends.
inline std::vector<double> central_difference(const std::vector<double>& v, double h) {
    const std::size_t n = v.size();
    std::vector<double> d(n);
    if (n < 3) throw ConfigError("derivative estimate needs at least three samples");
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (v[k + 1] - v[k - 1]) / (2.0 * h);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    return d;
}

}  // namespace detail

// Invert the precession equation sample by sample:
//   b1 = (b3 n1 + n2') / n3,   b2 = (b3 n2 - n1') / n3,
// with n' estimated by finite differences. Undefined on the equator.
inline FieldProgram pointwise_inverse(const BlochTrajectory& traj, const GaugeProgram& gauge) {
    const std::size_t n = traj.samples.size();
    const double h = traj.grid.dt();

    std::vector<double> n1(n), n2(n);
    for (std::size_t k = 0; k < n; ++k) {
        n1[k] = traj.samples[k].n1;
        n2[k] = traj.samples[k].n2;
    }
    const std::vector<double> d1 = detail::central_difference(n1, h);
    const std::vector<double> d2 = detail::central_difference(n2, h);

    std::vector<double> times(n);
    std::vector<Vec3> values(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = traj.grid.node(static_cast<int>(k));
        const double n3 = traj.samples[k].n3;
        if (std::abs(n3) <= 1e-9) throw EquatorSingularity(t);
        const double b3 = gauge(t);
        times[k] = t;
        values[k] = {(b3 * n1[k] + d2[k]) / n3, (b3 * n2[k] - d1[k]) / n3, b3};
    }
    return FieldProgram::sampled(std::move(times), std::move(values));
}

// Field pinning a spin at colatitude theta0 while its azimuth follows
// phi0 + delta(t):
//   b_planar = tan(theta0) (g + delta') (cos(phi0 + delta), sin(phi0 + delta)),
//   b3 = g.
// Choosing g = -delta' via GaugeProgram::scaled_derivative cancels the
// planar part exactly (0.0, not merely small), so theta0 near the equator
// is harmless in that gauge.
inline FieldProgram single_axis_field(double theta0, double phi0, AngleProgram delta,
                                      GaugeProgram gauge) {
    if (!std::isfinite(theta0) || !std::isfinite(std::tan(theta0)))
        throw ConfigError("single_axis_field requires finite tan(theta0)");
    const double tan0 = std::tan(theta0);
    return FieldProgram::symbolic(
        [theta0, phi0, delta = std::move(delta), gauge = std::move(gauge), tan0](double t) {
            const double g = gauge(t);
            const double amp = tan0 * (g + delta.derivative(t));
            const double az = phi0 + delta.value(t);
            return Vec3{amp * std::cos(az), amp * std::sin(az), g};
        });
}

// Exact inverse for a rigid rotation-program target n(t) = R(t) n(0) with a
// free gauge. The denominator is the running n3(t) of the target itself.
inline FieldProgram two_axis_field_general(const RotationProgram& prog, const BlochVector& n0,
                                           const GaugeProgram& gauge) {
    if (std::abs(n0.n3) <= 1e-9) throw DenominatorSingularity(0.0);
    const double lambda = prog.lambda();
    const double schi = prog.sin_chi();
    const double x0 = n0.n1, y0 = n0.n2, z0 = n0.n3;

    return FieldProgram::symbolic([prog, gauge, lambda, schi, x0, y0, z0](double t) {
        const double a = prog.alpha.value(t);
        const double b = prog.beta.value(t);
        const double da = prog.alpha.derivative(t);
        const double db = prog.beta.derivative(t);
        const double sa = std::sin(a), ca = std::cos(a);
        const double sb = std::sin(b), cb = std::cos(b);

        const double N1 = -lambda * sa * x0 + ca * y0 + schi * sa * z0;
        const double N2 = lambda * ca * x0 + sa * y0 - schi * ca * z0;
        const double N3 = schi * x0 + lambda * z0;
        const double D = -schi * N2 + lambda * N3;
        if (std::abs(D) <= 1e-9) throw DenominatorSingularity(t);

        const double b3 = gauge(t);
        const double F = lambda * da - (b3 + db);
        const double G = (b3 + db) * (lambda * N2 + schi * N3) - da * N2;
        return Vec3{(sb * F * N1 + cb * G) / D, (-cb * F * N1 + sb * G) / D, b3};
    });
}

// Same target in the invariant gauge b3 = lambda alpha' - beta', where the
// field collapses to a planar sweep plus that b3:
//   b = alpha' sin(chi) (cos beta, sin beta, 0) + (lambda alpha' - beta') k.
// No denominator, so any initial condition is admissible.
inline FieldProgram two_axis_field_invariant(const RotationProgram& prog) {
    const double lambda = prog.lambda();
    const double schi = prog.sin_chi();
    return FieldProgram::symbolic([prog, lambda, schi](double t) {
        const double da = prog.alpha.derivative(t);
        const double db = prog.beta.derivative(t);
        const double b = prog.beta.value(t);
        const double amp = da * schi;
        return Vec3{amp * std::cos(b), amp * std::sin(b), lambda * da - db};
    });
}

struct ConstantB3Synthesis {
    FieldProgram field;
    AngleProgram alpha;  // azimuth program induced by the gauge constraint
};

// Hold b3 at a constant b0 while beta runs freely. The invariant gauge then
// forces alpha = (b0 t + beta) / lambda and
//   b = (sin(chi)/lambda) (b0 + beta') (cos beta, sin beta, 0) + b0 k.
inline ConstantB3Synthesis constant_b3_field(double b0, const AngleProgram& beta, double chi) {
    if (!std::isfinite(chi) || chi < 0.0 || chi > pi)
        throw ConfigError("constant_b3_field requires chi in [0, pi]");
    const double lambda = std::cos(chi);
    if (std::abs(lambda) <= 1e-12) throw ChiDegenerate();
    const double schi = std::sin(chi);

    AngleProgram alpha = beta.scaled(1.0 / lambda);
    alpha.add(LinearTerm{b0 / lambda});

    FieldProgram field = FieldProgram::symbolic([b0, beta, lambda, schi](double t) {
        const double b = beta.value(t);
        const double amp = (schi / lambda) * (b0 + beta.derivative(t));
        return Vec3{amp * std::cos(b), amp * std::sin(b), b0};
    });
    return {std::move(field), std::move(alpha)};
}

}  // namespace spinforge
