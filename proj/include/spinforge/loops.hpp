#pragma once

#include <cmath>
#include <cstdlib>
#include <optional>
#include <vector>

#include "spinforge/core.hpp"
#include "spinforge/errors.hpp"
#include "spinforge/field.hpp"
#include "spinforge/integrate.hpp"
#include "spinforge/program.hpp"
#include "spinforge/quadrature.hpp"

namespace spinforge {

inline constexpr int default_grid_steps = 20000;
inline constexpr double default_loop_tol = 1e-4;

// Integer winding counts at closure: alpha(tau) = 2 pi l, beta(tau) = 2 pi n.
struct LoopSpec {
    double tau;
    long l;
    long n;
};

// Result of numerically certifying that U(tau) is the identity up to a
// global phase. deviation = min over phi of the Frobenius distance
// ||U - e^{i phi} I||, which is zero exactly for a loop. The periodic flag
// reports whether the SECOND traversal also closes, U(2 tau) ~ I; fields
// that are not tau-periodic generally fail that.
struct LoopCertificate {
    double tau;
    double deviation;
    double global_phase;
    bool periodic;
    double deviation_2tau;
    double tol;

    bool certified() const { return deviation < tol; }
};

struct PhaseDecomposition {
    double total;
    double dynamical;
    double geometric;   // total - dynamical, wrapped to (-pi, pi]
    double solid_angle;
};

// min over phi of ||U - e^{i phi} I||_F = sqrt(||U||_F^2 + 2 - 2 |tr U|).
inline double identity_deviation(const SU2Matrix& u) {
    const double d = u.frobenius_norm_sq() + 2.0 - 2.0 * std::abs(u.trace());
    return std::sqrt(std::max(0.0, d));
}

// The phi attaining that minimum.
inline double global_phase(const SU2Matrix& u) { return std::arg(u.trace()); }

// Both winding ratios within tol of integers at tau, or nothing.
inline std::optional<LoopSpec> check_loop_condition(const RotationProgram& prog, double tau,
                                                    double tol = 1e-9) {
    if (!std::isfinite(tau) || tau <= 0.0)
        throw ConfigError("check_loop_condition requires tau > 0");
    const double wa = prog.alpha.value(tau) / two_pi;
    const double wb = prog.beta.value(tau) / two_pi;
    const double ra = std::round(wa), rb = std::round(wb);
    if (std::abs(wa - ra) > tol || std::abs(wb - rb) > tol) return std::nullopt;
    return LoopSpec{tau, static_cast<long>(ra), static_cast<long>(rb)};
}

inline LoopCertificate certify_loop(const FieldProgram& field, double tau,
                                    int grid_steps = default_grid_steps,
                                    double tol_loop = default_loop_tol) {
    if (!std::isfinite(tau) || tau <= 0.0)
        throw ConfigError("certify_loop requires tau > 0");
    const SU2Matrix u_tau = integrate_propagator(field, TimeGrid(tau, grid_steps)).back();
    const SU2Matrix u_2tau =
        integrate_propagator(field, TimeGrid(2.0 * tau, 2 * grid_steps)).back();
    const double dev = identity_deviation(u_tau);
    const double dev2 = identity_deviation(u_2tau);
    return {tau, dev, global_phase(u_tau), dev2 < tol_loop, dev2, tol_loop};
}

namespace detail {

// Fourth-order derivative estimates on a uniform grid: five-point central
// stencils inside, one-sided five-point stencils at the edges. The edge
// stencils matter because a loop field need not be tau-periodic, so the
// integrand may have a corner at the seam and wraparound stencils would
// poison the end nodes.
inline std::vector<double> derivative_samples(const std::vector<double>& v, double h) {
    const std::size_t n = v.size();
    std::vector<double> d(n);
    if (n < 5) {
        if (n < 3) throw ConfigError("derivative estimate needs at least three samples");
        d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
        for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (v[k + 1] - v[k - 1]) / (2.0 * h);
        d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
        return d;
    }
    const double s = 1.0 / (12.0 * h);
    d[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) * s;
    d[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) * s;
    for (std::size_t k = 2; k + 2 < n; ++k)
        d[k] = (v[k - 2] - 8.0 * v[k - 1] + 8.0 * v[k + 1] - v[k + 2]) * s;
    d[n - 2] = (3.0 * v[n - 1] + 10.0 * v[n - 2] - 18.0 * v[n - 3] + 6.0 * v[n - 4] - v[n - 5]) * s;
    d[n - 1] = (25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3] - 16.0 * v[n - 4] + 3.0 * v[n - 5]) * s;
    return d;
}

}  // namespace detail

// Oriented solid angle swept by a closed trajectory,
//   area = integral of (n1 n2' - n2 n1') / (1 + n3) dt,
// by Simpson quadrature with finite-difference derivatives. The integrand
// has a pole at the south pole; trajectories passing near it must be
// rotated into a safer frame by the caller first.
inline double solid_angle_quadrature(const BlochTrajectory& traj) {
    const auto& s = traj.samples;
    const std::size_t n = s.size();
    const double gap = (s.back().vec() - s.front().vec()).norm();
    if (gap >= 1e-4) throw OpenTrajectory(gap);

    std::vector<double> n1(n), n2(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (1.0 + s[k].n3 <= 1e-6)
            throw SouthPoleSingularity(traj.grid.node(static_cast<int>(k)));
        n1[k] = s[k].n1;
        n2[k] = s[k].n2;
    }
    const double h = traj.grid.dt();
    const std::vector<double> d1 = detail::derivative_samples(n1, h);
    const std::vector<double> d2 = detail::derivative_samples(n2, h);

    std::vector<double> integrand(n);
    for (std::size_t k = 0; k < n; ++k)
        integrand[k] = (n1[k] * d2[k] - n2[k] * d1[k]) / (1.0 + s[k].n3);
    return simpson_samples(integrand, h);
}

namespace detail {

inline void require_winding(double value, long winding, const char* name) {
    if (std::abs(value / two_pi - static_cast<double>(winding)) > 1e-9)
        throw LoopConditionViolated(std::string(name) +
                                    " does not reach its declared winding at tau");
}

inline double winding_terms(long l, long n, double lambda, double theta, double chi) {
    return two_pi * static_cast<double>(n) * (1.0 - lambda * std::cos(theta - chi)) -
           two_pi * static_cast<double>(l) * (1.0 - std::cos(theta - chi));
}

}  // namespace detail

// Solid angle of the loop traced from n(0) = (sin theta, 0, cos theta)
// under a rotation program, without integrating the trajectory:
//   2 pi n [1 - cos(chi) cos(theta-chi)] - 2 pi l [1 - cos(theta-chi)]
//     + sin(chi) sin(theta-chi) * integral of beta' cos(alpha) dt.
inline double solid_angle_closed_form(const RotationProgram& prog, const LoopSpec& spec,
                                      double theta, int quad_intervals = default_grid_steps) {
    if (!(spec.tau > 0.0)) throw ConfigError("LoopSpec requires tau > 0");
    detail::require_winding(prog.alpha.value(spec.tau), spec.l, "alpha");
    detail::require_winding(prog.beta.value(spec.tau), spec.n, "beta");

    const double residual = simpson(
        [&prog](double t) { return prog.beta.derivative(t) * std::cos(prog.alpha.value(t)); },
        0.0, spec.tau, quad_intervals);
    return detail::winding_terms(spec.l, spec.n, prog.lambda(), theta, prog.chi) +
           prog.sin_chi() * std::sin(theta - prog.chi) * residual;
}

// Same quantity for a constant-b3 drive, where the residual integral only
// involves alpha:  ... - b0 sin(chi) sin(theta-chi) * integral of cos(alpha) dt.
inline double solid_angle_constant_b3(double b0, double chi, double theta,
                                      const AngleProgram& alpha, const LoopSpec& spec,
                                      int quad_intervals = default_grid_steps) {
    if (!(spec.tau > 0.0)) throw ConfigError("LoopSpec requires tau > 0");
    const double lambda = std::cos(chi);
    if (std::abs(lambda) <= 1e-12) throw ChiDegenerate();
    detail::require_winding(alpha.value(spec.tau), spec.l, "alpha");
    // beta is implied by the gauge constraint: beta = lambda alpha - b0 t.
    detail::require_winding(lambda * alpha.value(spec.tau) - b0 * spec.tau, spec.n, "beta");

    const double residual =
        simpson([&alpha](double t) { return std::cos(alpha.value(t)); }, 0.0, spec.tau,
                quad_intervals);
    return detail::winding_terms(spec.l, spec.n, lambda, theta, chi) -
           b0 * std::sin(chi) * std::sin(theta - chi) * residual;
}

// Split the phase acquired over one loop into its energetic and geometric
// parts. total = arg<psi0|psi(tau)>; dynamical = (1/2) integral of b . n dt;
// geometric is their difference on the principal branch. For spin-1/2 the
// geometric part equals minus half the solid angle (mod 2 pi), which is
// reported alongside from trajectory quadrature.
inline PhaseDecomposition phase_decomposition(const FieldProgram& field, const Spinor& psi0,
                                              double tau, int grid_steps = default_grid_steps,
                                              double tol_loop = default_loop_tol) {
    if (!std::isfinite(tau) || tau <= 0.0)
        throw ConfigError("phase_decomposition requires tau > 0");
    const PropagatorTrajectory prop = integrate_propagator(field, TimeGrid(tau, grid_steps));
    const double dev = identity_deviation(prop.back());
    if (dev >= tol_loop) throw NotCyclic(dev);

    const double total = std::arg(inner(psi0, prop.back().apply(psi0)));

    const BlochTrajectory traj =
        integrate_bloch(field, bloch_from_spinor(psi0), TimeGrid(tau, grid_steps));
    std::vector<double> energy(traj.samples.size());
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
        const double t = traj.grid.node(static_cast<int>(k));
        energy[k] = 0.5 * dot(field.value(t), traj.samples[k].vec());
    }
    const double dynamical = simpson_samples(energy, traj.grid.dt());
    const double geometric = wrap_angle(total - dynamical);
    return {total, dynamical, geometric, solid_angle_quadrature(traj)};
}

// C(u) = integral of cos(pi s^2 / 2) from 0 to u.
inline double fresnel_integral_c(double u) {
    if (!std::isfinite(u)) throw ConfigError("fresnel_integral_c requires finite u");
    return adaptive_simpson([](double s) { return std::cos(pi * s * s / 2.0); }, 0.0, u, 1e-9);
}

}  // namespace spinforge
