#pragma once

#include <algorithm>
#include <cmath>
#include <variant>
#include <vector>

#include "spinforge/core.hpp"
#include "spinforge/errors.hpp"
#include "spinforge/field.hpp"
#include "spinforge/integrate.hpp"
#include "spinforge/program.hpp"
#include "spinforge/synthesize.hpp"

namespace spinforge {

// Transition probabilities for a spin prepared along +k. Both models drive
// the spin with a planar field sweeping at azimuth beta(t) plus a
// longitudinal component; lambda = cos(chi) measures how far the sweep axis
// is from orthogonal. In the frame co-rotating with the sweep the spin
// precesses rigidly about the tilted axis
//   b_eff = alpha' (sin(chi), 0, lambda),
// so the population of the flipped state oscillates between 0 and
// 1 - lambda^2 and full transfer requires lambda = 0.

// Constant sweep rates: azimuth beta0 * t, phase alpha0 * t.
struct UniformModel {
    double alpha0;
    double beta0;
    double chi;
};

// Constant longitudinal field b0 with a free azimuth program; the phase
// program is then forced to alpha = (b0 t + beta) / lambda.
struct ConstantB3Model {
    double b0;
    AngleProgram beta;
    double chi;
};

using ResonanceModel = std::variant<UniformModel, ConstantB3Model>;

namespace detail {

// cos(chi) with the numerically degenerate neighbourhood of chi = pi/2
// collapsed to exact zero, so chi = pi/2 in doubles means lambda = 0.
inline double resonance_lambda(double chi) {
    const double lambda = std::cos(chi);
    return std::abs(lambda) <= 1e-12 ? 0.0 : lambda;
}

}  // namespace detail

// P(t) = (1 - lambda^2)(1 - cos(alpha(t)))/2 for a spin starting along +k.
inline double transition_probability(const ResonanceModel& model, double t) {
    if (const auto* u = std::get_if<UniformModel>(&model)) {
        const double lambda = detail::resonance_lambda(u->chi);
        return (1.0 - lambda * lambda) * (1.0 - std::cos(u->alpha0 * t)) / 2.0;
    }
    const auto& c = std::get<ConstantB3Model>(model);
    const double lambda = detail::resonance_lambda(c.chi);
    if (lambda == 0.0) throw ChiDegenerate();
    const double alpha = (c.b0 * t + c.beta.value(t)) / lambda;
    return (1.0 - lambda * lambda) * (1.0 - std::cos(alpha)) / 2.0;
}

// (1 - n3)/2 read off an integrated trajectory, clamped against the
// integrator's sub-1e-9 norm overshoot.
inline double probability_from_trajectory(const BlochTrajectory& traj, std::size_t t_index) {
    if (t_index >= traj.samples.size())
        throw ConfigError("probability_from_trajectory index out of range");
    const double p = (1.0 - traj.samples[t_index].n3) / 2.0;
    return std::clamp(p, 0.0, 1.0);
}

// Times of full population transfer, (2n+1) pi / alpha0. These exist only
// on resonance, lambda = 0.
inline std::vector<double> resonance_times(const UniformModel& model, int n_max) {
    if (model.alpha0 == 0.0)
        throw ConfigError("resonance_times requires alpha0 != 0");
    if (detail::resonance_lambda(model.chi) != 0.0)
        throw NotMaximalResonance("probability peaks at 1 - lambda^2 < 1 when cos(chi) != 0");
    std::vector<double> out;
    for (int n = 0; n <= n_max; ++n)
        out.push_back((2.0 * n + 1.0) * pi / model.alpha0);
    return out;
}

// The driving field each model describes.
inline FieldProgram field_program(const ResonanceModel& model) {
    if (const auto* u = std::get_if<UniformModel>(&model)) {
        const RotationProgram prog(u->chi, AngleProgram::linear(u->alpha0),
                                   AngleProgram::linear(u->beta0));
        return two_axis_field_invariant(prog);
    }
    const auto& c = std::get<ConstantB3Model>(model);
    return constant_b3_field(c.b0, c.beta, c.chi).field;
}

// The rotation program behind the model, e.g. for loop-condition checks.
inline RotationProgram rotation_program(const ResonanceModel& model) {
    if (const auto* u = std::get_if<UniformModel>(&model))
        return RotationProgram(u->chi, AngleProgram::linear(u->alpha0),
                               AngleProgram::linear(u->beta0));
    const auto& c = std::get<ConstantB3Model>(model);
    return RotationProgram(c.chi, constant_b3_field(c.b0, c.beta, c.chi).alpha, c.beta);
}

}  // namespace spinforge
