#pragma once

#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "spinforge/config.hpp"
#include "spinforge/core.hpp"
#include "spinforge/csv.hpp"
#include "spinforge/errors.hpp"
#include "spinforge/field.hpp"
#include "spinforge/integrate.hpp"
#include "spinforge/loops.hpp"
#include "spinforge/program.hpp"
#include "spinforge/resonance.hpp"
#include "spinforge/synthesize.hpp"

namespace spinforge {

namespace runner {

using nlohmann::json;

inline BlochVector initial_bloch(const RunConfig& cfg) {
    if (!cfg.theta)
        throw ConfigError(std::string(mode_name(cfg.mode)) + " needs an 'initial' section");
    return bloch_from_angles(*cfg.theta, cfg.phi.value_or(0.0));
}

inline const std::string& output_path(const RunConfig& cfg) {
    if (!cfg.out)
        throw ConfigError(std::string(mode_name(cfg.mode)) + " needs an output path (--out)");
    return *cfg.out;
}

// The rotation program behind the configured source, when one exists. A
// single-axis drive is the pure-azimuth program (chi = 0, alpha = 0,
// beta = delta).
inline std::optional<RotationProgram> source_program(const RunConfig& cfg) {
    if (cfg.program) return cfg.program;
    if (cfg.uniform)
        return RotationProgram(cfg.uniform->chi, AngleProgram::linear(cfg.uniform->alpha0),
                               AngleProgram::linear(cfg.uniform->beta0));
    if (cfg.constant_b3) {
        const auto& d = *cfg.constant_b3;
        return RotationProgram(d.chi, constant_b3_field(d.b0, d.beta, d.chi).alpha, d.beta);
    }
    if (cfg.single_axis)
        return RotationProgram(0.0, AngleProgram(), cfg.single_axis->delta);
    return std::nullopt;
}

inline GaugeProgram single_axis_gauge(const SingleAxisDesc& d) {
    if (d.gauge_minus_delta_dot) return GaugeProgram::scaled_derivative(d.delta, -1.0);
    return GaugeProgram::constant(d.gauge_value);
}

inline FieldProgram source_field(const RunConfig& cfg) {
    if (cfg.constant_field) return FieldProgram::constant(*cfg.constant_field);
    if (cfg.uniform) return field_program(ResonanceModel{*cfg.uniform});
    if (cfg.constant_b3) {
        const auto& d = *cfg.constant_b3;
        return constant_b3_field(d.b0, d.beta, d.chi).field;
    }
    if (cfg.single_axis) {
        const auto& d = *cfg.single_axis;
        return single_axis_field(d.theta0, d.phi0, d.delta, single_axis_gauge(d));
    }
    if (cfg.sampled_path) return sampled_field_from_csv(*cfg.sampled_path);
    if (cfg.program) {
        if (cfg.gauge_given && !cfg.gauge_invariant)
            return two_axis_field_general(*cfg.program, initial_bloch(cfg),
                                          GaugeProgram::constant(cfg.gauge_value));
        return two_axis_field_invariant(*cfg.program);
    }
    throw ConfigError(std::string(mode_name(cfg.mode)) +
                      " needs a field or program source, not a trajectory");
}

inline int simulate(const RunConfig& cfg) {
    const FieldProgram field = source_field(cfg);
    const BlochTrajectory traj =
        integrate_bloch(field, initial_bloch(cfg), TimeGrid(cfg.tau, cfg.steps));
    write_trajectory_csv(output_path(cfg), traj, field);
    return 0;
}

// Target trajectory alongside the synthesized drive, one row per node.
inline int synthesize(const RunConfig& cfg, std::ostream& report) {
    const std::string& out = output_path(cfg);

    if (cfg.trajectory_path) {
        if (cfg.gauge_given && cfg.gauge_invariant)
            throw ConfigError("the invariant gauge needs a rotation program, not a trajectory");
        const BlochTrajectory traj = bloch_trajectory_from_csv(*cfg.trajectory_path);
        const FieldProgram field =
            pointwise_inverse(traj, GaugeProgram::constant(cfg.gauge_given ? cfg.gauge_value : 0.0));
        write_trajectory_csv(out, traj, field);
        return 0;
    }

    const FieldProgram field = source_field(cfg);
    const TimeGrid grid(cfg.tau, cfg.steps);

    std::vector<BlochVector> target;
    target.reserve(static_cast<std::size_t>(grid.size()));
    if (cfg.single_axis) {
        const auto& d = *cfg.single_axis;
        for (int k = 0; k < grid.size(); ++k)
            target.push_back(bloch_from_angles(d.theta0, d.phi0 + d.delta.value(grid.node(k))));
    } else if (const auto prog = source_program(cfg)) {
        const Vec3 n0 = initial_bloch(cfg).vec();
        for (int k = 0; k < grid.size(); ++k)
            target.emplace_back(rotation_matrix(*prog, grid.node(k)) * n0);
    } else {
        throw ConfigError("synthesize needs a program-backed field or a trajectory source");
    }

    write_trajectory_csv(out, {grid, std::move(target), 0.0}, field);
    if (cfg.constant_b3) {
        const auto& d = *cfg.constant_b3;
        const json echo{{"alpha", cfg::program_to_json(constant_b3_field(d.b0, d.beta, d.chi).alpha)}};
        report << echo.dump(2) << "\n";
    }
    return 0;
}

inline int resonance(const RunConfig& cfg) {
    std::optional<ResonanceModel> model;
    if (cfg.uniform) model = ResonanceModel{*cfg.uniform};
    if (cfg.constant_b3) {
        const auto& d = *cfg.constant_b3;
        model = ResonanceModel{ConstantB3Model{d.b0, d.beta, d.chi}};
    }
    if (!model)
        throw ConfigError("resonance needs a field.uniform or field.constant_b3 model");

    const TimeGrid grid(cfg.tau, cfg.steps);
    std::vector<double> times(static_cast<std::size_t>(grid.size()));
    std::vector<double> probs(times.size());
    for (int k = 0; k < grid.size(); ++k) {
        times[static_cast<std::size_t>(k)] = grid.node(k);
        probs[static_cast<std::size_t>(k)] = transition_probability(*model, grid.node(k));
    }
    write_probability_csv(output_path(cfg), times, probs);
    return 0;
}

inline void write_report(const RunConfig& cfg, const json& body, std::ostream& report) {
    report << body.dump(2) << "\n";
    if (cfg.out) {
        std::ofstream f = detail::open_for_write(*cfg.out);
        f << body.dump(2) << "\n";
        if (!f) throw IoError("failed writing '" + *cfg.out + "'");
    }
}

inline int loop_check(const RunConfig& cfg, std::ostream& report, std::ostream& err) {
    const FieldProgram field = source_field(cfg);
    const LoopCertificate cert = certify_loop(field, cfg.tau, cfg.steps, cfg.tol_loop);

    json body{{"tau", cert.tau},
              {"deviation", cert.deviation},
              {"global_phase", cert.global_phase},
              {"periodic", cert.periodic},
              {"deviation_2tau", cert.deviation_2tau},
              {"certified", cert.certified()},
              {"l", nullptr},
              {"n", nullptr}};
    if (const auto prog = source_program(cfg)) {
        if (const auto spec = check_loop_condition(*prog, cfg.tau)) {
            body["l"] = spec->l;
            body["n"] = spec->n;
        }
    }
    write_report(cfg, body, report);
    if (!cert.certified()) {
        err << "error: certification: loop deviation " << cert.deviation << " exceeds tolerance "
            << cfg.tol_loop << "\n";
        return static_cast<int>(ErrorCategory::certification);
    }
    return 0;
}

inline int phase(const RunConfig& cfg, std::ostream& report) {
    const FieldProgram field = source_field(cfg);
    if (!cfg.theta) throw ConfigError("phase needs an 'initial' section");
    const Spinor psi0 = spinor_from_angles(*cfg.theta, cfg.phi.value_or(0.0));
    const PhaseDecomposition pd =
        phase_decomposition(field, psi0, cfg.tau, cfg.steps, cfg.tol_loop);

    json body{{"total", pd.total},
              {"dynamical", pd.dynamical},
              {"geometric", pd.geometric},
              {"solid_angle", pd.solid_angle}};

    // Cross-check against the winding closed form where it applies: the
    // initial state must sit in the x-z plane and the source must carry a
    // rotation program that closes at tau.
    if (std::abs(wrap_angle(cfg.phi.value_or(0.0))) < 1e-12) {
        if (const auto prog = source_program(cfg)) {
            if (const auto spec = check_loop_condition(*prog, cfg.tau)) {
                if (cfg.constant_b3) {
                    const auto& d = *cfg.constant_b3;
                    body["solid_angle_closed_form"] = solid_angle_constant_b3(
                        d.b0, d.chi, *cfg.theta, constant_b3_field(d.b0, d.beta, d.chi).alpha,
                        *spec);
                } else {
                    body["solid_angle_closed_form"] =
                        solid_angle_closed_form(*prog, *spec, *cfg.theta);
                }
            }
        }
    }
    write_report(cfg, body, report);
    return 0;
}

}  // namespace runner

inline const char* error_prefix(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::config: return "config";
        case ErrorCategory::singularity: return "singularity";
        case ErrorCategory::certification: return "certification";
        case ErrorCategory::io: return "io";
    }
    return "?";
}

// Execute one parsed run. Reports go to `report` (stdout in the CLI);
// errors print a single machine-parsable line to `err` and map to the exit
// codes of ErrorCategory.
inline int run(const RunConfig& cfg, std::ostream& report = std::cout,
               std::ostream& err = std::cerr) {
    try {
        switch (cfg.mode) {
            case Mode::simulate: return runner::simulate(cfg);
            case Mode::synthesize: return runner::synthesize(cfg, report);
            case Mode::resonance: return runner::resonance(cfg);
            case Mode::loop_check: return runner::loop_check(cfg, report, err);
            case Mode::phase: return runner::phase(cfg, report);
        }
        throw ConfigError("unknown mode");
    } catch (const Error& e) {
        err << "error: " << error_prefix(e.category()) << ": " << e.what() << "\n";
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        err << "error: internal: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace spinforge
