#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <utility>

#include "json.hpp"

#include "spinforge/core.hpp"
#include "spinforge/errors.hpp"
#include "spinforge/loops.hpp"
#include "spinforge/program.hpp"
#include "spinforge/resonance.hpp"

namespace spinforge {

enum class Mode { simulate, synthesize, resonance, loop_check, phase };

inline const char* mode_name(Mode m) {
    switch (m) {
        case Mode::simulate: return "simulate";
        case Mode::synthesize: return "synthesize";
        case Mode::resonance: return "resonance";
        case Mode::loop_check: return "loop-check";
        case Mode::phase: return "phase";
    }
    return "?";
}

inline std::optional<Mode> mode_from_name(const std::string& s) {
    if (s == "simulate") return Mode::simulate;
    if (s == "synthesize") return Mode::synthesize;
    if (s == "resonance") return Mode::resonance;
    if (s == "loop-check") return Mode::loop_check;
    if (s == "phase") return Mode::phase;
    return std::nullopt;
}

struct ConstantB3Desc {
    double b0;
    double chi;
    AngleProgram beta;
};

struct SingleAxisDesc {
    double theta0;
    double phi0;
    AngleProgram delta;
    bool gauge_minus_delta_dot;  // gauge "minus-delta-dot": b3 = -delta'
    double gauge_value;          // used otherwise
};

// Fully resolved run request: mode, grid, initial state, exactly one
// field/program/trajectory source, gauge choice, output path, tolerances.
struct RunConfig {
    Mode mode;
    double tau;
    int steps;
    double tol_loop;

    std::optional<double> theta;
    std::optional<double> phi;
    std::optional<std::string> out;

    std::optional<RotationProgram> program;
    std::optional<Vec3> constant_field;
    std::optional<UniformModel> uniform;
    std::optional<ConstantB3Desc> constant_b3;
    std::optional<SingleAxisDesc> single_axis;
    std::optional<std::string> sampled_path;
    std::optional<std::string> trajectory_path;

    bool gauge_invariant = true;
    double gauge_value = 0.0;
    bool gauge_given = false;
};

namespace cfg {

using nlohmann::json;

inline const json& need(const json& j, const char* key, const char* where) {
    const auto it = j.find(key);
    if (it == j.end())
        throw ConfigError(std::string(where) + " is missing required key '" + key + "'");
    return *it;
}

inline double number(const json& j, const char* where) {
    if (!j.is_number())
        throw ConfigError(std::string(where) + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(std::string(where) + " must be finite");
    return v;
}

inline double number_at(const json& j, const char* key, const char* where) {
    return number(need(j, key, where), (std::string(where) + "." + key).c_str());
}

// Axis tilt given either directly as "chi" or through "lambda" = cos(chi).
inline double chi_from(const json& j, const char* where) {
    const bool has_chi = j.contains("chi");
    const bool has_lambda = j.contains("lambda");
    if (has_chi == has_lambda)
        throw ConfigError(std::string(where) + " needs exactly one of 'chi' or 'lambda'");
    if (has_chi) {
        const double chi = number(j["chi"], (std::string(where) + ".chi").c_str());
        if (chi < 0.0 || chi > pi)
            throw ConfigError(std::string(where) + ".chi must lie in [0, pi]");
        return chi;
    }
    const double lambda = number(j["lambda"], (std::string(where) + ".lambda").c_str());
    if (lambda < -1.0 || lambda > 1.0)
        throw ConfigError(std::string(where) + ".lambda must lie in [-1, 1]");
    return std::acos(lambda);
}

// Term lists like [{"lin": 3.5}, {"quad": -1}, {"sin": {"amp": 0.56, "freq": 5}}].
inline AngleProgram angle_program(const json& j, const char* where) {
    if (!j.is_array())
        throw ConfigError(std::string(where) + " must be an array of term objects");
    AngleProgram out;
    for (const auto& term : j) {
        if (!term.is_object() || term.size() != 1)
            throw ConfigError(std::string(where) + " terms must be single-key objects");
        if (term.contains("lin")) {
            out.add(LinearTerm{number(term["lin"], where)});
        } else if (term.contains("quad")) {
            out.add(QuadraticTerm{number(term["quad"], where)});
        } else if (term.contains("sin")) {
            const json& s = term["sin"];
            out.add(SinusoidTerm{number_at(s, "amp", where), number_at(s, "freq", where)});
        } else {
            throw ConfigError(std::string(where) + " terms must be 'lin', 'quad', or 'sin'");
        }
    }
    return out;
}

inline json term_to_json(const AngleTerm& term) {
    if (const auto* lin = std::get_if<LinearTerm>(&term)) return json{{"lin", lin->rate}};
    if (const auto* quad = std::get_if<QuadraticTerm>(&term))
        return json{{"quad", quad->curvature}};
    const auto& s = std::get<SinusoidTerm>(term);
    return json{{"sin", {{"amp", s.amplitude}, {"freq", s.frequency}}}};
}

inline json program_to_json(const AngleProgram& p) {
    json out = json::array();
    for (const auto& term : p.terms()) out.push_back(term_to_json(term));
    return out;
}

inline void parse_source(const json& j, RunConfig& out) {
    int sources = 0;
    if (j.contains("field")) ++sources;
    if (j.contains("program")) ++sources;
    if (j.contains("trajectory")) ++sources;
    if (sources != 1)
        throw ConfigError("config needs exactly one of 'field', 'program', 'trajectory'");

    if (j.contains("program")) {
        const json& p = need(j, "program", "config");
        out.program.emplace(chi_from(p, "program"),
                            angle_program(need(p, "alpha", "program"), "program.alpha"),
                            angle_program(need(p, "beta", "program"), "program.beta"));
        return;
    }
    if (j.contains("trajectory")) {
        const json& t = j["trajectory"];
        if (!t.is_object() || !t.contains("path") || !t["path"].is_string())
            throw ConfigError("trajectory source needs a 'path' string");
        out.trajectory_path = t["path"].get<std::string>();
        return;
    }

    const json& f = j["field"];
    if (!f.is_object() || f.size() != 1)
        throw ConfigError("field must be an object with exactly one descriptor");
    if (f.contains("constant")) {
        const json& c = f["constant"];
        if (!c.is_array() || c.size() != 3)
            throw ConfigError("field.constant must be [b1, b2, b3]");
        out.constant_field = Vec3{number(c[0], "field.constant"), number(c[1], "field.constant"),
                                  number(c[2], "field.constant")};
    } else if (f.contains("uniform")) {
        const json& u = f["uniform"];
        out.uniform = UniformModel{number_at(u, "alpha0", "field.uniform"),
                                   number_at(u, "beta0", "field.uniform"),
                                   chi_from(u, "field.uniform")};
    } else if (f.contains("constant_b3")) {
        const json& c = f["constant_b3"];
        out.constant_b3 = ConstantB3Desc{
            number_at(c, "b0", "field.constant_b3"), chi_from(c, "field.constant_b3"),
            angle_program(need(c, "beta", "field.constant_b3"), "field.constant_b3.beta")};
    } else if (f.contains("single_axis")) {
        const json& s = f["single_axis"];
        SingleAxisDesc desc{number_at(s, "theta0", "field.single_axis"),
                            number_at(s, "phi0", "field.single_axis"),
                            angle_program(need(s, "delta", "field.single_axis"),
                                          "field.single_axis.delta"),
                            true, 0.0};
        if (s.contains("gauge")) {
            const json& g = s["gauge"];
            if (g.is_string() && g.get<std::string>() == "minus-delta-dot") {
                desc.gauge_minus_delta_dot = true;
            } else {
                desc.gauge_minus_delta_dot = false;
                desc.gauge_value = number(g, "field.single_axis.gauge");
            }
        }
        out.single_axis = std::move(desc);
    } else if (f.contains("sampled")) {
        const json& s = f["sampled"];
        if (!s.is_object() || !s.contains("path") || !s["path"].is_string())
            throw ConfigError("field.sampled needs a 'path' string");
        out.sampled_path = s["path"].get<std::string>();
    } else {
        throw ConfigError(
            "field descriptor must be one of constant, uniform, constant_b3, single_axis, sampled");
    }
}

inline int default_steps_from_env() {
    if (const char* env = std::getenv("SPINFORGE_STEPS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 2 || v > 100000000)
            throw ConfigError("SPINFORGE_STEPS must be an integer >= 2");
        return static_cast<int>(v);
    }
    return default_grid_steps;
}

}  // namespace cfg

// Assemble a validated RunConfig. Grid-step precedence: the --steps flag,
// then the config file, then SPINFORGE_STEPS, then 20000.
inline RunConfig parse_run_config(const nlohmann::json& j, Mode mode,
                                  std::optional<int> steps_flag = std::nullopt,
                                  std::optional<double> tol_flag = std::nullopt,
                                  std::optional<std::string> out_flag = std::nullopt) {
    using cfg::number;
    if (!j.is_object()) throw ConfigError("config root must be an object");

    RunConfig out;
    out.mode = mode;
    if (j.contains("mode")) {
        if (!j["mode"].is_string() || !mode_from_name(j["mode"].get<std::string>()))
            throw ConfigError("config 'mode' is not a known mode");
        if (*mode_from_name(j["mode"].get<std::string>()) != mode)
            throw ConfigError(std::string("config is for mode '") +
                              j["mode"].get<std::string>() + "', not '" + mode_name(mode) + "'");
    }

    const nlohmann::json& grid = cfg::need(j, "grid", "config");
    out.tau = cfg::number_at(grid, "tau", "grid");
    if (out.tau <= 0.0) throw ConfigError("grid.tau must be positive");

    if (steps_flag) {
        out.steps = *steps_flag;
    } else if (grid.contains("steps")) {
        if (!grid["steps"].is_number_integer())
            throw ConfigError("grid.steps must be an integer");
        out.steps = grid["steps"].get<int>();
    } else {
        out.steps = cfg::default_steps_from_env();
    }
    if (out.steps < 2) throw ConfigError("grid steps must be >= 2");

    if (j.contains("initial")) {
        const nlohmann::json& init = j["initial"];
        out.theta = cfg::number_at(init, "theta", "initial");
        out.phi = init.contains("phi") ? number(init["phi"], "initial.phi") : 0.0;
    }

    cfg::parse_source(j, out);

    if (j.contains("gauge")) {
        out.gauge_given = true;
        const nlohmann::json& g = j["gauge"];
        if (g.is_string() && g.get<std::string>() == "invariant") {
            out.gauge_invariant = true;
        } else {
            out.gauge_invariant = false;
            out.gauge_value = number(g, "gauge");
        }
        if (!out.program && !out.trajectory_path)
            throw ConfigError("'gauge' applies only to program or trajectory sources");
    }

    if (tol_flag) {
        out.tol_loop = *tol_flag;
    } else if (j.contains("tolerances") && j["tolerances"].contains("loop")) {
        out.tol_loop = number(j["tolerances"]["loop"], "tolerances.loop");
    } else {
        out.tol_loop = default_loop_tol;
    }
    if (!(out.tol_loop > 0.0)) throw ConfigError("loop tolerance must be positive");

    if (out_flag) {
        out.out = *out_flag;
    } else if (j.contains("out")) {
        if (!j["out"].is_string()) throw ConfigError("'out' must be a string path");
        out.out = j["out"].get<std::string>();
    }
    return out;
}

// Bundled run configurations, addressable by name in --config.
inline std::optional<nlohmann::json> preset_config(const std::string& name) {
    using nlohmann::json;
    const json grid{{"tau", two_pi}, {"steps", 20000}};
    const json tilted_initial{{"theta", pi / 3.0}, {"phi", 0.0}};

    if (name == "fig1a") {
        // Sinusoidal azimuth wobble; the induced phase program winds 5 times
        // while the azimuth winds once, and the drive is 2 pi periodic.
        return json{{"grid", grid},
                    {"initial", tilted_initial},
                    {"field",
                     {{"constant_b3",
                       {{"b0", 3.0},
                        {"lambda", 0.8},
                        {"beta", json::array({json{{"sin", {{"amp", 0.7 * 0.8}, {"freq", 5.0}}}},
                                              json{{"lin", 1.0}}})}}}}}};
    }
    if (name == "fig1b") {
        // Same closure windings, but the azimuth frequency 9/4 makes the
        // drive aperiodic: the loop does not survive a second traversal.
        return json{{"grid", grid},
                    {"initial", tilted_initial},
                    {"field",
                     {{"constant_b3",
                       {{"b0", 3.0},
                        {"lambda", 0.8},
                        {"beta", json::array({json{{"sin", {{"amp", 0.8}, {"freq", 2.25}}}},
                                              json{{"lin", 1.0 - 0.4 / pi}}})}}}}}};
    }
    if (name == "fresnel-loop") {
        // Quadratic phase program; the solid-angle correction integral is a
        // Fresnel integral.
        return json{{"grid", grid},
                    {"initial", tilted_initial},
                    {"field",
                     {{"constant_b3",
                       {{"b0", 3.0},
                        {"lambda", 0.8},
                        {"beta", json::array({json{{"quad", 2.0 / pi}}, json{{"lin", -3.0}}})}}}}}};
    }
    if (name == "rabi") {
        // Orthogonal-axis sweep: full population transfer at t = pi/5.
        return json{{"grid", {{"tau", 4.0 * pi / 5.0}, {"steps", 20000}}},
                    {"initial", {{"theta", 0.0}, {"phi", 0.0}}},
                    {"field", {{"uniform", {{"alpha0", 5.0}, {"beta0", 1.0}, {"lambda", 0.0}}}}}};
    }
    return std::nullopt;
}

// --config accepts a bundled name first, then a filesystem path.
inline nlohmann::json load_config_json(const std::string& name_or_path) {
    if (auto preset = preset_config(name_or_path)) return *preset;
    std::ifstream f(name_or_path);
    if (!f)
        throw ConfigError("'" + name_or_path + "' is neither a bundled config name nor a readable file");
    try {
        return nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("cannot parse '" + name_or_path + "': " + e.what());
    }
}

}  // namespace spinforge
