// Acceptance gate: nine end-to-end checks, one line of output each.
// Exits nonzero if any check fails.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spinforge/spinforge.hpp"

using namespace spinforge;

namespace {

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double unit() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * unit(); }
    int pick(int n) { return static_cast<int>(gen() % static_cast<std::uint64_t>(n)); }
    Vec3 unit_vector() {
        const double z = uniform(-1.0, 1.0);
        const double phi = uniform(0.0, two_pi);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {r * std::cos(phi), r * std::sin(phi), z};
    }
};

AngleProgram random_program(Rng& rng) {
    AngleProgram p;
    const int terms = 1 + rng.pick(3);
    for (int i = 0; i < terms; ++i) {
        switch (rng.pick(3)) {
            case 0: p.add(LinearTerm{rng.uniform(-2.0, 2.0)}); break;
            case 1: p.add(QuadraticTerm{rng.uniform(-0.4, 0.4)}); break;
            default: p.add(SinusoidTerm{rng.uniform(-0.8, 0.8), rng.uniform(0.3, 2.5)}); break;
        }
    }
    return p;
}

constexpr int kSteps = 20000;

AngleProgram demo_beta() {
    AngleProgram beta;
    beta.add(SinusoidTerm{0.7 * 0.8, 5.0});
    beta.add(LinearTerm{1.0});
    return beta;
}

AngleProgram aperiodic_beta() {
    AngleProgram beta;
    beta.add(SinusoidTerm{0.8, 2.25});
    beta.add(LinearTerm{1.0 - 0.4 / pi});
    return beta;
}

AngleProgram ramp_beta() {
    AngleProgram beta;
    beta.add(QuadraticTerm{2.0 / pi});
    beta.add(LinearTerm{-3.0});
    return beta;
}

double max_transfer(const FieldProgram& field, double tau) {
    BlochTrajectory traj = integrate_bloch(field, BlochVector(0.0, 0.0, 1.0), TimeGrid(tau, kSteps));
    double peak = 0.0;
    for (std::size_t k = 0; k < traj.samples.size(); ++k)
        peak = std::max(peak, probability_from_trajectory(traj, k));
    return peak;
}

// criterion 1: on-resonance transfer curve matches (1 - cos alpha0 t)/2.
bool resonance_exactness(std::string& detail) {
    const double alpha0 = 5.0;
    UniformModel model{alpha0, 1.0, pi / 2};
    const double tau = 4.0 * pi / alpha0;
    BlochTrajectory traj =
        integrate_bloch(field_program(model), BlochVector(0.0, 0.0, 1.0), TimeGrid(tau, kSteps));

    double worst = 0.0;
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
        const double t = traj.grid.node(static_cast<int>(k));
        worst = std::max(worst, std::abs(probability_from_trajectory(traj, k) -
                                         (1.0 - std::cos(alpha0 * t)) / 2.0));
    }
    const double at_flip = probability_from_trajectory(traj, 5000);
    std::ostringstream os;
    os << "max |P - closed form| = " << worst << ", |P(pi/alpha0) - 1| = "
       << std::abs(at_flip - 1.0);
    detail = os.str();
    return worst < 1e-5 && std::abs(at_flip - 1.0) < 1e-5;
}

// criterion 2: peak transfer equals 1 - lambda^2 for both drive models.
bool lambda_sweep(std::string& detail) {
    double worst_uniform = 0.0, worst_b3 = 0.0, worst_cross = 0.0;
    bool degenerate_ok = false;

    for (int i = 0; i <= 5; ++i) {
        const double lambda = 0.2 * i;
        const double chi = std::acos(lambda);
        const double bound = 1.0 - lambda * lambda;

        UniformModel um{5.0, 1.0, chi};
        worst_uniform =
            std::max(worst_uniform, std::abs(max_transfer(field_program(um), two_pi / 5.0) - bound));

        if (lambda == 0.0) {
            // The constant-b3 drive divides by lambda; its own contract
            // rejects the degenerate tilt rather than sweeping through it.
            try {
                constant_b3_field(2.0, AngleProgram::linear(0.5), chi);
            } catch (const ChiDegenerate&) {
                degenerate_ok = true;
            }
            continue;
        }
        ConstantB3Model cm{2.0, AngleProgram::linear(0.5), chi};
        worst_b3 = std::max(worst_b3, std::abs(max_transfer(field_program(cm), two_pi) - bound));

        if (i == 2) {
            BlochTrajectory traj = integrate_bloch(field_program(cm), BlochVector(0.0, 0.0, 1.0),
                                                   TimeGrid(two_pi, kSteps));
            for (std::size_t k = 0; k < traj.samples.size(); ++k) {
                const double t = traj.grid.node(static_cast<int>(k));
                worst_cross = std::max(worst_cross,
                                       std::abs(probability_from_trajectory(traj, k) -
                                                transition_probability(cm, t)));
            }
        }
    }
    std::ostringstream os;
    os << "peak error: uniform " << worst_uniform << ", constant-b3 " << worst_b3
       << "; closed-vs-numeric at lambda 0.4: " << worst_cross
       << "; lambda 0 rejected by constant-b3: " << (degenerate_ok ? "yes" : "NO");
    detail = os.str();
    return worst_uniform < 1e-4 && worst_b3 < 1e-4 && worst_cross < 1e-5 && degenerate_ok;
}

RunConfig preset_run(const char* name, Mode mode) {
    return parse_run_config(*preset_config(name), mode);
}

// criterion 3: bundled fig1a closes at tau, winds (5, 1), and repeats.
bool demo_loop(std::string& detail) {
    RunConfig cfg = preset_run("fig1a", Mode::loop_check);
    const FieldProgram field = runner::source_field(cfg);
    const LoopCertificate cert = certify_loop(field, cfg.tau, cfg.steps, cfg.tol_loop);
    const auto prog = runner::source_program(cfg);
    const auto spec = prog ? check_loop_condition(*prog, cfg.tau) : std::nullopt;
    const int l = spec ? spec->l : 0;
    const int n = spec ? spec->n : 0;

    std::ostringstream os;
    os << "deviation " << cert.deviation << ", 2tau " << cert.deviation_2tau << ", winding ";
    if (spec)
        os << "(" << l << ", " << n << ")";
    else
        os << "none";
    detail = os.str();
    return cert.deviation < 1e-4 && cert.periodic && spec.has_value() && l == 5 && n == 1;
}

// criterion 4: bundled fig1b closes once but fails the second traversal.
bool aperiodic_loop(std::string& detail) {
    RunConfig cfg = preset_run("fig1b", Mode::loop_check);
    const FieldProgram field = runner::source_field(cfg);
    const LoopCertificate cert = certify_loop(field, cfg.tau, cfg.steps, cfg.tol_loop);
    std::ostringstream os;
    os << "deviation " << cert.deviation << ", 2tau " << cert.deviation_2tau;
    detail = os.str();
    return cert.deviation < 1e-4 && cert.deviation_2tau > 1e-2;
}

// criterion 5: Fresnel anchor value and the quadratic loop's windings.
bool fresnel_anchor(std::string& detail) {
    const double value = pi / std::sqrt(5.0) * fresnel_integral_c(2.0 * std::sqrt(5.0));
    ConstantB3Synthesis syn = constant_b3_field(3.0, ramp_beta(), std::acos(0.8));
    const double alpha_gap = std::abs(syn.alpha.value(two_pi) - 10.0 * pi);
    const double beta_gap = std::abs(ramp_beta().value(two_pi) - two_pi);
    std::ostringstream os;
    os << "pi 5^(-1/2) C(2 sqrt 5) = " << value << ", |alpha(tau) - 10 pi| = " << alpha_gap
       << ", |beta(tau) - 2 pi| = " << beta_gap;
    detail = os.str();
    return std::abs(value - 0.700896) < 1e-5 && alpha_gap < 1e-9 && beta_gap < 1e-9;
}

// criterion 6: geometric phase equals minus half the solid angle on all
// three bundled loops, with quadrature and closed form agreeing.
bool phase_identity(std::string& detail) {
    struct Case {
        const char* name;
        AngleProgram beta;
    };
    const Case cases[] = {{"fig1a", demo_beta()}, {"fig1b", aperiodic_beta()},
                          {"fresnel", ramp_beta()}};
    const double chi = std::acos(0.8), theta = pi / 3.0;

    double worst_area = 0.0, worst_identity = 0.0;
    for (const Case& c : cases) {
        ConstantB3Synthesis syn = constant_b3_field(3.0, c.beta, chi);
        RotationProgram prog(chi, syn.alpha, c.beta);
        const auto spec = check_loop_condition(prog, two_pi);
        if (!spec) {
            detail = std::string(c.name) + " does not close";
            return false;
        }
        const double closed = solid_angle_constant_b3(3.0, chi, theta, syn.alpha, *spec);
        PhaseDecomposition pd =
            phase_decomposition(syn.field, spinor_from_angles(theta, 0.0), two_pi, kSteps);
        worst_area = std::max(worst_area, std::abs(pd.solid_angle - closed));
        worst_identity = std::max(
            worst_identity, std::abs(wrap_angle(pd.total - pd.dynamical + closed / 2.0)));
    }
    std::ostringstream os;
    os << "max |quadrature - closed form| = " << worst_area
       << ", max |total - dynamical + area/2| (mod 2 pi) = " << worst_identity;
    detail = os.str();
    return worst_area < 1e-5 && worst_identity < 1e-3;
}

// criterion 7: synthesis round trips, both directions, at scale.
bool round_trip_suite(std::string& detail) {
    Rng rng(1001);
    double worst_forward = 0.0;
    for (int i = 0; i < 50; ++i) {
        RotationProgram prog(rng.uniform(0.05, pi - 0.05), random_program(rng),
                             random_program(rng));
        FieldProgram field = two_axis_field_invariant(prog);
        for (int j = 0; j < 2; ++j) {
            BlochVector n0(rng.unit_vector());
            BlochTrajectory traj = integrate_bloch(field, n0, TimeGrid(two_pi, kSteps));
            for (int k = 0; k <= traj.grid.steps; ++k) {
                const Vec3 exact = rotation_matrix(prog, traj.grid.node(k)) * n0.vec();
                worst_forward = std::max(
                    worst_forward,
                    (traj.samples[static_cast<std::size_t>(k)].vec() - exact).norm());
            }
        }
    }

    Rng frng(1002);
    double worst_inverse = 0.0;
    int fields_checked = 0;
    for (int i = 0; i < 50; ++i) {
        struct Component {
            double c, a, w, p;
            double operator()(double t) const { return c + a * std::sin(w * t + p); }
        };
        Component fx{frng.uniform(-1.5, 1.5), frng.uniform(-1.0, 1.0), frng.uniform(0.3, 3.0),
                     frng.uniform(0.0, two_pi)};
        Component fy{frng.uniform(-1.5, 1.5), frng.uniform(-1.0, 1.0), frng.uniform(0.3, 3.0),
                     frng.uniform(0.0, two_pi)};
        Component fz{frng.uniform(-1.5, 1.5), frng.uniform(-1.0, 1.0), frng.uniform(0.3, 3.0),
                     frng.uniform(0.0, two_pi)};
        FieldProgram field = FieldProgram::from_components(
            [fx](double t) { return fx(t); }, [fy](double t) { return fy(t); },
            [fz](double t) { return fz(t); });

        BlochVector n0(frng.unit_vector());
        BlochTrajectory traj = integrate_bloch(field, n0, TimeGrid(two_pi, kSteps));
        bool equator_hit = false;
        for (const BlochVector& s : traj.samples)
            if (std::abs(s.n3) <= 1e-9) equator_hit = true;
        if (equator_hit) continue;

        FieldProgram rebuilt = pointwise_inverse(
            traj, GaugeProgram::custom([fz](double t) { return fz(t); }));
        const SampledField* table = rebuilt.samples();
        for (std::size_t k = 0; k < table->times.size(); ++k) {
            if (std::abs(traj.samples[k].n3) <= 0.1) continue;
            const double t = table->times[k];
            worst_inverse = std::max(worst_inverse, std::hypot(table->values[k].x - fx(t),
                                                               table->values[k].y - fy(t)));
        }
        ++fields_checked;
    }

    std::ostringstream os;
    os << "forward max |n - R n0| = " << worst_forward << " (100 runs), inverse max field error = "
       << worst_inverse << " (" << fields_checked << " fields)";
    detail = os.str();
    return worst_forward < 1e-5 && worst_inverse < 5e-4 && fields_checked >= 40;
}

// criterion 8: every gauge reproduces the trajectory it was derived from.
bool gauge_independence(std::string& detail) {
    Rng rng(1003);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double b3 = rng.uniform(1.5, 3.0);
        const double ax = rng.uniform(-0.25, 0.25), wx = rng.uniform(0.5, 2.0);
        const double ay = rng.uniform(-0.25, 0.25), wy = rng.uniform(0.5, 2.0);
        FieldProgram field = FieldProgram::from_components(
            [ax, wx](double t) { return ax * std::sin(wx * t); },
            [ay, wy](double t) { return ay * std::sin(wy * t); }, [b3](double) { return b3; });
        BlochVector n0 = bloch_from_angles(rng.uniform(0.0, 0.4), rng.uniform(0.0, two_pi));
        BlochTrajectory traj = integrate_bloch(field, n0, TimeGrid(two_pi, kSteps));

        double min_n3 = 1.0;
        for (const BlochVector& s : traj.samples) min_n3 = std::min(min_n3, s.n3);
        if (min_n3 <= 0.3) {
            detail = "trajectory generator left the polar cap";
            return false;
        }

        const GaugeProgram gauges[] = {
            GaugeProgram::constant(0.0), GaugeProgram::constant(1.5),
            GaugeProgram::custom([](double t) { return 0.8 + 0.4 * std::sin(t); })};
        for (const GaugeProgram& gauge : gauges) {
            FieldProgram rebuilt = pointwise_inverse(traj, gauge);
            BlochTrajectory redriven = integrate_bloch(rebuilt, n0, traj.grid);
            for (std::size_t k = 0; k < traj.samples.size(); ++k)
                worst = std::max(worst,
                                 (redriven.samples[k].vec() - traj.samples[k].vec()).norm());
        }
    }
    std::ostringstream os;
    os << "max re-driven deviation over 10 trajectories x 3 gauges = " << worst;
    detail = os.str();
    return worst < 1e-5;
}

// criterion 9: fourth-order error scaling against the analytic solution.
bool integrator_order(std::string& detail) {
    FieldProgram field = FieldProgram::constant({0.0, 0.0, 10.0});
    BlochVector n0(1.0, 0.0, 0.0);
    const Vec3 exact{std::cos(10.0 * two_pi), -std::sin(10.0 * two_pi), 0.0};
    const complex phase = std::exp(complex(0, 10.0 * two_pi / 2));

    std::vector<double> bloch_err, prop_err;
    for (int steps : {2500, 5000, 10000, 20000}) {
        BlochTrajectory traj = integrate_bloch(field, n0, TimeGrid(two_pi, steps));
        bloch_err.push_back((traj.back().vec() - exact).norm());

        const SU2Matrix u = integrate_propagator(field, TimeGrid(two_pi, steps)).back();
        prop_err.push_back(std::sqrt(std::norm(u.u00 - phase) + std::norm(u.u01) +
                                     std::norm(u.u10) + std::norm(u.u11 - std::conj(phase))));
    }

    bool ok = true;
    std::ostringstream os;
    os << "halving-step ratios (expect 16 within 2x):";
    for (std::size_t k = 0; k + 1 < bloch_err.size(); ++k) {
        const double rb = bloch_err[k] / bloch_err[k + 1];
        const double rp = prop_err[k] / prop_err[k + 1];
        os << " bloch " << rb << ", propagator " << rp << ";";
        ok = ok && rb > 8.0 && rb < 32.0 && rp > 8.0 && rp < 32.0;
    }
    detail = os.str();
    return ok;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<bool(std::string&)> run;
    };
    const Criterion criteria[] = {
        {"resonance exactness", resonance_exactness},
        {"lambda sweep bound", lambda_sweep},
        {"fig1a loop closure and windings", demo_loop},
        {"fig1b aperiodic loop", aperiodic_loop},
        {"Fresnel anchor and quadratic windings", fresnel_anchor},
        {"phase identity on bundled loops", phase_identity},
        {"inverse round-trip property suite", round_trip_suite},
        {"gauge independence", gauge_independence},
        {"integrator order", integrator_order},
    };

    int failures = 0;
    int index = 0;
    for (const Criterion& c : criteria) {
        ++index;
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("%s criterion %d (%s): %s\n", ok ? "PASS" : "FAIL", index, c.name,
                    detail.c_str());
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
