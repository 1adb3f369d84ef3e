#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "spinforge/spinforge.hpp"

int main(int argc, char** argv) {
    CLI::App app{"spin-1/2 dynamics: simulate trajectories, synthesize control fields, "
                 "evaluate resonance tables, certify evolution loops, decompose phases"};
    app.require_subcommand(1);

    std::string config_arg;
    std::string out_arg;
    int steps_arg = 0;
    double tol_arg = 0.0;

    const std::pair<const char*, const char*> modes[] = {
        {"simulate", "integrate a trajectory and write it as CSV"},
        {"synthesize", "derive a driving field for a target and write it as CSV"},
        {"resonance", "tabulate the closed-form transition probability"},
        {"loop-check", "certify that the evolution closes at tau"},
        {"phase", "decompose the phase acquired over one loop"},
    };
    for (const auto& [name, desc] : modes) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", config_arg, "bundled config name or path to a JSON config")
            ->required();
        sub->add_option("--out", out_arg, "output file path");
        sub->add_option("--steps", steps_arg, "integrator steps (overrides config)");
        sub->add_option("--tol", tol_arg, "loop certification tolerance (overrides config)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        std::cerr << "error: config: " << e.what() << "\n";
        return 1;
    }

    const CLI::App* sub = app.get_subcommands().at(0);
    const auto mode = spinforge::mode_from_name(sub->get_name());
    if (!mode) {
        std::cerr << "error: config: unknown mode '" << sub->get_name() << "'\n";
        return 1;
    }

    std::optional<int> steps;
    if (sub->count("--steps") > 0) steps = steps_arg;
    std::optional<double> tol;
    if (sub->count("--tol") > 0) tol = tol_arg;
    std::optional<std::string> out;
    if (sub->count("--out") > 0) out = out_arg;

    try {
        const nlohmann::json j = spinforge::load_config_json(config_arg);
        const spinforge::RunConfig cfg = spinforge::parse_run_config(j, *mode, steps, tol, out);
        return spinforge::run(cfg);
    } catch (const spinforge::Error& e) {
        std::cerr << "error: " << spinforge::error_prefix(e.category()) << ": " << e.what()
                  << "\n";
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
}
