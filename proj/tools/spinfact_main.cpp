#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spinfact/scenario.hpp"

namespace {

struct CommonArgs {
    std::string config_file;
    std::string out_dir = ".";
    int jobs = 1;
    std::string stepper;
    int steps = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("config", args.config_file, "scenario config file")->required();
    cmd->add_option("--out", args.out_dir, "output directory (default: current)");
    cmd->add_option("--jobs", args.jobs, "concurrent sub-tasks (default 1)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--stepper", args.stepper, "override stepper (exp-midpoint | magnus4)");
    cmd->add_option("--steps", args.steps, "override step count")->check(CLI::PositiveNumber);
}

spinfact::RunOptions make_options(const CommonArgs& args) {
    spinfact::RunOptions options;
    options.out_dir = args.out_dir;
    options.jobs = args.jobs;
    if (!args.stepper.empty()) options.stepper_override = spinfact::parse_stepper(args.stepper);
    if (args.steps > 0) options.steps_override = args.steps;
    return options;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spinfact: factorization U = A D N of spin evolution in a time-varying field"};
    app.require_subcommand(1);

    CommonArgs run_args, verify_args;
    CLI::App* run_cmd = app.add_subcommand("run", "execute a scenario and write result files");
    add_common(run_cmd, run_args);
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "run the invariant suite for a scenario, no trace files");
    add_common(verify_cmd, verify_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            const auto config = spinfact::parse_scenario_file(run_args.config_file);
            return spinfact::run_scenario(config, make_options(run_args), std::cerr);
        }
        const auto config = spinfact::parse_scenario_file(verify_args.config_file);
        return spinfact::verify_scenario(config, make_options(verify_args), std::cout);
    } catch (const spinfact::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
