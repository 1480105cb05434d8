// Copyright 2026 The polsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "polsim/error.h"
#include "polsim/experiment.h"

namespace {

constexpr int EXIT_CONFIG_ERROR = 2;
constexpr int EXIT_CROSS_CHECK = 3;

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::string format = "json";
};

struct SamplingOverrides {
    std::optional<uint64_t> shots;
    std::optional<uint64_t> seed;
    std::optional<uint32_t> shards;
};

unsigned thread_budget() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("SIM_THREADS")) {
        try {
            long v = std::stol(env);
            if (v >= 1) {
                return static_cast<unsigned>(v);
            }
        } catch (const std::exception &) {
        }
        std::cerr << "warning: ignoring invalid SIM_THREADS=" << env << "\n";
    }
    return hw;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << text;
}

polsim::ReportFormat parse_format(const std::string &name) {
    return name == "csv" ? polsim::ReportFormat::Csv : polsim::ReportFormat::Json;
}

int report_error(const polsim::SimError &e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
        case polsim::ErrorCode::SchemaError:
        case polsim::ErrorCode::RangeError:
            return EXIT_CONFIG_ERROR;
        case polsim::ErrorCode::CrossCheckFailure:
            return EXIT_CROSS_CHECK;
        default:
            return EXIT_FAILURE;
    }
}

void add_common(CLI::App *cmd, CommonArgs &args) {
    cmd->add_option("config", args.config_path, "Experiment description (JSON)")->required();
    cmd->add_option("-o,--out", args.out_path, "Write the report here instead of stdout");
    cmd->add_option("-f,--format", args.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));
}

polsim::ExperimentConfig load_config(const CommonArgs &args, const SamplingOverrides &overrides) {
    auto config = polsim::parse_experiment(read_file(args.config_path));
    if (overrides.shots) {
        config.sampling.shots = *overrides.shots;
    }
    if (overrides.seed) {
        config.sampling.seed = *overrides.seed;
    }
    if (overrides.shards) {
        config.sampling.shards = *overrides.shards;
    }
    return config;
}

int run_exact(const CommonArgs &args) {
    auto config = load_config(args, {});
    polsim::RunOptions options;
    options.monte_carlo = false;
    auto report = polsim::run_experiment(config, options);
    write_output(args.out_path, polsim::serialize_results(report, parse_format(args.format)));
    return 0;
}

int run_simulate(const CommonArgs &args, const SamplingOverrides &overrides) {
    auto config = load_config(args, overrides);
    polsim::RunOptions options;
    options.max_threads = thread_budget();
    auto report = polsim::run_experiment(config, options);
    write_output(args.out_path, polsim::serialize_results(report, parse_format(args.format)));
    return 0;
}

int run_validate(const CommonArgs &args) {
    auto config = load_config(args, {});
    double deviation = polsim::tree_cross_check(config);
    if (!(deviation <= polsim::CROSS_CHECK_TOL)) {
        std::cerr << "error: tree/operator cross-check deviation " << deviation << " exceeds "
                  << polsim::CROSS_CHECK_TOL << "\n";
        return EXIT_CROSS_CHECK;
    }
    std::cout << "ok: " << config.settings.size() << " level(s), selection "
              << polsim::selection_mode_name(config.selection.mode) << ", tree cross-check " << deviation << "\n";
    return 0;
}

int run_demo(const std::string &out_dir, bool run, const SamplingOverrides &overrides) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const std::pair<const char *, polsim::ExperimentConfig> demos[] = {
        {"reselection_demo", polsim::reselection_demo_config()},
        {"postselection_demo", polsim::postselection_demo_config()},
    };
    for (const auto &[name, config] : demos) {
        fs::path path = fs::path(out_dir) / (std::string(name) + ".json");
        write_output(path.string(), polsim::serialize_experiment(config));
        std::cout << path.string() << "\n";
        if (run) {
            CommonArgs args;
            args.config_path = path.string();
            args.out_path = (fs::path(out_dir) / (std::string(name) + "_report.json")).string();
            run_simulate(args, overrides);
            std::cout << args.out_path << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Sequential unsharp polarization measurement simulator"};
    app.require_subcommand(1);

    CommonArgs exact_args;
    auto *exact = app.add_subcommand("exact", "Exact enumeration of distributions and correlations");
    add_common(exact, exact_args);

    CommonArgs sim_args;
    SamplingOverrides overrides;
    auto *simulate = app.add_subcommand("simulate", "Exact results plus seeded Monte Carlo estimates");
    add_common(simulate, sim_args);
    simulate->add_option("--shots", overrides.shots, "Number of photons (overrides the config)");
    simulate->add_option("--seed", overrides.seed, "RNG seed (overrides the config)");
    simulate->add_option("--shards", overrides.shards, "Number of sampling shards (overrides the config)")
        ->check(CLI::Range(1, 1 << 16));

    CommonArgs validate_args;
    auto *validate = app.add_subcommand("validate", "Check the config schema and the tree/operator cross-check");
    validate->add_option("config", validate_args.config_path, "Experiment description (JSON)")->required();

    std::string demo_dir = ".";
    bool demo_run = false;
    SamplingOverrides demo_overrides;
    auto *demo = app.add_subcommand("demo", "Write the built-in postselection and reselection configs");
    demo->add_option("--out-dir", demo_dir, "Directory for the demo configs");
    demo->add_flag("--run", demo_run, "Also simulate each demo and write <name>_report.json");
    demo->add_option("--shots", demo_overrides.shots, "Override the demo shot count when running");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*exact) {
            return run_exact(exact_args);
        }
        if (*simulate) {
            return run_simulate(sim_args, overrides);
        }
        if (*validate) {
            return run_validate(validate_args);
        }
        if (*demo) {
            return run_demo(demo_dir, demo_run, demo_overrides);
        }
    } catch (const polsim::SimError &e) {
        return report_error(e);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_FAILURE;
    }
    return EXIT_FAILURE;
}
