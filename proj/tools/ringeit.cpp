// Command-line front end: steady-state optical response of a ring cavity
// with two movable mirrors. Subcommands regenerate probe-quadrature spectra,
// Stokes intensity spectra, denominator root trajectories, and a spectral
// feature report from a flat key-value config file.

#include <exception>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ringeit/config.hpp"
#include "ringeit/errors.hpp"
#include "ringeit/run.hpp"
#include "ringeit/version.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    std::string format;
    std::string power_list;
    bool equal_frequencies = false;
};

void add_common_options(CLI::App* cmd, CliOptions& options) {
    cmd->add_option("--config", options.config_path, "Config file path")->required();
    cmd->add_option("--out", options.out_dir, "Output directory (overrides config)");
    cmd->add_option("--format", options.format, "Output format: csv or json (overrides config)");
    cmd->add_option("--power", options.power_list,
                    "Comma-separated drive powers with units, e.g. '0 W, 2 mW' (overrides config)");
    cmd->add_flag("--equal-frequencies", options.equal_frequencies,
                  "Set both mechanical frequencies to their mean");
}

ringeit::RunConfig load_config(const CliOptions& options) {
    ringeit::RunConfig config = ringeit::parse_config_file(options.config_path);
    if (!options.out_dir.empty()) config.out_dir = options.out_dir;
    if (!options.format.empty()) {
        if (options.format != "csv" && options.format != "json")
            throw ringeit::ConfigError("--format must be csv or json");
        config.format = options.format;
    }
    if (!options.power_list.empty()) {
        config.powers = ringeit::detail::parse_power_list(options.power_list, "--power");
        config.sweep.present = false;
    }
    if (options.equal_frequencies) {
        config.equal_frequencies = true;
        const double mean = 0.5 * (config.params.omega_1 + config.params.omega_2);
        config.params.omega_1 = mean;
        config.params.omega_2 = mean;
        ringeit::validate(config.params);
    }
    return config;
}

void report(const ringeit::RunResult& result) {
    for (const std::string& name : result.files)
        std::cout << "wrote " << (result.out_dir / name).string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady-state optical response of a two-mirror ring cavity"};
    app.set_version_flag("--version", ringeit::version_string);
    app.require_subcommand(1);

    CliOptions options;
    std::function<ringeit::RunResult(const ringeit::RunConfig&)> action;

    CLI::App* spectrum = app.add_subcommand("spectrum", "Probe quadrature spectra, one file per power");
    add_common_options(spectrum, options);
    spectrum->callback([&] { action = ringeit::run_spectrum; });

    CLI::App* stokes = app.add_subcommand("stokes", "Stokes intensity spectra, one file per power");
    add_common_options(stokes, options);
    stokes->callback([&] { action = ringeit::run_stokes; });

    CLI::App* roots = app.add_subcommand("roots", "Denominator root trajectories over a power sweep");
    add_common_options(roots, options);
    roots->callback([&] { action = ringeit::run_roots; });

    CLI::App* features = app.add_subcommand("features", "Spectral feature report with analytic widths");
    add_common_options(features, options);
    features->callback([&] { action = ringeit::run_features; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ringeit::exit_ok : ringeit::exit_config;
    }

    try {
        report(action(load_config(options)));
        return ringeit::exit_ok;
    } catch (const ringeit::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return ringeit::exit_config;
    } catch (const ringeit::ValidationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return ringeit::exit_config;
    } catch (const ringeit::ResolutionError& e) {
        std::cerr << "resolution error: " << e.what() << '\n';
        return ringeit::exit_resolution;
    } catch (const ringeit::BudgetError& e) {
        std::cerr << "budget error: " << e.what() << '\n';
        return ringeit::exit_resolution;
    } catch (const ringeit::SingularityError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return ringeit::exit_numerical;
    } catch (const ringeit::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return ringeit::exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ringeit::exit_numerical;
    }
}
