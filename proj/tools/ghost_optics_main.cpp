#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ghost/config.hpp"
#include "ghost/errors.hpp"
#include "ghost/run.hpp"
#include "ghost/version.hpp"

namespace {

int run_with_mode(const std::string& config_arg, const std::optional<std::uint64_t>& seed,
                  const std::string& out_dir, const std::optional<ghost::RunMode>& mode) {
    ghost::RunRequest request;
    request.config = ghost::load_config(config_arg);
    request.seed_override = seed;
    request.out_dir = out_dir;
    request.mode_override = mode;

    const ghost::RunResult result = ghost::run_experiment(request);
    if (!result.error.empty()) {
        std::cerr << "error: " << result.error << "\n";
    }
    for (const auto& path : result.artifacts) {
        std::cout << "wrote " << path.string() << "\n";
    }
    return result.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-photon coincidence optics simulator: quantum and classical pair sources, "
                 "scan patterns, fits, and correlation-uncertainty verdicts"};
    app.set_version_flag("--version", std::string("ghost-optics ") + ghost::kVersion);

    std::string config_arg = "paper-fig1";
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    app.add_option("-c,--config", config_arg,
                   "Config file path or preset name (see --list-presets)")
        ->capture_default_str();
    app.add_option("-o,--out", out_dir, "Directory the artifacts are written into")
        ->capture_default_str();
    app.add_option("-s,--seed", seed, "Master seed override (replaces [counts] seed)");
    bool list_presets = false;
    app.add_flag("--list-presets", list_presets, "Print the built-in preset names and exit");

    app.require_subcommand(0, 1);
    CLI::App* interference =
        app.add_subcommand("interference", "Coincidence fringe scan, counts, and visibility fit");
    CLI::App* image =
        app.add_subcommand("image", "Coincidence image scan, counts, and blur fit");
    CLI::App* classical = app.add_subcommand(
        "classical", "Classical gun-pair source: moment statistics, bounds, fringe washout");
    CLI::App* report = app.add_subcommand(
        "report", "Full pipeline: both scans, both fits, and the uncertainty verdict sheet");
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Random classical pair models checked against the correlation bounds");
    for (CLI::App* sub : {interference, image, classical, report, sweep}) {
        sub->fallthrough(); // global flags may follow the subcommand name
    }

    CLI11_PARSE(app, argc, argv);

    if (list_presets) {
        for (const auto& name : ghost::builtin_preset_names()) {
            std::cout << name << "\n";
        }
        return 0;
    }

    std::optional<ghost::RunMode> mode;
    if (interference->parsed()) mode = ghost::RunMode::interference;
    if (image->parsed()) mode = ghost::RunMode::image;
    if (classical->parsed()) mode = ghost::RunMode::classical;
    if (report->parsed()) mode = ghost::RunMode::report;
    if (sweep->parsed()) mode = ghost::RunMode::sweep;

    try {
        return run_with_mode(config_arg, seed, out_dir, mode);
    } catch (const ghost::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ghost::ConfigurationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
