#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ghost/config.hpp"

namespace ghost {

/// One experiment invocation: a parsed config plus command-line overrides.
struct RunRequest {
    ExperimentConfig config;
    std::optional<std::uint64_t> seed_override; ///< replaces [counts] seed
    std::filesystem::path out_dir = ".";
    std::optional<RunMode> mode_override; ///< replaces [run] mode
};

/// Outcome of a run. exit_code 0 = success, 2 = estimation failure
/// (fit/shape/insufficient data), 3 = configuration or resolution error,
/// 1 = unexpected failure. artifacts lists every file written.
struct RunResult {
    int exit_code = 0;
    std::vector<std::filesystem::path> artifacts;
    std::string error; ///< empty on success
};

/// Executes the configured mode, writes the mode's artifacts into out_dir
/// (CSV scans plus a JSON report with the stable top-level layout
/// {inputs, fits, epr_report, provenance}), and maps exceptions to exit
/// codes instead of throwing.
RunResult run_experiment(const RunRequest& request);

} // namespace ghost
