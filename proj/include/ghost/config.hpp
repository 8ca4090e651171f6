#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ghost/biphoton.hpp"
#include "ghost/classical.hpp"

namespace ghost {

enum class RunMode { interference, image, classical, report, sweep };

std::string to_string(RunMode mode);
RunMode run_mode_from_string(const std::string& name); ///< throws ConfigurationError

struct GridSpec {
    int samples = 8192;
    double extent = 40.96e-3; ///< meters
};

struct ScanSpec {
    double interference_half_width = 3.5e-3; ///< meters
    double image_half_width = 2.0e-3;        ///< meters
};

struct CountsSpec {
    std::int64_t total = 1'000'000;
    std::uint64_t seed = 1;
};

struct ImageSpec {
    double blur_sigma = 0.0; ///< aggregated image-plane blur, meters
};

struct SweepSpec {
    int models = 100;
    std::int64_t samples_per_model = 10'000;
};

/// Six externally measured spreads fed straight to the verdict sheet
/// (report mode skips the simulation legs when these are present).
struct InlineUncertainties {
    double dk1 = 0.0;     ///< 1/meters
    double dk2 = 0.0;     ///< 1/meters
    double dk_sum = 0.0;  ///< 1/meters
    double dx1 = 0.0;     ///< meters
    double dx2 = 0.0;     ///< meters
    double dx_diff = 0.0; ///< meters
};

/// A full experiment description as read from one config file.
struct ExperimentConfig {
    RunMode mode = RunMode::report;
    BiphotonModel biphoton;
    GeometryConfig geometry;
    std::optional<ClassicalGunModel> classical;
    std::int64_t classical_pairs = 2'000;          ///< Monte Carlo pairs for the pattern
    std::int64_t classical_stats_samples = 100'000; ///< pairs for the moment statistics
    GridSpec grid;
    CountsSpec counts;
    ScanSpec scan;
    ImageSpec image;
    SweepSpec sweep;
    std::optional<InlineUncertainties> epr_inline;
    std::string source_name; ///< preset name or file path the config came from
    std::string raw_text;    ///< exact text parsed (hashed into provenance)
};

/// Parses INI-style text: [section] headers, key = value lines, # comments.
/// Every dimensioned value requires an explicit unit suffix. Unknown
/// sections/keys, duplicates, malformed numbers and missing units raise
/// ParseError naming the line; violated physics invariants raise
/// ConfigurationError.
ExperimentConfig parse_config_text(const std::string& text, const std::string& source_name);

/// Resolves the argument as (1) a filesystem path, (2) a built-in preset
/// name, (3) a file <name>.conf in the bundled preset directory; then
/// parses it. Unknown names raise ConfigurationError listing the presets.
ExperimentConfig load_config(const std::string& path_or_preset);

std::vector<std::string> builtin_preset_names();
std::string builtin_preset_text(const std::string& name); ///< throws ConfigurationError

/// FNV-1a 64-bit hash of the raw config text (report provenance).
std::uint64_t config_hash(const std::string& text);

} // namespace ghost
