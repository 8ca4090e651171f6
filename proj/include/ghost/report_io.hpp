#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "ghost/counts.hpp"
#include "ghost/pattern.hpp"

namespace ghost {

// A physical quantity serialized as {"value": ..., "unit": "..."} so readers
// never have to guess scales.
nlohmann::ordered_json quantity(double value, const std::string& unit);

// Provenance block for a run: the master seed, the library version, and a
// 64-bit FNV-1a hash of the configuration text. Deliberately contains no
// timestamps so identical runs produce identical files.
nlohmann::ordered_json provenance_json(std::uint64_t seed, const std::string& config_text);

// Writes text to path atomically (temp file in the same directory + rename),
// so a crash mid-write never leaves a truncated artifact behind.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

// Serializes with two-space indentation and a trailing newline.
void write_json_report(const std::filesystem::path& path, const nlohmann::ordered_json& doc);

// CSV with header "position_mm,rate"; positions are converted to millimetres,
// values printed with %.17g so a round-trip is bit-exact.
void write_pattern_csv(const std::filesystem::path& path, const Pattern& pattern);

// CSV with header "position_mm,counts".
void write_counts_csv(const std::filesystem::path& path, const CountsHistogram& counts);

// Round-trip readers for the CSV artifacts above. Throw ParseError with the
// offending line number on malformed input.
Pattern read_pattern_csv(const std::filesystem::path& path);
CountsHistogram read_counts_csv(const std::filesystem::path& path);

}  // namespace ghost
