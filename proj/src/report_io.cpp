#include "ghost/report_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "ghost/config.hpp"
#include "ghost/errors.hpp"
#include "ghost/version.hpp"

namespace ghost {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

double parse_csv_double(const std::string& token, const std::filesystem::path& path, int line) {
    const std::string t = token;
    double value = 0.0;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc{} || result.ptr != end) {
        throw ParseError(path.string() + ":" + std::to_string(line) + ": expected a number, got '" +
                         token + "'");
    }
    return value;
}

std::int64_t parse_csv_int(const std::string& token, const std::filesystem::path& path, int line) {
    std::int64_t value = 0;
    const char* begin = token.data();
    const char* end = token.data() + token.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc{} || result.ptr != end) {
        throw ParseError(path.string() + ":" + std::to_string(line) +
                         ": expected an integer count, got '" + token + "'");
    }
    return value;
}

struct CsvRow {
    std::string first;
    std::string second;
    int line = 0;
};

// Reads a two-column CSV, checks the header, and returns the data rows.
std::vector<CsvRow> read_two_column_csv(const std::filesystem::path& path,
                                        const std::string& expected_header) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string() + ": cannot open file");
    std::string line;
    int line_no = 0;
    std::vector<CsvRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1) {
            if (line != expected_header) {
                throw ParseError(path.string() + ":1: expected header '" + expected_header +
                                 "', got '" + line + "'");
            }
            continue;
        }
        if (line.empty()) continue;
        const size_t comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": expected exactly two comma-separated columns");
        }
        rows.push_back({line.substr(0, comma), line.substr(comma + 1), line_no});
    }
    if (line_no == 0) throw ParseError(path.string() + ": empty file");
    return rows;
}

}  // namespace

nlohmann::ordered_json quantity(double value, const std::string& unit) {
    return nlohmann::ordered_json{{"value", value}, {"unit", unit}};
}

nlohmann::ordered_json provenance_json(std::uint64_t seed, const std::string& config_text) {
    return nlohmann::ordered_json{
        {"seed", seed},
        {"version", kVersion},
        {"config_hash", hex64(config_hash(config_text))},
    };
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    fs::create_directories(dir);
    const fs::path tmp = dir / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << text;
        out.flush();
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

void write_json_report(const std::filesystem::path& path, const nlohmann::ordered_json& doc) {
    write_text_atomic(path, doc.dump(2) + "\n");
}

void write_pattern_csv(const std::filesystem::path& path, const Pattern& pattern) {
    std::ostringstream out;
    out << "position_mm,rate\n";
    for (size_t i = 0; i < pattern.positions.size(); ++i) {
        out << format_double(pattern.positions[i] * 1e3) << ',' << format_double(pattern.rates[i])
            << '\n';
    }
    write_text_atomic(path, out.str());
}

void write_counts_csv(const std::filesystem::path& path, const CountsHistogram& counts) {
    std::ostringstream out;
    out << "position_mm,counts\n";
    for (size_t i = 0; i < counts.positions.size(); ++i) {
        out << format_double(counts.positions[i] * 1e3) << ',' << counts.counts[i] << '\n';
    }
    write_text_atomic(path, out.str());
}

Pattern read_pattern_csv(const std::filesystem::path& path) {
    const auto rows = read_two_column_csv(path, "position_mm,rate");
    Pattern pattern;
    for (const auto& row : rows) {
        pattern.positions.push_back(parse_csv_double(row.first, path, row.line) * 1e-3);
        pattern.rates.push_back(parse_csv_double(row.second, path, row.line));
    }
    return pattern;
}

CountsHistogram read_counts_csv(const std::filesystem::path& path) {
    const auto rows = read_two_column_csv(path, "position_mm,counts");
    CountsHistogram counts;
    for (const auto& row : rows) {
        counts.positions.push_back(parse_csv_double(row.first, path, row.line) * 1e-3);
        counts.counts.push_back(parse_csv_int(row.second, path, row.line));
    }
    return counts;
}

}  // namespace ghost
