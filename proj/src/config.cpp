#include "ghost/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ghost/errors.hpp"

namespace ghost {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail_at(const std::string& source, int line, const std::string& msg) {
    throw ParseError(source + ":" + std::to_string(line) + ": " + msg);
}

struct RawValue {
    std::string text;
    int line = 0;
};

using SectionMap = std::map<std::string, std::map<std::string, RawValue>>;

// Schema: which keys each section accepts.
const std::map<std::string, std::set<std::string>> kSchema = {
    {"run", {"mode"}},
    {"biphoton",
     {"wavelength", "sigma_sum", "sigma_single", "singles_divergence", "pump_divergence"}},
    {"slit", {"width", "separation"}},
    {"geometry",
     {"slit_to_crystal", "crystal_to_lens", "lens_to_image", "focal_length",
      "collection_focal_length", "d1_mode", "d2_width", "d3_width"}},
    {"grid", {"samples", "extent"}},
    {"counts", {"total", "seed"}},
    {"scan", {"interference_half_width", "image_half_width"}},
    {"image", {"blur_sigma"}},
    {"classical",
     {"k_spread", "source_width", "noise_sigma", "aim", "shared_emission", "flight_distance",
      "pairs", "stats_samples"}},
    {"sweep", {"models", "samples_per_model"}},
    {"epr", {"dk1", "dk2", "dk_sum", "dx1", "dx2", "dx_diff"}},
};

SectionMap tokenize(const std::string& text, const std::string& source) {
    SectionMap sections;
    std::istringstream stream(text);
    std::string line;
    std::string current;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail_at(source, line_no, "unterminated section header");
            current = trim(line.substr(1, line.size() - 2));
            if (kSchema.find(current) == kSchema.end()) {
                fail_at(source, line_no, "unknown section [" + current + "]");
            }
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            fail_at(source, line_no, "expected 'key = value', got '" + line + "'");
        }
        if (current.empty()) fail_at(source, line_no, "key outside any [section]");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto& allowed = kSchema.at(current);
        if (allowed.find(key) == allowed.end()) {
            fail_at(source, line_no, "unknown key '" + key + "' in section [" + current + "]");
        }
        if (value.empty()) fail_at(source, line_no, "empty value for '" + key + "'");
        auto [it, inserted] = sections[current].emplace(key, RawValue{value, line_no});
        if (!inserted) {
            fail_at(source, line_no,
                    "duplicate key '" + key + "' (first set on line " +
                        std::to_string(it->second.line) + ")");
        }
    }
    return sections;
}

double parse_number(const std::string& token, const std::string& source, int line) {
    const std::string t = trim(token);
    if (t.empty()) fail_at(source, line, "missing number");
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) fail_at(source, line, "malformed number '" + t + "'");
    if (!std::isfinite(v)) fail_at(source, line, "non-finite number '" + t + "'");
    return v;
}

// Splits "<number> <unit>"; the unit token is mandatory.
std::pair<double, std::string> split_quantity(const RawValue& raw, const std::string& source) {
    const std::string& t = raw.text;
    const size_t space = t.find_last_of(" \t");
    if (space == std::string::npos) {
        fail_at(source, raw.line,
                "missing unit suffix in '" + t + "' (write e.g. '0.4 mm' or '23 mm^-1')");
    }
    const double v = parse_number(t.substr(0, space), source, raw.line);
    return {v, trim(t.substr(space + 1))};
}

double parse_with_units(const RawValue& raw, const std::string& source,
                        const std::map<std::string, double>& units,
                        const std::string& unit_list) {
    auto [v, unit] = split_quantity(raw, source);
    const auto it = units.find(unit);
    if (it == units.end()) {
        fail_at(source, raw.line, "unknown unit '" + unit + "' (accepted: " + unit_list + ")");
    }
    return v * it->second;
}

double parse_length(const RawValue& raw, const std::string& source) {
    static const std::map<std::string, double> units = {
        {"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}};
    return parse_with_units(raw, source, units, "m, cm, mm, um, nm");
}

double parse_inverse_length(const RawValue& raw, const std::string& source) {
    static const std::map<std::string, double> units = {
        {"1/m", 1.0},    {"m^-1", 1.0},    {"1/cm", 1e2}, {"cm^-1", 1e2},
        {"1/mm", 1e3},   {"mm^-1", 1e3}};
    return parse_with_units(raw, source, units, "1/m, m^-1, 1/cm, cm^-1, 1/mm, mm^-1");
}

double parse_angle(const RawValue& raw, const std::string& source) {
    static const std::map<std::string, double> units = {{"rad", 1.0}, {"mrad", 1e-3}};
    return parse_with_units(raw, source, units, "rad, mrad");
}

std::int64_t parse_integer(const RawValue& raw, const std::string& source) {
    const std::string t = trim(raw.text);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
        fail_at(source, raw.line, "expected a plain integer, got '" + t + "'");
    }
    return v;
}

std::uint64_t parse_unsigned(const RawValue& raw, const std::string& source) {
    const std::string t = trim(raw.text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
        fail_at(source, raw.line, "expected a non-negative integer, got '" + t + "'");
    }
    return v;
}

bool parse_bool(const RawValue& raw, const std::string& source) {
    const std::string t = trim(raw.text);
    if (t == "true") return true;
    if (t == "false") return false;
    fail_at(source, raw.line, "expected 'true' or 'false', got '" + t + "'");
}

// Accessors over the tokenized map.
struct Reader {
    const SectionMap& sections;
    const std::string& source;

    const RawValue* find(const std::string& section, const std::string& key) const {
        const auto s = sections.find(section);
        if (s == sections.end()) return nullptr;
        const auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        return &k->second;
    }
    const RawValue& require(const std::string& section, const std::string& key) const {
        const RawValue* raw = find(section, key);
        if (raw == nullptr) {
            throw ConfigurationError(source + ": missing required key [" + section + "] " + key);
        }
        return *raw;
    }
    bool has_section(const std::string& section) const {
        return sections.find(section) != sections.end();
    }
};

// Built-in presets; kept byte-identical to the files shipped under the
// preset directory (a harness test pins the equality).
const char* kPresetPaperFig1 = R"CFG(# Reference two-photon double-slit experiment: full report pipeline.
[run]
mode = report

[biphoton]
wavelength = 702.2 nm
sigma_sum = 2.5 mm^-1
sigma_single = 23.3 mm^-1
singles_divergence = 20 mrad

[slit]
width = 0.165 mm
separation = 0.4 mm

[geometry]
slit_to_crystal = 32.5 cm
crystal_to_lens = 46.5 cm
lens_to_image = 142 cm
focal_length = 51 cm
collection_focal_length = 50 cm
d1_mode = point
d2_width = 0.1 mm
d3_width = 0.1 mm

[grid]
samples = 8192
extent = 40.96 mm

[counts]
total = 1000000
seed = 1

[image]
blur_sigma = 0.143 mm

[classical]
k_spread = 23 mm^-1
source_width = 0.05 mm
noise_sigma = floor
aim = gaussian
pairs = 2000
stats_samples = 100000
)CFG";

const char* kPresetGhostImage = R"CFG(# Image-plane scan of the reference experiment (bucket trigger detector).
[run]
mode = image

[biphoton]
wavelength = 702.2 nm
sigma_sum = 2.5 mm^-1
sigma_single = 23.3 mm^-1
singles_divergence = 20 mrad

[slit]
width = 0.165 mm
separation = 0.4 mm

[geometry]
slit_to_crystal = 32.5 cm
crystal_to_lens = 46.5 cm
lens_to_image = 142 cm
focal_length = 51 cm
collection_focal_length = 50 cm
d1_mode = bucket
d2_width = 0.1 mm
d3_width = 0.1 mm

[grid]
samples = 8192
extent = 40.96 mm

[counts]
total = 1000000
seed = 1

[image]
blur_sigma = 0.143 mm
)CFG";

const char* kPresetClassicalGun = R"CFG(# Classically momentum-anticorrelated gun pair in the same optics.
[run]
mode = classical

[biphoton]
wavelength = 702.2 nm
sigma_sum = 2.5 mm^-1
sigma_single = 23.3 mm^-1
singles_divergence = 20 mrad

[slit]
width = 0.165 mm
separation = 0.4 mm

[geometry]
slit_to_crystal = 32.5 cm
crystal_to_lens = 46.5 cm
lens_to_image = 142 cm
focal_length = 51 cm
collection_focal_length = 50 cm
d1_mode = point
d2_width = 0.1 mm
d3_width = 0.1 mm

[grid]
samples = 8192
extent = 40.96 mm

[counts]
total = 1000000
seed = 1

[classical]
k_spread = 23 mm^-1
source_width = 0.05 mm
noise_sigma = floor
aim = gaussian
pairs = 2000
stats_samples = 100000
)CFG";

const char* kPresetClassicalSharedGun = R"CFG(# Gun pair fired from a shared emission point: the position correlation
# exists only at the source and fans out over half a meter of flight.
[run]
mode = classical

[biphoton]
wavelength = 702.2 nm
sigma_sum = 2.5 mm^-1
sigma_single = 23.3 mm^-1
singles_divergence = 20 mrad

[slit]
width = 0.165 mm
separation = 0.4 mm

[geometry]
slit_to_crystal = 32.5 cm
crystal_to_lens = 46.5 cm
lens_to_image = 142 cm
focal_length = 51 cm
collection_focal_length = 50 cm
d1_mode = point
d2_width = 0.1 mm
d3_width = 0.1 mm

[grid]
samples = 8192
extent = 40.96 mm

[counts]
total = 1000000
seed = 1

[classical]
k_spread = 23 mm^-1
source_width = 0.05 mm
noise_sigma = floor
aim = gaussian
shared_emission = true
flight_distance = 50 cm
pairs = 2000
stats_samples = 100000
)CFG";

const std::pair<const char*, const char*> kPresets[] = {
    {"paper-fig1", kPresetPaperFig1},
    {"ghost-image", kPresetGhostImage},
    {"classical-gun", kPresetClassicalGun},
    {"classical-shared-gun", kPresetClassicalSharedGun},
};

} // namespace

std::string to_string(RunMode mode) {
    switch (mode) {
        case RunMode::interference: return "interference";
        case RunMode::image: return "image";
        case RunMode::classical: return "classical";
        case RunMode::report: return "report";
        case RunMode::sweep: return "sweep";
    }
    throw std::logic_error("unreachable run mode");
}

RunMode run_mode_from_string(const std::string& name) {
    if (name == "interference") return RunMode::interference;
    if (name == "image") return RunMode::image;
    if (name == "classical") return RunMode::classical;
    if (name == "report") return RunMode::report;
    if (name == "sweep") return RunMode::sweep;
    throw ConfigurationError("unknown mode '" + name +
                             "' (expected interference, image, classical, report or sweep)");
}

std::vector<std::string> builtin_preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : kPresets) names.emplace_back(name);
    return names;
}

std::string builtin_preset_text(const std::string& name) {
    for (const auto& [preset_name, text] : kPresets) {
        if (name == preset_name) return text;
    }
    std::string known;
    for (const auto& [preset_name, text] : kPresets) {
        if (!known.empty()) known += ", ";
        known += preset_name;
    }
    throw ConfigurationError("unknown preset '" + name + "' (built-in presets: " + known + ")");
}

std::uint64_t config_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& source_name) {
    const SectionMap sections = tokenize(text, source_name);
    const Reader r{sections, source_name};
    ExperimentConfig cfg;
    cfg.source_name = source_name;
    cfg.raw_text = text;

    cfg.mode = run_mode_from_string(trim(r.require("run", "mode").text));

    cfg.biphoton.wavelength = parse_length(r.require("biphoton", "wavelength"), source_name);
    cfg.biphoton.sigma_sum =
        parse_inverse_length(r.require("biphoton", "sigma_sum"), source_name);
    cfg.biphoton.sigma_single =
        parse_inverse_length(r.require("biphoton", "sigma_single"), source_name);
    if (const RawValue* v = r.find("biphoton", "singles_divergence")) {
        cfg.biphoton.singles_divergence = parse_angle(*v, source_name);
    }
    if (const RawValue* v = r.find("biphoton", "pump_divergence")) {
        cfg.biphoton.pump_divergence = parse_angle(*v, source_name);
    }

    cfg.geometry.slit.slit_width_a = parse_length(r.require("slit", "width"), source_name);
    cfg.geometry.slit.slit_separation_d =
        parse_length(r.require("slit", "separation"), source_name);

    cfg.geometry.distance_slit_to_crystal =
        parse_length(r.require("geometry", "slit_to_crystal"), source_name);
    cfg.geometry.distance_crystal_to_lens =
        parse_length(r.require("geometry", "crystal_to_lens"), source_name);
    cfg.geometry.lens_to_image_plane =
        parse_length(r.require("geometry", "lens_to_image"), source_name);
    cfg.geometry.f_imaging = parse_length(r.require("geometry", "focal_length"), source_name);
    cfg.geometry.f_collection =
        parse_length(r.require("geometry", "collection_focal_length"), source_name);
    cfg.geometry.d2_width = 0.1e-3;
    cfg.geometry.d3_width = 0.1e-3;
    if (const RawValue* v = r.find("geometry", "d2_width")) {
        cfg.geometry.d2_width = parse_length(*v, source_name);
    }
    if (const RawValue* v = r.find("geometry", "d3_width")) {
        cfg.geometry.d3_width = parse_length(*v, source_name);
    }
    if (const RawValue* v = r.find("geometry", "d1_mode")) {
        const std::string t = trim(v->text);
        if (t == "point") {
            cfg.geometry.d1_mode = DetectorMode::point;
        } else if (t == "bucket") {
            cfg.geometry.d1_mode = DetectorMode::bucket;
        } else {
            fail_at(source_name, v->line, "d1_mode must be 'point' or 'bucket', got '" + t + "'");
        }
    }

    {
        const RawValue& samples = r.require("grid", "samples");
        cfg.grid.samples = static_cast<int>(parse_integer(samples, source_name));
        if (cfg.grid.samples < 16) {
            fail_at(source_name, samples.line, "grid samples must be >= 16");
        }
        cfg.grid.extent = parse_length(r.require("grid", "extent"), source_name);
        if (!(cfg.grid.extent > 0.0)) {
            fail_at(source_name, r.require("grid", "extent").line, "grid extent must be positive");
        }
    }

    if (const RawValue* v = r.find("counts", "total")) {
        cfg.counts.total = parse_integer(*v, source_name);
        if (cfg.counts.total <= 0) fail_at(source_name, v->line, "counts total must be positive");
    }
    if (const RawValue* v = r.find("counts", "seed")) {
        cfg.counts.seed = parse_unsigned(*v, source_name);
    }

    if (const RawValue* v = r.find("scan", "interference_half_width")) {
        cfg.scan.interference_half_width = parse_length(*v, source_name);
    }
    if (const RawValue* v = r.find("scan", "image_half_width")) {
        cfg.scan.image_half_width = parse_length(*v, source_name);
    }

    if (const RawValue* v = r.find("image", "blur_sigma")) {
        cfg.image.blur_sigma = parse_length(*v, source_name);
        if (cfg.image.blur_sigma < 0.0) {
            fail_at(source_name, v->line, "image blur_sigma must be >= 0");
        }
    }

    if (r.has_section("classical")) {
        ClassicalGunModel model;
        model.k_spread = parse_inverse_length(r.require("classical", "k_spread"), source_name);
        model.source_width_w = parse_length(r.require("classical", "source_width"), source_name);
        const RawValue& noise = r.require("classical", "noise_sigma");
        if (trim(noise.text) == "floor") {
            model.noise_sigma = 1.0 / (2.0 * model.source_width_w);
        } else {
            model.noise_sigma = parse_inverse_length(noise, source_name);
        }
        if (const RawValue* v = r.find("classical", "aim")) {
            const std::string t = trim(v->text);
            if (t == "gaussian") {
                model.aim_distribution = MomentumDistribution::gaussian;
            } else if (t == "uniform") {
                model.aim_distribution = MomentumDistribution::uniform;
            } else {
                fail_at(source_name, v->line, "aim must be 'gaussian' or 'uniform', got '" + t + "'");
            }
        }
        if (const RawValue* v = r.find("classical", "shared_emission")) {
            model.shared_emission = parse_bool(*v, source_name);
        }
        if (const RawValue* v = r.find("classical", "flight_distance")) {
            model.flight_distance = parse_length(*v, source_name);
        }
        if (model.flight_distance > 0.0) {
            model.wavenumber = 2.0 * kPi / cfg.biphoton.wavelength;
        }
        if (const RawValue* v = r.find("classical", "pairs")) {
            cfg.classical_pairs = parse_integer(*v, source_name);
            if (cfg.classical_pairs < 1) fail_at(source_name, v->line, "pairs must be >= 1");
        }
        if (const RawValue* v = r.find("classical", "stats_samples")) {
            cfg.classical_stats_samples = parse_integer(*v, source_name);
            if (cfg.classical_stats_samples < 1000) {
                fail_at(source_name, v->line, "stats_samples must be >= 1000");
            }
        }
        cfg.classical = model;
    }

    if (r.has_section("epr")) {
        InlineUncertainties inl;
        auto read_spread = [&](const char* key, bool is_length) {
            const RawValue& raw = r.require("epr", key);
            const double v = is_length ? parse_length(raw, source_name)
                                       : parse_inverse_length(raw, source_name);
            if (v < 0.0) fail_at(source_name, raw.line, std::string(key) + " must be >= 0");
            return v;
        };
        inl.dk1 = read_spread("dk1", false);
        inl.dk2 = read_spread("dk2", false);
        inl.dk_sum = read_spread("dk_sum", false);
        inl.dx1 = read_spread("dx1", true);
        inl.dx2 = read_spread("dx2", true);
        inl.dx_diff = read_spread("dx_diff", true);
        cfg.epr_inline = inl;
    }

    if (const RawValue* v = r.find("sweep", "models")) {
        cfg.sweep.models = static_cast<int>(parse_integer(*v, source_name));
        if (cfg.sweep.models < 1) fail_at(source_name, v->line, "sweep models must be >= 1");
    }
    if (const RawValue* v = r.find("sweep", "samples_per_model")) {
        cfg.sweep.samples_per_model = parse_integer(*v, source_name);
        if (cfg.sweep.samples_per_model < 1000) {
            fail_at(source_name, v->line, "sweep samples_per_model must be >= 1000");
        }
    }

    // Physics invariants, surfaced as configuration errors.
    try {
        validate(cfg.biphoton);
        validate(cfg.geometry);
        if (cfg.classical.has_value()) validate(*cfg.classical);
    } catch (const std::invalid_argument& err) {
        throw ConfigurationError(source_name + ": " + err.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path_or_preset) {
    namespace fs = std::filesystem;

    auto read_file = [](const fs::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigurationError("cannot read config file " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };

    std::error_code ec;
    if (fs::is_regular_file(path_or_preset, ec)) {
        return parse_config_text(read_file(path_or_preset), path_or_preset);
    }
    for (const auto& [name, text] : kPresets) {
        if (path_or_preset == name) return parse_config_text(text, path_or_preset);
    }
#ifdef GHOST_PRESET_DIR
    {
        const fs::path candidate = fs::path(GHOST_PRESET_DIR) / (path_or_preset + ".conf");
        if (fs::is_regular_file(candidate, ec)) {
            return parse_config_text(read_file(candidate), candidate.string());
        }
    }
#endif
    std::string known;
    for (const auto& [name, text] : kPresets) {
        if (!known.empty()) known += ", ";
        known += name;
    }
    throw ConfigurationError("config '" + path_or_preset +
                             "' is neither a file nor a known preset (built-in presets: " + known +
                             ")");
}

} // namespace ghost
