#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ringeit/constants.hpp"
#include "ringeit/errors.hpp"
#include "ringeit/params.hpp"

namespace ringeit {

struct GridSpec {
    double min = 0.5;   // in units of the reference frequency
    double max = 1.5;
    int points = 4001;
};

struct SweepSpec {
    bool present = false;
    double start = 0.0;  // (W)
    double stop = 0.0;
    int count = 0;
    bool log_scale = false;
};

struct RunConfig {
    SystemParams params;
    std::vector<double> powers;  // (W) for spectra and feature reports
    SweepSpec sweep;             // for root trajectories; falls back to `powers`
    GridSpec grid;
    double prominence_floor = 1e-3;
    double analytic_tolerance = 0.15;
    long refine_budget = 1000000;
    std::string out_dir = "out";
    std::string format = "csv";  // csv | json
    bool equal_frequencies = false;
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline double parse_number(const std::string& text, const std::string& context) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        throw ConfigError(context + ": malformed number '" + t + "'");
    return value;
}

// "<number> [unit]" with the unit scale table for one dimension.
inline double parse_with_units(const std::string& text,
                               const std::vector<std::pair<std::string, double>>& units,
                               bool unit_required, const std::string& context) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{}) throw ConfigError(context + ": malformed number '" + t + "'");
    const std::string suffix = trim(std::string_view(ptr, static_cast<std::size_t>(t.data() + t.size() - ptr)));
    if (suffix.empty()) {
        if (unit_required) throw ConfigError(context + ": missing unit on '" + t + "'");
        return value;
    }
    for (const auto& [name, scale] : units)
        if (suffix == name) return value * scale;
    throw ConfigError(context + ": unknown unit '" + suffix + "'");
}

// Ordinary frequency with unit, converted once to angular rad/s.
inline double parse_frequency(const std::string& text, const std::string& context) {
    static const std::vector<std::pair<std::string, double>> units{
        {"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}, {"THz", 1e12}};
    return two_pi * parse_with_units(text, units, true, context);
}

inline double parse_length(const std::string& text, const std::string& context) {
    static const std::vector<std::pair<std::string, double>> units{
        {"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}, {"pm", 1e-12}};
    return parse_with_units(text, units, true, context);
}

inline double parse_mass(const std::string& text, const std::string& context) {
    static const std::vector<std::pair<std::string, double>> units{
        {"kg", 1.0}, {"g", 1e-3}, {"mg", 1e-6}, {"ug", 1e-9}, {"ng", 1e-12}, {"pg", 1e-15}};
    return parse_with_units(text, units, true, context);
}

inline double parse_power(const std::string& text, const std::string& context) {
    static const std::vector<std::pair<std::string, double>> units{
        {"W", 1.0}, {"mW", 1e-3}, {"uW", 1e-6}, {"nW", 1e-9}, {"pW", 1e-12}};
    return parse_with_units(text, units, true, context);
}

// Frequency pull per displacement, e.g. "12 GHz/nm"; angular on output.
inline double parse_pull(const std::string& text, const std::string& context) {
    static const std::vector<std::pair<std::string, double>> units{
        {"Hz/m", 1.0},    {"kHz/m", 1e3},    {"MHz/m", 1e6},    {"GHz/m", 1e9},
        {"Hz/nm", 1e9},   {"kHz/nm", 1e12},  {"MHz/nm", 1e15},  {"GHz/nm", 1e18},
        {"THz/nm", 1e21}};
    return two_pi * parse_with_units(text, units, true, context);
}

// Angle: plain radians, "x rad", "pi", "pi/n", or "x pi" / "x pi/n".
inline double parse_angle(const std::string& text, const std::string& context) {
    std::string t = trim(text);
    if (t.size() > 3 && t.substr(t.size() - 3) == "rad") return parse_number(t.substr(0, t.size() - 3), context);
    const std::size_t pi_pos = t.find("pi");
    if (pi_pos == std::string::npos) return parse_number(t, context);
    const std::string before = trim(t.substr(0, pi_pos));
    std::string after = trim(t.substr(pi_pos + 2));
    double multiplier = before.empty() ? 1.0 : parse_number(before, context);
    double divisor = 1.0;
    if (!after.empty()) {
        if (after.front() != '/') throw ConfigError(context + ": malformed angle '" + t + "'");
        divisor = parse_number(after.substr(1), context);
        if (divisor == 0.0) throw ConfigError(context + ": zero divisor in angle");
    }
    return multiplier * pi / divisor;
}

inline std::vector<double> parse_power_list(const std::string& text, const std::string& context) {
    std::vector<double> powers;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                               : comma - start);
        if (!trim(item).empty()) powers.push_back(parse_power(item, context));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (powers.empty()) throw ConfigError(context + ": empty power list");
    return powers;
}

inline long parse_integer(const std::string& text, const std::string& context) {
    const std::string t = trim(text);
    long value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        throw ConfigError(context + ": malformed integer '" + t + "'");
    return value;
}

inline bool parse_boolean(const std::string& text, const std::string& context) {
    const std::string t = trim(text);
    if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
    if (t == "false" || t == "no" || t == "off" || t == "0") return false;
    throw ConfigError(context + ": expected a boolean, got '" + t + "'");
}

}  // namespace detail

// Flat line-oriented `key = value` format with unit suffixes; '#' starts a
// comment. Frequencies are ordinary (non-angular) and converted once here.
inline RunConfig parse_config_text(const std::string& text) {
    RunConfig config;
    std::map<std::string, bool> seen;
    bool omega_m_set = false;
    double omega_m = 0.0;

    std::istringstream stream(text);
    std::string line;
    int line_number = 0;
    while (std::getline(stream, line)) {
        ++line_number;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string trimmed = detail::trim(line);
        if (trimmed.empty()) continue;
        const std::string context = "line " + std::to_string(line_number);
        const std::size_t eq = trimmed.find('=');
        if (eq == std::string::npos) throw ConfigError(context + ": expected 'key = value'");
        const std::string key = detail::trim(trimmed.substr(0, eq));
        const std::string value = detail::trim(trimmed.substr(eq + 1));
        if (key.empty()) throw ConfigError(context + ": empty key");
        if (seen[key]) throw ConfigError(context + ": duplicate key '" + key + "'");
        seen[key] = true;
        const std::string where = context + ", key '" + key + "'";

        if (key == "wavelength") config.params.wavelength = detail::parse_length(value, where);
        else if (key == "pull") config.params.pull_parameter = detail::parse_pull(value, where);
        else if (key == "mass_1") config.params.mass_1 = detail::parse_mass(value, where);
        else if (key == "mass_2") config.params.mass_2 = detail::parse_mass(value, where);
        else if (key == "omega_m") { omega_m_set = true; omega_m = detail::parse_frequency(value, where); }
        else if (key == "omega_1") config.params.omega_1 = detail::parse_frequency(value, where);
        else if (key == "omega_2") config.params.omega_2 = detail::parse_frequency(value, where);
        else if (key == "gamma_1") config.params.gamma_1 = detail::parse_frequency(value, where);
        else if (key == "gamma_2") config.params.gamma_2 = detail::parse_frequency(value, where);
        else if (key == "kappa") config.params.kappa = detail::parse_frequency(value, where);
        else if (key == "theta") config.params.theta = detail::parse_angle(value, where);
        else if (key == "detuning") config.params.effective_detuning = detail::parse_frequency(value, where);
        else if (key == "power") config.powers = detail::parse_power_list(value, where);
        else if (key == "power_start") { config.sweep.present = true; config.sweep.start = detail::parse_power(value, where); }
        else if (key == "power_stop") { config.sweep.present = true; config.sweep.stop = detail::parse_power(value, where); }
        else if (key == "power_count") { config.sweep.present = true; config.sweep.count = static_cast<int>(detail::parse_integer(value, where)); }
        else if (key == "power_scale") {
            config.sweep.present = true;
            const std::string scale = detail::trim(value);
            if (scale == "linear") config.sweep.log_scale = false;
            else if (scale == "log") config.sweep.log_scale = true;
            else throw ConfigError(where + ": expected 'linear' or 'log'");
        }
        else if (key == "grid_min") config.grid.min = detail::parse_number(value, where);
        else if (key == "grid_max") config.grid.max = detail::parse_number(value, where);
        else if (key == "grid_points") config.grid.points = static_cast<int>(detail::parse_integer(value, where));
        else if (key == "prominence_floor") config.prominence_floor = detail::parse_number(value, where);
        else if (key == "analytic_tolerance") config.analytic_tolerance = detail::parse_number(value, where);
        else if (key == "refine_budget") config.refine_budget = detail::parse_integer(value, where);
        else if (key == "out_dir") config.out_dir = value;
        else if (key == "format") {
            if (value != "csv" && value != "json") throw ConfigError(where + ": expected 'csv' or 'json'");
            config.format = value;
        }
        else if (key == "equal_frequencies") config.equal_frequencies = detail::parse_boolean(value, where);
        else throw ConfigError(where + ": unknown key");
    }

    if (omega_m_set) {
        if (config.params.omega_1 == 0.0) config.params.omega_1 = omega_m;
        if (config.params.omega_2 == 0.0) config.params.omega_2 = omega_m;
    }
    for (const auto& [name, present] :
         std::vector<std::pair<std::string, bool>>{
             {"wavelength", config.params.wavelength != 0.0},
             {"pull", seen.count("pull") > 0},
             {"mass_1", config.params.mass_1 != 0.0},
             {"mass_2", config.params.mass_2 != 0.0},
             {"omega_1 (or omega_m)", config.params.omega_1 != 0.0},
             {"omega_2 (or omega_m)", config.params.omega_2 != 0.0},
             {"gamma_1", config.params.gamma_1 != 0.0},
             {"gamma_2", config.params.gamma_2 != 0.0},
             {"kappa", config.params.kappa != 0.0},
             {"detuning", seen.count("detuning") > 0}})
        if (!present) throw ConfigError("missing required key: " + name);

    if (config.powers.empty() && !config.sweep.present)
        throw ConfigError("missing required key: power (or a power_start/stop/count sweep)");
    if (config.sweep.present) {
        if (config.sweep.count < 2) throw ConfigError("power_count must be at least 2");
        if (config.sweep.stop < config.sweep.start) throw ConfigError("power_stop must be >= power_start");
        if (config.sweep.log_scale && config.sweep.start <= 0.0)
            throw ConfigError("log power scale requires power_start > 0");
    }
    if (!(config.grid.max > config.grid.min)) throw ConfigError("grid bounds must be ordered");
    if (config.grid.points < 2) throw ConfigError("grid_points must be at least 2");
    if (config.refine_budget < static_cast<long>(config.grid.points))
        throw ConfigError("refine_budget must cover the base grid");
    if (!(config.prominence_floor > 0.0)) throw ConfigError("prominence_floor must be positive");
    if (!(config.analytic_tolerance > 0.0)) throw ConfigError("analytic_tolerance must be positive");

    if (config.equal_frequencies) {
        const double mean = 0.5 * (config.params.omega_1 + config.params.omega_2);
        config.params.omega_1 = mean;
        config.params.omega_2 = mean;
    }
    validate(config.params);
    return config;
}

inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

namespace detail {

inline std::string format_sci(double value) {
    if (value == 0.0) value = 0.0;
    char buffer[64];
    const auto [ptr, ec] =
        std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::scientific, 16);
    if (ec != std::errc{}) throw ConfigError("number formatting failed");
    return std::string(buffer, ptr);
}

}  // namespace detail

// Canonical text form in base units; parse_config_text(serialize_config(c))
// yields an equivalent RunConfig (frequencies round-trip through /2pi to a
// couple of ulp).
inline std::string serialize_config(const RunConfig& config) {
    using detail::format_sci;
    std::string out;
    const auto line = [&out](const std::string& key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    line("wavelength", format_sci(config.params.wavelength) + " m");
    line("pull", format_sci(config.params.pull_parameter / two_pi) + " Hz/m");
    line("mass_1", format_sci(config.params.mass_1) + " kg");
    line("mass_2", format_sci(config.params.mass_2) + " kg");
    line("omega_1", format_sci(config.params.omega_1 / two_pi) + " Hz");
    line("omega_2", format_sci(config.params.omega_2 / two_pi) + " Hz");
    line("gamma_1", format_sci(config.params.gamma_1 / two_pi) + " Hz");
    line("gamma_2", format_sci(config.params.gamma_2 / two_pi) + " Hz");
    line("kappa", format_sci(config.params.kappa / two_pi) + " Hz");
    line("theta", format_sci(config.params.theta) + " rad");
    line("detuning", format_sci(config.params.effective_detuning / two_pi) + " Hz");
    if (!config.powers.empty()) {
        std::string list;
        for (std::size_t i = 0; i < config.powers.size(); ++i) {
            if (i) list += ", ";
            list += format_sci(config.powers[i]) + " W";
        }
        line("power", list);
    }
    if (config.sweep.present) {
        line("power_start", format_sci(config.sweep.start) + " W");
        line("power_stop", format_sci(config.sweep.stop) + " W");
        line("power_count", std::to_string(config.sweep.count));
        line("power_scale", config.sweep.log_scale ? "log" : "linear");
    }
    line("grid_min", format_sci(config.grid.min));
    line("grid_max", format_sci(config.grid.max));
    line("grid_points", std::to_string(config.grid.points));
    line("prominence_floor", format_sci(config.prominence_floor));
    line("analytic_tolerance", format_sci(config.analytic_tolerance));
    line("refine_budget", std::to_string(config.refine_budget));
    line("out_dir", config.out_dir);
    line("format", config.format);
    line("equal_frequencies", config.equal_frequencies ? "true" : "false");
    return out;
}

// Powers for a root-trajectory sweep: the sweep spec if present, else the
// plain power list.
inline std::vector<double> sweep_powers(const RunConfig& config) {
    if (!config.sweep.present) return config.powers;
    std::vector<double> powers(static_cast<std::size_t>(config.sweep.count));
    for (int i = 0; i < config.sweep.count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(config.sweep.count - 1);
        powers[static_cast<std::size_t>(i)] =
            config.sweep.log_scale
                ? config.sweep.start * std::pow(config.sweep.stop / config.sweep.start, t)
                : config.sweep.start + (config.sweep.stop - config.sweep.start) * t;
    }
    return powers;
}

}  // namespace ringeit
