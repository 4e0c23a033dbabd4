#pragma once

#include <array>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ringeit/config.hpp"
#include "ringeit/features.hpp"
#include "ringeit/modes.hpp"
#include "ringeit/normalcoords.hpp"
#include "ringeit/output.hpp"
#include "ringeit/params.hpp"
#include "ringeit/response.hpp"
#include "ringeit/version.hpp"

namespace ringeit {

struct RunResult {
    std::filesystem::path out_dir;
    std::vector<std::string> files;  // names relative to out_dir, manifest last
};

namespace detail {

inline std::string zero_padded(std::size_t index) {
    std::string s = std::to_string(index);
    while (s.size() < 3) s.insert(s.begin(), '0');
    return s;
}

// Generic column/row JSON rendering so the json format mirrors the CSV.
inline std::string render_table_json(const CsvTable& table) {
    JsonWriter w;
    w.begin_object();
    w.key("columns");
    w.begin_array();
    for (const std::string& name : table.header) w.value(name);
    w.end_array();
    w.key("rows");
    w.begin_array();
    for (const auto& row : table.rows) {
        w.begin_array();
        for (double v : row) w.value(v);
        w.end_array();
    }
    w.end_array();
    w.end_object();
    std::string out = w.str();
    out += '\n';
    return out;
}

class ArtifactSink {
  public:
    ArtifactSink(const RunConfig& config, std::string command)
        : config_(config), command_(std::move(command)), dir_(config.out_dir) {
        std::filesystem::create_directories(dir_);
    }

    void write_table(const std::string& stem, const CsvTable& table) {
        if (config_.format == "json")
            write(stem + ".json", render_table_json(table));
        else
            write(stem + ".csv", render_csv(table));
    }

    void write(const std::string& name, const std::string& content) {
        write_text_file(dir_ / name, content);
        hashes_[name] = sha256_hex(content);
        files_.push_back(name);
    }

    RunResult finish() {
        const std::string manifest =
            render_manifest(hashes_, command_, version_string, serialize_config(config_));
        write_text_file(dir_ / "manifest.json", manifest);
        files_.push_back("manifest.json");
        return {dir_, files_};
    }

  private:
    RunConfig config_;
    std::string command_;
    std::filesystem::path dir_;
    std::map<std::string, std::string> hashes_;
    std::vector<std::string> files_;
};

inline std::vector<double> si_grid(const RunConfig& config, double omega_ref) {
    std::vector<double> grid =
        uniform_grid(config.grid.min, config.grid.max, config.grid.points);
    for (double& x : grid) x *= omega_ref;
    return grid;
}

inline WidthMode width_mode(const RunConfig& config) {
    const double omega_ref = reference_frequency(config.params);
    const bool equal =
        std::abs(config.params.omega_1 - config.params.omega_2) <= 1e-12 * omega_ref;
    return equal ? WidthMode::equal : WidthMode::unequal;
}

}  // namespace detail

inline RunResult run_spectrum(const RunConfig& config) {
    if (config.powers.empty()) throw ConfigError("spectrum needs a non-empty power list");
    detail::ArtifactSink sink(config, "spectrum");
    const double omega_ref = reference_frequency(config.params);
    const std::vector<double> grid = detail::si_grid(config, omega_ref);
    for (std::size_t i = 0; i < config.powers.size(); ++i) {
        const DriveState drive = pump_steady_state(config.params, config.powers[i]);
        const ResponseSpectrum spectrum = scan_spectrum(config.params, drive, grid);
        CsvTable table;
        table.header = {"delta_over_omega_m", "nu_p", "re_eps_out_plus", "im_eps_out_plus"};
        table.rows.reserve(spectrum.points.size());
        for (const ResponsePoint& point : spectrum.points)
            table.rows.push_back({point.delta / omega_ref, point.nu_p,
                                  point.eps_out_plus.real(), point.eps_out_plus.imag()});
        sink.write_table("spectrum_" + detail::zero_padded(i), table);
    }
    return sink.finish();
}

inline RunResult run_stokes(const RunConfig& config) {
    if (config.powers.empty()) throw ConfigError("stokes needs a non-empty power list");
    detail::ArtifactSink sink(config, "stokes");
    const double omega_ref = reference_frequency(config.params);
    const std::vector<double> grid = detail::si_grid(config, omega_ref);
    for (std::size_t i = 0; i < config.powers.size(); ++i) {
        const DriveState drive = pump_steady_state(config.params, config.powers[i]);
        const ResponseSpectrum spectrum = scan_spectrum(config.params, drive, grid);
        CsvTable table;
        table.header = {"delta_over_omega_m", "stokes_intensity"};
        table.rows.reserve(spectrum.points.size());
        for (const ResponsePoint& point : spectrum.points)
            table.rows.push_back({point.delta / omega_ref, point.stokes_intensity});
        sink.write_table("stokes_" + detail::zero_padded(i), table);
    }
    return sink.finish();
}

inline RunResult run_roots(const RunConfig& config) {
    const std::vector<double> powers = sweep_powers(config);
    if (powers.empty()) throw ConfigError("roots needs a power list or sweep");
    detail::ArtifactSink sink(config, "roots");

    std::vector<std::array<cdouble, 6>> matched;
    if (powers.size() == 1) {
        const DriveState drive = pump_steady_state(config.params, powers[0]);
        matched.push_back(find_roots(build_denominator(config.params, drive)).roots);
    } else {
        matched = sweep_roots(config.params, powers).matched;
    }

    CsvTable table;
    table.header = {"power_mW"};
    for (int j = 1; j <= 6; ++j) {
        table.header.push_back("root" + std::to_string(j) + "_re");
        table.header.push_back("root" + std::to_string(j) + "_im");
    }
    for (const char* name : {"dressed_lower", "dressed_central", "dressed_upper"}) {
        table.header.push_back(std::string(name) + "_re");
        table.header.push_back(std::string(name) + "_im");
    }
    table.header.insert(table.header.end(),
                        {"validity_ratio", "strong_coupling", "stable", "min_margin"});

    for (std::size_t i = 0; i < powers.size(); ++i) {
        const DriveState drive = pump_steady_state(config.params, powers[i]);
        const DressedModes dressed = dressed_mode_predictions(config.params, drive);
        RootSet set;
        set.power = powers[i];
        set.roots = matched[i];
        const StabilityReport stability = stability_check(set);
        const double min_margin = *std::min_element(stability.margins.begin(), stability.margins.end());

        std::vector<double> row{powers[i] * 1e3};
        for (const cdouble& root : matched[i]) {
            row.push_back(root.real());
            row.push_back(root.imag());
        }
        for (const cdouble& position : dressed.positions) {
            row.push_back(position.real());
            row.push_back(position.imag());
        }
        row.push_back(dressed.validity_ratio);
        row.push_back(dressed.strong_coupling ? 1.0 : 0.0);
        row.push_back(stability.stable ? 1.0 : 0.0);
        row.push_back(min_margin);
        table.rows.push_back(std::move(row));
    }
    sink.write_table("roots", table);
    return sink.finish();
}

namespace detail {

inline void write_feature(JsonWriter& w, const SpectralFeature& f) {
    w.begin_object();
    w.key("kind");
    w.value(f.kind == FeatureKind::peak ? "peak" : "dip");
    w.key("center");
    w.value(f.center);
    w.key("extremum_value");
    w.value(f.extremum_value);
    w.key("fwhm");
    w.value(f.fwhm);
    w.key("prominence");
    w.value(f.prominence);
    w.key("left_crossing");
    w.value(f.left_crossing);
    w.key("right_crossing");
    w.value(f.right_crossing);
    w.key("edge_limited");
    w.value(f.edge_limited);
    w.end_object();
}

inline void write_comparison(JsonWriter& w, const AnalyticComparison& c, double tolerance) {
    w.begin_object();
    w.key("label");
    w.value(c.label);
    w.key("numeric");
    w.value(c.numeric);
    w.key("analytic");
    w.value(c.analytic);
    w.key("formula");
    w.value(c.formula);
    w.key("deviation");
    w.value(c.deviation);
    w.key("valid_regime");
    w.value(c.valid_regime);
    w.key("within_tolerance");
    w.value(c.deviation <= tolerance);
    w.end_object();
}

}  // namespace detail

// JSON report: detected features per power, measured-vs-analytic width table,
// regime flags, Stokes summary, and the collective-coordinate classification.
// The pump-off spectrum is a lone cavity-wide Lorentzian, so its report uses
// a window wide enough to contain it instead of the mechanical-band grid.
inline RunResult run_features(const RunConfig& config) {
    if (config.powers.empty()) throw ConfigError("features needs a non-empty power list");
    detail::ArtifactSink sink(config, "features");
    const SystemParams& params = config.params;
    const double omega_ref = reference_frequency(params);
    const WidthMode mode = detail::width_mode(config);
    const SidebandDiagnostic sideband = resolved_sideband(params);

    JsonWriter w;
    w.begin_object();
    w.key("reference_frequency");
    w.value(omega_ref);
    w.key("mode");
    w.value(mode == WidthMode::equal ? "equal" : "unequal");
    w.key("sideband");
    w.begin_object();
    w.key("ratio");
    w.value(sideband.ratio);
    w.key("resolved");
    w.value(sideband.resolved);
    w.end_object();

    w.key("normal_coordinates");
    w.begin_object();
    try {
        const TransformedHamiltonianCoeffs coeffs = transformed_coeffs(params);
        w.key("degenerate");
        w.value(false);
        w.key("omega");
        w.value(coeffs.omega);
        w.key("chi");
        w.value(coeffs.chi);
        w.key("cavity_coupling");
        w.value(coeffs.cavity_coupling);
        w.key("regime");
        w.value(regime_name(coeffs.regime));
    } catch (const DegenerateTransformError&) {
        w.key("degenerate");
        w.value(true);
    }
    w.end_object();

    w.key("reports");
    w.begin_array();
    for (double power : config.powers) {
        const DriveState drive = pump_steady_state(params, power);
        const bool pump_off = drive.G1 == 0.0 && drive.G2 == 0.0;
        const double detuning = params.effective_detuning / omega_ref;
        const double lo = pump_off ? detuning - 11.0 : config.grid.min;
        const double hi = pump_off ? detuning + 11.0 : config.grid.max;

        RefineOptions options;
        options.max_points = static_cast<std::size_t>(config.refine_budget);
        const RefinedSpectrum quadrature =
            refine_nu_p(params, drive, lo, hi, config.grid.points, options);
        const FeatureSet set =
            extract_features(quadrature.xs, quadrature.values, config.prominence_floor);

        std::vector<AnalyticComparison> comparisons;
        if (pump_off) {
            if (set.features.size() == 1) {
                AnalyticComparison cavity;
                cavity.label = "cavity line";
                cavity.numeric = set.features.front().fwhm;
                cavity.analytic = 2.0 * params.kappa / omega_ref;
                cavity.formula = "2 kappa";
                cavity.deviation = std::abs(cavity.numeric - cavity.analytic) / cavity.analytic;
                cavity.valid_regime = true;
                comparisons.push_back(cavity);
            }
        } else {
            comparisons = compare_features(params, drive, set, mode);
        }

        const RefinedSpectrum stokes =
            refine_stokes(params, drive, lo, hi, config.grid.points, options);
        std::size_t stokes_argmax = 0;
        for (std::size_t i = 1; i < stokes.values.size(); ++i)
            if (stokes.values[i] > stokes.values[stokes_argmax]) stokes_argmax = i;
        const ResponseEvaluator evaluator(params, drive);
        const double stokes_at_reference = evaluator.evaluate(omega_ref).stokes_intensity;

        const DressedModes dressed = dressed_mode_predictions(params, drive);

        w.begin_object();
        w.key("power_W");
        w.value(power);
        w.key("window");
        w.begin_array();
        w.value(lo);
        w.value(hi);
        w.end_array();
        w.key("samples");
        w.value(static_cast<long long>(quadrature.xs.size()));
        w.key("drive");
        w.begin_object();
        w.key("epsilon");
        w.value(drive.epsilon);
        w.key("c0_abs");
        w.value(std::abs(drive.c0));
        w.key("G1");
        w.value(drive.G1);
        w.key("G2");
        w.value(drive.G2);
        w.end_object();
        w.key("dressed");
        w.begin_object();
        w.key("validity_ratio");
        w.value(dressed.validity_ratio);
        w.key("strong_coupling");
        w.value(dressed.strong_coupling);
        w.end_object();
        w.key("features");
        w.begin_array();
        for (const SpectralFeature& f : set.features) detail::write_feature(w, f);
        w.end_array();
        w.key("comparisons");
        w.begin_array();
        for (const AnalyticComparison& c : comparisons)
            detail::write_comparison(w, c, config.analytic_tolerance);
        w.end_array();
        w.key("stokes");
        w.begin_object();
        w.key("max");
        w.value(stokes.values.empty() ? 0.0 : stokes.values[stokes_argmax]);
        w.key("argmax");
        w.value(stokes.xs.empty() ? lo : stokes.xs[stokes_argmax]);
        w.key("at_reference");
        w.value(stokes_at_reference);
        w.end_object();
        w.end_object();
    }
    w.end_array();
    w.end_object();

    std::string report = w.str();
    report += '\n';
    sink.write("features.json", report);
    return sink.finish();
}

}  // namespace ringeit
