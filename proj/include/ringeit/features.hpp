#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ringeit/errors.hpp"
#include "ringeit/modes.hpp"
#include "ringeit/params.hpp"
#include "ringeit/response.hpp"

namespace ringeit {

enum class FeatureKind { peak, dip };

// A detected spectral extremum. Widths are half-prominence widths: the
// crossing level is extremum -/+ prominence/2, not absolute half maximum,
// because the central absorption peak rides on a nonzero baseline between
// the two transparency dips.
struct SpectralFeature {
    FeatureKind kind = FeatureKind::peak;
    double center = 0.0;          // x units of the input grid
    double extremum_value = 0.0;  // spectrum value at the center
    double fwhm = 0.0;
    double prominence = 0.0;
    double left_crossing = 0.0;
    double right_crossing = 0.0;
    bool edge_limited = false;  // a crossing fell back to the window edge
};

struct FeatureSet {
    std::vector<SpectralFeature> features;  // ordered by center
    int dropped_below_floor = 0;
    double dynamic_range = 0.0;
};

// All local extrema with prominence above floor * dynamic range. Prominence
// comes from walking each side until the signal first exceeds the extremum;
// crossings are linearly interpolated and clamp to the window edge when the
// level is never reached.
inline FeatureSet extract_features(const std::vector<double>& xs, const std::vector<double>& ys,
                                   double prominence_floor = 1e-3) {
    if (xs.size() != ys.size()) throw ValidationError("grid/value size mismatch");
    if (xs.size() < 3) throw ValidationError("feature extraction needs at least three samples");
    const std::size_t n = xs.size();

    FeatureSet result;
    const auto [lo_it, hi_it] = std::minmax_element(ys.begin(), ys.end());
    result.dynamic_range = *hi_it - *lo_it;
    if (result.dynamic_range == 0.0) return result;

    std::vector<SpectralFeature> candidates;
    for (const auto [sign, kind] : {std::pair{1.0, FeatureKind::peak}, std::pair{-1.0, FeatureKind::dip}}) {
        auto w = [&](std::size_t j) { return sign * ys[j]; };
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (!(w(i) > w(i - 1) && w(i) >= w(i + 1))) continue;

            double left_min = w(i);
            for (std::size_t j = i; j-- > 0 && w(j) <= w(i);) left_min = std::min(left_min, w(j));
            double right_min = w(i);
            for (std::size_t j = i + 1; j < n && w(j) <= w(i); ++j) right_min = std::min(right_min, w(j));
            const double prominence = w(i) - std::max(left_min, right_min);
            if (prominence <= 0.0) continue;
            const double level = w(i) - 0.5 * prominence;

            SpectralFeature feature;
            feature.kind = kind;
            feature.center = xs[i];
            feature.extremum_value = ys[i];
            feature.prominence = prominence;

            std::size_t j = i;
            while (j > 0 && w(j) > level) --j;
            if (w(j) <= level) {
                feature.left_crossing =
                    xs[j] + (level - w(j)) * (xs[j + 1] - xs[j]) / (w(j + 1) - w(j));
            } else {
                feature.left_crossing = xs.front();
                feature.edge_limited = true;
            }
            j = i;
            while (j + 1 < n && w(j) > level) ++j;
            if (w(j) <= level) {
                feature.right_crossing =
                    xs[j] + (level - w(j)) * (xs[j - 1] - xs[j]) / (w(j - 1) - w(j));
            } else {
                feature.right_crossing = xs.back();
                feature.edge_limited = true;
            }
            feature.fwhm = feature.right_crossing - feature.left_crossing;
            candidates.push_back(feature);
        }
    }

    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const SpectralFeature& a, const SpectralFeature& b) { return a.center < b.center; });
    for (const SpectralFeature& feature : candidates) {
        if (feature.prominence >= prominence_floor * result.dynamic_range)
            result.features.push_back(feature);
        else
            ++result.dropped_below_floor;
    }

    for (const SpectralFeature& feature : result.features) {
        const auto inside = std::count_if(xs.begin(), xs.end(), [&](double x) {
            return x > feature.left_crossing && x < feature.right_crossing;
        });
        if (inside < 3)
            throw ResolutionError("feature at x = " + std::to_string(feature.center) +
                                  " spans fewer than 3 grid steps after refinement");
    }
    return result;
}

struct RefineOptions {
    double threshold = 1e-3;          // |dy| trigger as a fraction of dynamic range
    double floor_step = 0.0;          // minimum interval width (x units); must be set
    std::size_t max_points = 1000000; // total sample budget
};

// Adaptive scan: bisect intervals whose value jump exceeds the threshold,
// then bisect the flanks of every local extremum down to the floor step so
// extremum centers are localized to the floor resolution. A gamma-wide line
// sampled at floor gamma/20 ends up with >= 20 points across it.
template <typename F>
inline std::pair<std::vector<double>, std::vector<double>> refine_scan(F&& evaluate,
                                                                       std::vector<double> xs,
                                                                       const RefineOptions& options) {
    if (xs.size() < 2) throw ValidationError("refinement needs at least two base points");
    if (!(options.floor_step > 0.0)) throw ValidationError("floor_step must be positive");
    std::vector<double> ys(xs.size());
    std::transform(xs.begin(), xs.end(), ys.begin(), evaluate);

    auto run_passes = [&](auto&& wants_midpoint) {
        for (;;) {
            const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
            const double range = *hi - *lo;
            std::vector<char> split(xs.size() - 1, 0);
            std::size_t extra = 0;
            for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
                if (xs[i + 1] - xs[i] <= options.floor_step) continue;
                if (wants_midpoint(i, range)) {
                    split[i] = 1;
                    ++extra;
                }
            }
            if (extra == 0) return;
            if (xs.size() + extra > options.max_points)
                throw BudgetError("refinement budget of " + std::to_string(options.max_points) +
                                  " points exceeded");
            std::vector<double> new_xs, new_ys;
            new_xs.reserve(xs.size() + extra);
            new_ys.reserve(xs.size() + extra);
            for (std::size_t i = 0; i < xs.size(); ++i) {
                new_xs.push_back(xs[i]);
                new_ys.push_back(ys[i]);
                if (i + 1 < xs.size() && split[i]) {
                    const double mid = 0.5 * (xs[i] + xs[i + 1]);
                    new_xs.push_back(mid);
                    new_ys.push_back(evaluate(mid));
                }
            }
            xs.swap(new_xs);
            ys.swap(new_ys);
        }
    };

    run_passes([&](std::size_t i, double range) {
        return range > 0.0 && std::abs(ys[i + 1] - ys[i]) > options.threshold * range;
    });
    run_passes([&](std::size_t i, double) {
        auto is_extremum = [&](std::size_t j) {
            if (j == 0 || j + 1 >= ys.size()) return false;
            return (ys[j] > ys[j - 1] && ys[j] >= ys[j + 1]) ||
                   (ys[j] < ys[j - 1] && ys[j] <= ys[j + 1]);
        };
        return is_extremum(i) || is_extremum(i + 1);
    });
    return {std::move(xs), std::move(ys)};
}

// Floor step that guarantees >= 20 samples across a mechanical-linewidth-wide
// feature, in nondimensional units.
inline double default_floor_step(const SystemParams& params) {
    return std::min(params.gamma_1, params.gamma_2) / reference_frequency(params) / 20.0;
}

struct RefinedSpectrum {
    std::vector<double> xs;      // nondimensional detuning
    std::vector<double> values;  // nu_p or Stokes intensity
};

inline RefinedSpectrum refine_nu_p(const SystemParams& params, const DriveState& drive, double lo,
                                   double hi, int base_points, RefineOptions options) {
    const ResponseEvaluator evaluator(params, drive);
    const double omega_ref = evaluator.omega_ref();
    if (options.floor_step <= 0.0) options.floor_step = default_floor_step(params);
    auto [xs, ys] = refine_scan(
        [&](double x) { return evaluator.evaluate(x * omega_ref).nu_p; },
        uniform_grid(lo, hi, base_points), options);
    return {std::move(xs), std::move(ys)};
}

inline RefinedSpectrum refine_stokes(const SystemParams& params, const DriveState& drive, double lo,
                                     double hi, int base_points, RefineOptions options) {
    const ResponseEvaluator evaluator(params, drive);
    const double omega_ref = evaluator.omega_ref();
    if (options.floor_step <= 0.0) options.floor_step = default_floor_step(params);
    auto [xs, ys] = refine_scan(
        [&](double x) { return evaluator.evaluate(x * omega_ref).stokes_intensity; },
        uniform_grid(lo, hi, base_points), options);
    return {std::move(xs), std::move(ys)};
}

enum class WidthMode { unequal, equal };

// One analytic linewidth/splitting value, nondimensional.
struct AnalyticWidth {
    std::string label;
    double value = 0.0;
    std::string formula;
    bool valid = true;  // inside the formula's validity regime
};

inline std::vector<AnalyticWidth> analytic_widths(const SystemParams& params,
                                                  const DriveState& drive, WidthMode mode) {
    validate(params);
    const double omega_ref = reference_frequency(params);
    if (mode == WidthMode::equal &&
        std::abs(params.omega_1 - params.omega_2) > 1e-12 * omega_ref)
        throw ValidationError("equal-frequency formulas require omega_1 == omega_2");
    const double k = params.kappa / omega_ref;
    const double gm = 0.5 * (params.gamma_1 + params.gamma_2) / omega_ref;
    const double g1 = drive.G1 / omega_ref;
    const double g2 = drive.G2 / omega_ref;
    const bool strong = dressed_mode_predictions(params, drive).strong_coupling;

    std::vector<AnalyticWidth> widths;
    if (mode == WidthMode::unequal) {
        const double w1 = params.omega_1 / omega_ref;
        const double w2 = params.omega_2 / omega_ref;
        const double central = (w1 - w2) - (gm + (g1 * g1 + g2 * g2) / (2.0 * k));
        widths.push_back({"dip near omega_2", gm + g2 * g2 / k, "gamma + G2^2/kappa", true});
        widths.push_back({"dip near omega_1", gm + g1 * g1 / k, "gamma + G1^2/kappa", true});
        // The central formula can go negative at large coupling; reported
        // with a validity flag rather than clamped.
        widths.push_back({"central peak", central,
                          "(omega_1 - omega_2) - (gamma + (G1^2+G2^2)/(2 kappa))", central > 0.0});
        widths.push_back({"central peak (strong coupling)", gm, "gamma", strong});
        widths.push_back({"side peaks", k + 0.5 * gm, "kappa + gamma/2", strong});
        widths.push_back({"side-peak splitting", std::sqrt(2.0 * (g1 * g1 + g2 * g2)),
                          "sqrt(2 (G1^2+G2^2))", strong});
    } else {
        const double g_eff = std::sqrt(0.5 * (g1 * g1 + g2 * g2));  // = G when G1 == G2
        widths.push_back({"dip", gm + (g1 * g1 + g2 * g2) / k, "gamma + 2 G^2/kappa", true});
        widths.push_back({"side peaks", k + 0.5 * gm, "kappa + gamma/2", strong});
        widths.push_back({"left side-peak position", 1.0 - g_eff, "omega_m - G", strong});
        widths.push_back({"right side-peak position", 1.0 + g_eff, "omega_m + G", strong});
        widths.push_back({"side-peak separation", 2.0 * g_eff, "2 G", strong});
    }
    return widths;
}

struct AnalyticComparison {
    std::string label;
    double numeric = 0.0;
    double analytic = 0.0;
    std::string formula;
    double deviation = 0.0;  // |numeric - analytic| / |analytic|
    bool valid_regime = true;
};

namespace detail {

inline const AnalyticWidth& lookup_width(const std::vector<AnalyticWidth>& widths,
                                         const std::string& label) {
    for (const AnalyticWidth& w : widths)
        if (w.label == label) return w;
    throw ValidationError("missing analytic width entry " + label);
}

inline AnalyticComparison make_comparison(const std::string& label, double numeric,
                                          const AnalyticWidth& width) {
    AnalyticComparison cmp;
    cmp.label = label;
    cmp.numeric = numeric;
    cmp.analytic = width.value;
    cmp.formula = width.formula;
    cmp.deviation = width.value != 0.0 ? std::abs(numeric - width.value) / std::abs(width.value)
                                       : std::numeric_limits<double>::infinity();
    cmp.valid_regime = width.valid;
    return cmp;
}

}  // namespace detail

// Pair measured features with the applicable analytic formulas. Dips are
// matched by center order (two most prominent), the central peak is the most
// prominent peak between them, side peaks are the outermost peaks.
inline std::vector<AnalyticComparison> compare_features(const SystemParams& params,
                                                        const DriveState& drive,
                                                        const FeatureSet& set, WidthMode mode) {
    const std::vector<AnalyticWidth> widths = analytic_widths(params, drive, mode);
    std::vector<AnalyticComparison> out;

    std::vector<const SpectralFeature*> dips, peaks;
    for (const SpectralFeature& f : set.features)
        (f.kind == FeatureKind::dip ? dips : peaks).push_back(&f);
    auto by_prominence = [](const SpectralFeature* a, const SpectralFeature* b) {
        if (a->prominence != b->prominence) return a->prominence > b->prominence;
        return a->center < b->center;
    };

    if (mode == WidthMode::unequal) {
        if (dips.size() >= 2) {
            std::vector<const SpectralFeature*> main(dips);
            std::sort(main.begin(), main.end(), by_prominence);
            main.resize(2);
            std::sort(main.begin(), main.end(),
                      [](auto* a, auto* b) { return a->center < b->center; });
            out.push_back(detail::make_comparison("dip near omega_2", main[0]->fwhm,
                                                  detail::lookup_width(widths, "dip near omega_2")));
            out.push_back(detail::make_comparison("dip near omega_1", main[1]->fwhm,
                                                  detail::lookup_width(widths, "dip near omega_1")));
            const SpectralFeature* central = nullptr;
            for (const SpectralFeature* p : peaks) {
                if (p->center <= main[0]->center || p->center >= main[1]->center) continue;
                if (!central || by_prominence(p, central)) central = p;
            }
            if (central) {
                out.push_back(detail::make_comparison("central peak", central->fwhm,
                                                      detail::lookup_width(widths, "central peak")));
                out.push_back(
                    detail::make_comparison("central peak (strong coupling)", central->fwhm,
                                            detail::lookup_width(widths, "central peak (strong coupling)")));
            }
        }
        if (peaks.size() >= 2) {
            const double separation = peaks.back()->center - peaks.front()->center;
            out.push_back(detail::make_comparison("side-peak splitting", separation,
                                                  detail::lookup_width(widths, "side-peak splitting")));
            const AnalyticWidth& side = detail::lookup_width(widths, "side peaks");
            out.push_back(detail::make_comparison("left side-peak width", peaks.front()->fwhm, side));
            out.push_back(detail::make_comparison("right side-peak width", peaks.back()->fwhm, side));
        }
    } else {
        if (!dips.empty()) {
            const SpectralFeature* dip = *std::min_element(dips.begin(), dips.end(), by_prominence);
            out.push_back(detail::make_comparison("dip", dip->fwhm, detail::lookup_width(widths, "dip")));
        }
        if (peaks.size() >= 2) {
            out.push_back(detail::make_comparison("left side-peak position", peaks.front()->center,
                                                  detail::lookup_width(widths, "left side-peak position")));
            out.push_back(detail::make_comparison("right side-peak position", peaks.back()->center,
                                                  detail::lookup_width(widths, "right side-peak position")));
            out.push_back(detail::make_comparison("side-peak separation",
                                                  peaks.back()->center - peaks.front()->center,
                                                  detail::lookup_width(widths, "side-peak separation")));
            const AnalyticWidth& side = detail::lookup_width(widths, "side peaks");
            out.push_back(detail::make_comparison("left side-peak width", peaks.front()->fwhm, side));
            out.push_back(detail::make_comparison("right side-peak width", peaks.back()->fwhm, side));
        }
    }
    return out;
}

}  // namespace ringeit
