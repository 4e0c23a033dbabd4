#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ringeit/params.hpp"
#include "ringeit/polyroot.hpp"
#include "ringeit/response.hpp"

namespace ringeit {

// Expanded degree-6 response denominator in nondimensional detuning
// x = delta/omega_ref, kept alongside the inputs that produced it.
struct DenominatorPoly {
    std::array<cdouble, 7> coefficients{};  // ascending degree
    SystemParams params;
    DriveState drive;
    double omega_ref = 0.0;
};

namespace detail {

inline std::vector<cdouble> multiply(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
    std::vector<cdouble> out(a.size() + b.size() - 1, cdouble{0.0, 0.0});
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

}  // namespace detail

inline DenominatorPoly build_denominator(const SystemParams& params, const DriveState& drive) {
    validate(params);
    const double omega_ref = reference_frequency(params);
    const double k = params.kappa / omega_ref;
    const double detuning = params.effective_detuning / omega_ref;
    const double w1 = params.omega_1 / omega_ref;
    const double w2 = params.omega_2 / omega_ref;
    const double gm1 = params.gamma_1 / omega_ref;
    const double gm2 = params.gamma_2 / omega_ref;
    const double g1 = drive.G1 / omega_ref;
    const double g2 = drive.G2 / omega_ref;
    const cdouble i{0.0, 1.0};

    // factor coefficients, ascending degree
    const std::vector<cdouble> factor_a{cdouble(k, detuning), -i};   // kappa + i(detuning - x)
    const std::vector<cdouble> factor_b{cdouble(k, -detuning), -i};  // kappa - i(detuning + x)
    const std::vector<cdouble> m1{cdouble(w1 * w1, 0.0), cdouble(0.0, -gm1), cdouble(-1.0, 0.0)};
    const std::vector<cdouble> m2{cdouble(w2 * w2, 0.0), cdouble(0.0, -gm2), cdouble(-1.0, 0.0)};

    std::vector<cdouble> expanded = detail::multiply(detail::multiply(factor_a, factor_b),
                                                     detail::multiply(m1, m2));
    const double coupling_1 = g1 * g1 * w1;
    const double coupling_2 = g2 * g2 * w2;
    for (std::size_t j = 0; j < 3; ++j)
        expanded[j] -= 2.0 * detuning * (coupling_1 * m2[j] + coupling_2 * m1[j]);

    // Leading coefficient from the expansion must be (-i)(-i)(-1)(-1) = -1.
    if (std::abs(expanded[6] - cdouble(-1.0, 0.0)) > 1e-12)
        throw NumericalError("denominator expansion lost its leading coefficient");

    DenominatorPoly poly;
    std::copy(expanded.begin(), expanded.end(), poly.coefficients.begin());
    poly.params = params;
    poly.drive = drive;
    poly.omega_ref = omega_ref;
    return poly;
}

// The six roots of d(x) at one power, sorted by (Re, Im).
struct RootSet {
    double power = 0.0;  // (W)
    std::array<cdouble, 6> roots{};
};

// Closed-form roots with the pump off: two cavity poles and the roots of the
// two mechanical quadratics.
inline std::array<cdouble, 6> pump_off_roots(const SystemParams& params) {
    validate(params);
    const double omega_ref = reference_frequency(params);
    const double k = params.kappa / omega_ref;
    const double detuning = params.effective_detuning / omega_ref;
    auto mechanical = [omega_ref](double omega, double gamma) {
        const double w = omega / omega_ref;
        const double gm = gamma / omega_ref;
        const double disc = w * w - 0.25 * gm * gm;
        if (disc >= 0.0) {
            const double re = std::sqrt(disc);
            return std::array<cdouble, 2>{cdouble(re, -0.5 * gm), cdouble(-re, -0.5 * gm)};
        }
        const double im = std::sqrt(-disc);  // overdamped: both on the imaginary axis
        return std::array<cdouble, 2>{cdouble(0.0, -0.5 * gm + im), cdouble(0.0, -0.5 * gm - im)};
    };
    const auto pair_1 = mechanical(params.omega_1, params.gamma_1);
    const auto pair_2 = mechanical(params.omega_2, params.gamma_2);
    return {cdouble(detuning, -k), cdouble(-detuning, -k), pair_1[0], pair_1[1], pair_2[0], pair_2[1]};
}

namespace detail {

inline void sort_roots(std::array<cdouble, 6>& roots) {
    std::sort(roots.begin(), roots.end(), [](const cdouble& a, const cdouble& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

}  // namespace detail

// Aberth-Ehrlich solve. Warm starts continue from a nearby power; otherwise
// the iteration starts from slightly perturbed pump-off closed-form roots.
inline RootSet find_roots(const DenominatorPoly& poly,
                          std::optional<std::array<cdouble, 6>> warm_start = std::nullopt) {
    std::vector<cdouble> coeffs(poly.coefficients.begin(), poly.coefficients.end());
    std::vector<cdouble> initial;
    if (warm_start) {
        initial.assign(warm_start->begin(), warm_start->end());
    } else {
        const auto closed_form = pump_off_roots(poly.params);
        initial.assign(closed_form.begin(), closed_form.end());
        for (std::size_t j = 0; j < initial.size(); ++j)
            initial[j] += cdouble(1e-6, -1e-6) * (1.0 + std::abs(initial[j]));
    }
    const AberthResult solved = aberth_ehrlich(coeffs, initial);

    RootSet set;
    set.power = poly.drive.power;
    std::copy(solved.roots.begin(), solved.roots.end(), set.roots.begin());
    detail::sort_roots(set.roots);

    double max_coeff = 0.0;
    for (const cdouble& a : poly.coefficients) max_coeff = std::max(max_coeff, std::abs(a));
    std::vector<double> residuals;
    double worst = 0.0;
    for (const cdouble& root : set.roots) {
        residuals.push_back(std::abs(horner(coeffs, root)));
        worst = std::max(worst, residuals.back());
    }
    if (worst > 1e-8 * max_coeff)
        throw NumericalError("root residual " + std::to_string(worst) +
                                 " exceeds 1e-8 of the largest coefficient",
                             std::vector<cdouble>(set.roots.begin(), set.roots.end()), residuals);
    return set;
}

// Minimal-total-distance bijection between two root sets. n = 6, so brute
// force over all 720 permutations is exact and avoids heuristic mismatches
// at avoided crossings.
inline std::array<std::size_t, 6> match_roots(const std::array<cdouble, 6>& from,
                                              const std::array<cdouble, 6>& to) {
    std::array<std::size_t, 6> index{0, 1, 2, 3, 4, 5};
    std::array<std::size_t, 6> best = index;
    double best_cost = std::numeric_limits<double>::infinity();
    do {
        double cost = 0.0;
        for (std::size_t j = 0; j < 6; ++j) cost += std::abs(to[index[j]] - from[j]);
        if (cost < best_cost) {
            best_cost = cost;
            best = index;
        }
    } while (std::next_permutation(index.begin(), index.end()));
    return best;
}

// Root paths across a pump-power sweep, continuity-matched so column j of
// `matched` follows one physical mode.
struct RootTrajectory {
    std::vector<double> powers;  // (W)
    std::vector<std::array<cdouble, 6>> matched;
};

inline RootTrajectory sweep_roots(const SystemParams& params, const std::vector<double>& powers) {
    if (powers.size() < 2) throw ValidationError("power sweep needs at least two entries");
    for (std::size_t i = 1; i < powers.size(); ++i)
        if (powers[i] < powers[i - 1]) throw ValidationError("powers must be ascending");

    RootTrajectory trajectory;
    trajectory.powers = powers;
    trajectory.matched.reserve(powers.size());
    for (std::size_t i = 0; i < powers.size(); ++i) {
        const DriveState drive = pump_steady_state(params, powers[i]);
        const DenominatorPoly poly = build_denominator(params, drive);
        RootSet set;
        try {
            set = find_roots(poly, i == 0 ? std::nullopt
                                          : std::make_optional(trajectory.matched.back()));
        } catch (NumericalError& err) {
            throw NumericalError(std::string(err.what()) + " at power " +
                                     std::to_string(powers[i]) + " W",
                                 err.best_iterate, err.residuals);
        }
        if (i == 0) {
            trajectory.matched.push_back(set.roots);
        } else {
            const auto assignment = match_roots(trajectory.matched.back(), set.roots);
            std::array<cdouble, 6> aligned;
            for (std::size_t j = 0; j < 6; ++j) aligned[j] = set.roots[assignment[j]];
            trajectory.matched.push_back(aligned);
        }
    }
    return trajectory;
}

// Dressed-mode approximations: a central mode at the mechanical line and two
// side modes split by the quadrature sum of the couplings. Valid deep in the
// strong-coupling regime; the ratio records how deep.
struct DressedModes {
    std::array<cdouble, 3> positions{};  // nondimensional, ascending real part
    double validity_ratio = 0.0;         // 2(G1^2+G2^2)/(kappa - gamma/2)^2
    bool strong_coupling = false;        // ratio > 10
};

inline DressedModes dressed_mode_predictions(const SystemParams& params, const DriveState& drive) {
    validate(params);
    const double omega_ref = reference_frequency(params);
    const double k = params.kappa / omega_ref;
    const double gm = 0.5 * (params.gamma_1 + params.gamma_2) / omega_ref;
    const double g1 = drive.G1 / omega_ref;
    const double g2 = drive.G2 / omega_ref;
    const double coupling2 = 2.0 * (g1 * g1 + g2 * g2);
    const double half_split = 0.5 * std::sqrt(coupling2);
    const double side_decay = 0.5 * (k + 0.5 * gm);
    DressedModes modes;
    modes.positions = {cdouble(1.0 - half_split, -side_decay), cdouble(1.0, -0.5 * gm),
                       cdouble(1.0 + half_split, -side_decay)};
    const double edge = k - 0.5 * gm;
    modes.validity_ratio = coupling2 / (edge * edge);
    modes.strong_coupling = modes.validity_ratio > 10.0;
    return modes;
}

// Stable iff every pole sits strictly below the real axis (e^{-i delta t}
// convention); a root on the axis is reported unstable with zero margin.
struct StabilityReport {
    bool stable = false;
    std::array<double, 6> margins{};  // -Im per root
};

inline StabilityReport stability_check(const RootSet& set) {
    StabilityReport report;
    report.stable = true;
    for (std::size_t j = 0; j < 6; ++j) {
        report.margins[j] = -set.roots[j].imag();
        if (!(report.margins[j] > 0.0)) report.stable = false;
    }
    return report;
}

}  // namespace ringeit
