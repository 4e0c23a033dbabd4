#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "ringeit/constants.hpp"
#include "ringeit/errors.hpp"

namespace ringeit {

// Physical description of the ring cavity and its two movable mirrors.
// All frequencies are angular (rad/s); config-file ingestion applies the
// 2*pi conversion before values land here.
struct SystemParams {
    double wavelength = 0.0;      // pump wavelength (m)
    double pull_parameter = 0.0;  // frequency pull per displacement (rad s^-1 m^-1)
    double mass_1 = 0.0;          // effective mirror masses (kg)
    double mass_2 = 0.0;
    double omega_1 = 0.0;  // mechanical resonances (rad/s)
    double omega_2 = 0.0;
    double gamma_1 = 0.0;  // mechanical damping rates (rad/s)
    double gamma_2 = 0.0;
    double kappa = 0.0;               // cavity decay rate (rad/s)
    double theta = 0.0;               // fold angle between incident and reflected beams (rad)
    double effective_detuning = 0.0;  // pump detuning including the static radiation-pressure shift (rad/s)
};

inline void validate(const SystemParams& p) {
    auto require_positive = [](double v, const char* name) {
        if (!std::isfinite(v) || v <= 0.0)
            throw ValidationError(std::string(name) + " must be strictly positive");
    };
    require_positive(p.wavelength, "wavelength");
    require_positive(p.mass_1, "mass_1");
    require_positive(p.mass_2, "mass_2");
    require_positive(p.omega_1, "omega_1");
    require_positive(p.omega_2, "omega_2");
    require_positive(p.gamma_1, "gamma_1");
    require_positive(p.gamma_2, "gamma_2");
    require_positive(p.kappa, "kappa");
    if (!std::isfinite(p.pull_parameter) || p.pull_parameter < 0.0)
        throw ValidationError("pull_parameter must be non-negative");
    if (!std::isfinite(p.theta) || p.theta < 0.0 || p.theta >= pi)
        throw ValidationError("theta must satisfy 0 <= theta < pi");
    if (!std::isfinite(p.effective_detuning))
        throw ValidationError("effective_detuning must be finite");
}

inline double pump_frequency(const SystemParams& p) {
    return two_pi * speed_of_light / p.wavelength;
}

// Reference used for nondimensionalization and reporting: the mean mechanical
// frequency. Equals the nominal omega_m for both the 1.1/0.9 split and the
// equal-frequency configuration.
inline double reference_frequency(const SystemParams& p) {
    return 0.5 * (p.omega_1 + p.omega_2);
}

// kappa < min(omega_1, omega_2): motional sidebands spectrally resolved.
// Reported as a regime label, never enforced.
struct SidebandDiagnostic {
    double ratio = 0.0;  // kappa / min(omega_1, omega_2)
    bool resolved = false;
};

inline SidebandDiagnostic resolved_sideband(const SystemParams& p) {
    validate(p);
    const double ratio = p.kappa / std::min(p.omega_1, p.omega_2);
    return {ratio, ratio < 1.0};
}

struct Couplings {
    double g1 = 0.0;  // single-photon optomechanical rates (rad/s)
    double g2 = 0.0;
};

inline Couplings derive_couplings(const SystemParams& p) {
    validate(p);
    return {p.pull_parameter * std::sqrt(hbar / (p.mass_1 * p.omega_1)),
            p.pull_parameter * std::sqrt(hbar / (p.mass_2 * p.omega_2))};
}

// Pump-only steady state. epsilon is real non-negative by phase convention,
// which fixes arg(c0) = -arg(kappa + i*detuning).
struct DriveState {
    double power = 0.0;    // (W)
    double epsilon = 0.0;  // drive amplitude (rad/s)
    std::complex<double> c0{0.0, 0.0};  // intracavity pump amplitude
    double G1 = 0.0;  // effective couplings g_j |c0| cos(theta/2) (rad/s)
    double G2 = 0.0;
    double Q10 = 0.0;  // static mirror displacements (opposite signs:
    double Q20 = 0.0;  // radiation pressure pushes the mirrors apart)
};

inline DriveState pump_steady_state_at(const SystemParams& p, double power, double detuning) {
    const Couplings g = derive_couplings(p);
    if (!std::isfinite(power) || power < 0.0)
        throw ValidationError("power must be non-negative");
    DriveState d;
    d.power = power;
    d.epsilon = std::sqrt(2.0 * p.kappa * power / (hbar * pump_frequency(p)));
    d.c0 = d.epsilon / std::complex<double>(p.kappa, detuning);
    const double c0_abs = std::abs(d.c0);
    const double geometry = std::cos(0.5 * p.theta);
    d.G1 = g.g1 * c0_abs * geometry;
    d.G2 = g.g2 * c0_abs * geometry;
    d.Q10 = -(d.G1 / p.omega_1) * c0_abs;
    d.Q20 = +(d.G2 / p.omega_2) * c0_abs;
    return d;
}

inline DriveState pump_steady_state(const SystemParams& p, double power) {
    return pump_steady_state_at(p, power, p.effective_detuning);
}

namespace detail {

// Real roots of x^3 + b x^2 + c x + d, Newton-polished, deduplicated,
// ascending. Trigonometric branch for three real roots, Cardano otherwise.
inline std::vector<double> solve_cubic_real(double b, double c, double d) {
    const double q = (b * b - 3.0 * c) / 9.0;
    const double r = (2.0 * b * b * b - 9.0 * b * c + 27.0 * d) / 54.0;
    std::vector<double> roots;
    if (r * r <= q * q * q) {
        const double magnitude = std::sqrt(q * q * q);  // zero only for a triple root
        const double phi =
            magnitude > 0.0 ? std::acos(std::clamp(r / magnitude, -1.0, 1.0)) : 0.0;
        const double amp = -2.0 * std::sqrt(q);
        roots = {amp * std::cos(phi / 3.0) - b / 3.0,
                 amp * std::cos((phi + two_pi) / 3.0) - b / 3.0,
                 amp * std::cos((phi - two_pi) / 3.0) - b / 3.0};
    } else {
        const double a = -std::copysign(std::cbrt(std::abs(r) + std::sqrt(r * r - q * q * q)), r);
        const double bb = (a != 0.0) ? q / a : 0.0;
        roots = {a + bb - b / 3.0};
    }
    for (double& x : roots) {
        for (int it = 0; it < 3; ++it) {
            const double f = ((x + b) * x + c) * x + d;
            const double df = (3.0 * x + 2.0 * b) * x + c;
            if (df == 0.0) break;
            x -= f / df;
        }
    }
    std::sort(roots.begin(), roots.end());
    const double scale = std::max({1.0, std::abs(roots.front()), std::abs(roots.back())});
    std::vector<double> unique_roots;
    for (double x : roots)
        if (unique_roots.empty() || x - unique_roots.back() > 1e-9 * scale)
            unique_roots.push_back(x);
    return unique_roots;
}

}  // namespace detail

struct DetuningSolution {
    double detuning = 0.0;  // self-consistent effective detuning (rad/s)
    DriveState drive;
};

// All real solutions of the radiation-pressure self-consistency relation
//   detuning = bare - (g1^2/omega_1 + g2^2/omega_2) cos^2(theta/2) eps^2 / (kappa^2 + detuning^2),
// a cubic after clearing denominators. Reports every branch, sorted by
// detuning; branch selection is left to the caller.
inline std::vector<DetuningSolution> self_consistent_detuning(const SystemParams& p,
                                                              double bare_detuning,
                                                              double power) {
    const Couplings g = derive_couplings(p);
    if (!std::isfinite(bare_detuning))
        throw ValidationError("bare_detuning must be finite");
    if (!std::isfinite(power) || power < 0.0)
        throw ValidationError("power must be non-negative");
    const double eps2 = 2.0 * p.kappa * power / (hbar * pump_frequency(p));
    const double cos_half = std::cos(0.5 * p.theta);
    const double shift = (g.g1 * g.g1 / p.omega_1 + g.g2 * g.g2 / p.omega_2) * cos_half * cos_half * eps2;
    // detuning^3 - bare*detuning^2 + kappa^2*detuning - bare*kappa^2 + shift = 0
    const std::vector<double> roots = detail::solve_cubic_real(
        -bare_detuning, p.kappa * p.kappa, -bare_detuning * p.kappa * p.kappa + shift);
    std::vector<DetuningSolution> out;
    out.reserve(roots.size());
    for (double x : roots) out.push_back({x, pump_steady_state_at(p, power, x)});
    return out;
}

}  // namespace ringeit
