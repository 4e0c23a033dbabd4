#pragma once

#include <complex>
#include <random>
#include <vector>

#include "ringeit/constants.hpp"
#include "ringeit/params.hpp"

namespace testsupport {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Log-uniform across decades, the natural spread for physical rates.
inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

inline std::complex<double> complex_in_annulus(std::mt19937_64& rng, double r_lo, double r_hi) {
    return std::polar(log_uniform(rng, r_lo, r_hi), uniform(rng, 0.0, ringeit::two_pi));
}

// Polynomial with prescribed roots, ascending coefficients, unit leading term.
inline std::vector<std::complex<double>> poly_from_roots(
    const std::vector<std::complex<double>>& roots) {
    std::vector<std::complex<double>> coeffs{1.0};
    for (const std::complex<double>& r : roots) {
        coeffs.insert(coeffs.begin(), 0.0);
        for (std::size_t i = 0; i + 1 < coeffs.size(); ++i) coeffs[i] -= r * coeffs[i + 1];
    }
    return coeffs;
}

// Physically plausible random system: resolved-sideband-ish rates with the
// mechanical split, masses, and angle all varied.
inline ringeit::SystemParams random_params(std::mt19937_64& rng) {
    ringeit::SystemParams p;
    const double omega_m = ringeit::two_pi * log_uniform(rng, 1e6, 1e9);
    p.wavelength = uniform(rng, 400e-9, 1600e-9);
    p.pull_parameter = ringeit::two_pi * log_uniform(rng, 1e17, 1e19);
    p.mass_1 = log_uniform(rng, 1e-13, 1e-10);
    p.mass_2 = log_uniform(rng, 1e-13, 1e-10);
    p.omega_1 = omega_m * uniform(rng, 1.0, 1.3);
    p.omega_2 = omega_m * uniform(rng, 0.7, 1.0);
    p.gamma_1 = omega_m * log_uniform(rng, 1e-6, 1e-3);
    p.gamma_2 = omega_m * log_uniform(rng, 1e-6, 1e-3);
    p.kappa = omega_m * uniform(rng, 0.05, 0.5);
    p.theta = uniform(rng, 0.0, 0.9 * ringeit::pi);
    p.effective_detuning = omega_m * uniform(rng, 0.8, 1.2);
    return p;
}

// Pump power that puts the stronger effective coupling at `target` in units
// of the reference frequency. Drawing power independently of the other
// parameters can land G orders of magnitude beyond any physical drive, where
// the response polynomial is too ill-conditioned for oracle comparisons.
inline double power_for_coupling(const ringeit::SystemParams& p, double target) {
    const ringeit::Couplings g = ringeit::derive_couplings(p);
    const double projection = std::cos(0.5 * p.theta);
    const double c0_needed = target * ringeit::reference_frequency(p) /
                             (std::max(g.g1, g.g2) * projection);
    const double epsilon = c0_needed * std::hypot(p.kappa, p.effective_detuning);
    return epsilon * epsilon * ringeit::hbar * ringeit::pump_frequency(p) / (2.0 * p.kappa);
}

}  // namespace testsupport
