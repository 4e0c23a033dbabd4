#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "ringeit/errors.hpp"
#include "ringeit/params.hpp"
#include "ringeit/polyroot.hpp"

namespace ringeit {

// Linear response at one probe detuning. c_plus/c_minus carry units of
// seconds; the output-field coefficients 2*kappa*c are dimensionless.
struct ResponsePoint {
    double delta = 0.0;  // probe detuning (rad/s)
    cdouble c_plus{0.0, 0.0};
    cdouble c_minus{0.0, 0.0};
    cdouble eps_out_plus{0.0, 0.0};
    cdouble eps_out_minus{0.0, 0.0};
    double nu_p = 0.0;              // Re(eps_out_plus), probe quadrature
    double stokes_intensity = 0.0;  // |eps_out_minus|^2
};

struct ResponseSpectrum {
    std::vector<double> grid;  // probe detunings (rad/s), strictly increasing
    std::vector<ResponsePoint> points;
    DriveState drive;
    SystemParams params;
};

// Nondimensional evaluation core. All frequencies are divided by the
// reference (mean mechanical) frequency before any polynomial arithmetic:
// d(delta) in raw SI units spans ~1e46 and would shred the mantissa. The
// numerator and denominator are assembled from the factored quadratics to
// preserve the cancellation structure of the transparency dips.
class ResponseEvaluator {
public:
    static constexpr double denominator_floor = 1e-30;

    ResponseEvaluator(const SystemParams& params, const DriveState& drive) {
        validate(params);
        omega_ref_ = reference_frequency(params);
        kappa_si_ = params.kappa;
        k_ = params.kappa / omega_ref_;
        detuning_ = params.effective_detuning / omega_ref_;
        w1_ = params.omega_1 / omega_ref_;
        w2_ = params.omega_2 / omega_ref_;
        gm1_ = params.gamma_1 / omega_ref_;
        gm2_ = params.gamma_2 / omega_ref_;
        const double g1 = drive.G1 / omega_ref_;
        const double g2 = drive.G2 / omega_ref_;
        coupling_1_ = g1 * g1 * w1_;
        coupling_2_ = g2 * g2 * w2_;
        // c0^2/|c0|^2: unit-modulus phase of the Stokes coefficient. The
        // zero-drive limit is exactly zero (the couplings vanish faster than
        // the phase becomes undefined), encoded by zeroing the factor.
        const double c0_norm = std::norm(drive.c0);
        stokes_phase_ = c0_norm > 0.0 ? drive.c0 * drive.c0 / c0_norm : cdouble{0.0, 0.0};
    }

    double omega_ref() const { return omega_ref_; }

    // d(x), x = delta/omega_ref, from the factored quadratics.
    cdouble denominator(double x) const {
        const cdouble a{k_, detuning_ - x};
        const cdouble b{k_, -(detuning_ + x)};
        const cdouble m1{w1_ * w1_ - x * x, -gm1_ * x};
        const cdouble m2{w2_ * w2_ - x * x, -gm2_ * x};
        return a * b * m1 * m2 - 2.0 * detuning_ * (coupling_1_ * m2 + coupling_2_ * m1);
    }

    ResponsePoint evaluate(double delta) const {
        const double x = delta / omega_ref_;
        const cdouble b{k_, -(detuning_ + x)};
        const cdouble m1{w1_ * w1_ - x * x, -gm1_ * x};
        const cdouble m2{w2_ * w2_ - x * x, -gm2_ * x};
        const cdouble bracket = coupling_1_ * m2 + coupling_2_ * m1;
        const cdouble a{k_, detuning_ - x};
        const cdouble d = a * b * m1 * m2 - 2.0 * detuning_ * bracket;
        if (std::abs(d) < denominator_floor)
            throw SingularityError("response denominator vanished at delta = " +
                                       std::to_string(delta) + " rad/s",
                                   delta);
        const cdouble i{0.0, 1.0};
        ResponsePoint point;
        point.delta = delta;
        point.eps_out_plus = 2.0 * k_ * (b * m1 * m2 + i * bracket) / d;
        const cdouble bracket_conj = coupling_1_ * std::conj(m2) + coupling_2_ * std::conj(m1);
        point.eps_out_minus = 2.0 * k_ * i * stokes_phase_ * bracket_conj / std::conj(d);
        point.c_plus = point.eps_out_plus / (2.0 * kappa_si_);
        point.c_minus = point.eps_out_minus / (2.0 * kappa_si_);
        point.nu_p = point.eps_out_plus.real();
        point.stokes_intensity = std::norm(point.eps_out_minus);
        return point;
    }

private:
    double omega_ref_ = 0.0;
    double kappa_si_ = 0.0;
    double k_ = 0.0, detuning_ = 0.0;
    double w1_ = 0.0, w2_ = 0.0, gm1_ = 0.0, gm2_ = 0.0;
    double coupling_1_ = 0.0, coupling_2_ = 0.0;
    cdouble stokes_phase_{0.0, 0.0};
};

inline cdouble c_plus(const SystemParams& params, const DriveState& drive, double delta) {
    return ResponseEvaluator(params, drive).evaluate(delta).c_plus;
}

inline cdouble c_minus(const SystemParams& params, const DriveState& drive, double delta) {
    return ResponseEvaluator(params, drive).evaluate(delta).c_minus;
}

// Closed-form output coefficient with the pump off: a cavity Lorentzian.
inline cdouble pump_off_eps_out_plus(const SystemParams& params, double delta) {
    return 2.0 * params.kappa / cdouble(params.kappa, params.effective_detuning - delta);
}

inline std::vector<double> uniform_grid(double lo, double hi, int points) {
    if (points < 1) throw ValidationError("grid needs at least one point");
    if (points == 1) return {lo};
    if (!(hi > lo)) throw ValidationError("grid bounds must be ordered");
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    return grid;
}

inline ResponseSpectrum scan_spectrum(const SystemParams& params, const DriveState& drive,
                                      const std::vector<double>& grid) {
    if (grid.empty()) throw ValidationError("grid must be non-empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw ValidationError("grid must be strictly increasing");
    const ResponseEvaluator evaluator(params, drive);
    ResponseSpectrum spectrum;
    spectrum.grid = grid;
    spectrum.points.reserve(grid.size());
    for (double delta : grid) spectrum.points.push_back(evaluator.evaluate(delta));
    spectrum.drive = drive;
    spectrum.params = params;
    return spectrum;
}

}  // namespace ringeit
