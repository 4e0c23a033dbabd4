#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ringeit/constants.hpp"
#include "ringeit/errors.hpp"

namespace ringeit {

using cdouble = std::complex<double>;

// p(z) for coefficients in ascending degree order.
inline cdouble horner(const std::vector<cdouble>& coeffs, cdouble z) {
    cdouble acc{0.0, 0.0};
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
    return acc;
}

// p(z) and p'(z) in one pass.
inline std::pair<cdouble, cdouble> horner_with_derivative(const std::vector<cdouble>& coeffs,
                                                          cdouble z) {
    cdouble value{0.0, 0.0};
    cdouble derivative{0.0, 0.0};
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        derivative = derivative * z + value;
        value = value * z + coeffs[i];
    }
    return {value, derivative};
}

// Scale of p evaluated at z: sum |a_i| |z|^i. |p(z)| below ~1e-15 of this is
// at the evaluation noise floor, the strongest claim double precision allows.
inline double evaluation_scale(const std::vector<cdouble>& coeffs, cdouble z) {
    const double az = std::abs(z);
    double scale = 0.0;
    double pw = 1.0;
    for (const cdouble& a : coeffs) {
        scale += std::abs(a) * pw;
        pw *= az;
    }
    return scale;
}

struct AberthOptions {
    int max_iterations = 500;
    double step_tolerance = 1e-13;       // relative correction declaring a root done
    double residual_tolerance = 1e-14;   // backward-error acceptance (times evaluation scale)
};

struct AberthResult {
    std::vector<cdouble> roots;  // iteration order (callers sort as needed)
    int iterations = 0;
};

// Starting points on a circle sized by the Cauchy bound, with an angular
// offset so symmetric root patterns are never hit exactly.
inline std::vector<cdouble> initial_circle(const std::vector<cdouble>& coeffs) {
    const std::size_t degree = coeffs.size() - 1;
    double bound = 0.0;
    for (std::size_t i = 0; i < degree; ++i)
        bound = std::max(bound, std::abs(coeffs[i] / coeffs.back()));
    const double radius = 0.5 * (1.0 + bound);
    std::vector<cdouble> z(degree);
    for (std::size_t k = 0; k < degree; ++k)
        z[k] = std::polar(radius, two_pi * (static_cast<double>(k) + 0.37) / static_cast<double>(degree));
    return z;
}

// Aberth-Ehrlich simultaneous root iteration (Gauss-Seidel update order).
// Accepts an optional warm start, e.g. roots at a nearby parameter value.
inline AberthResult aberth_ehrlich(const std::vector<cdouble>& coeffs,
                                   std::optional<std::vector<cdouble>> initial = std::nullopt,
                                   const AberthOptions& options = {}) {
    if (coeffs.size() < 2) throw ValidationError("polynomial degree must be at least 1");
    if (std::abs(coeffs.back()) == 0.0) throw ValidationError("leading coefficient must be nonzero");
    const std::size_t degree = coeffs.size() - 1;

    std::vector<cdouble> z = initial ? std::move(*initial) : initial_circle(coeffs);
    if (z.size() != degree)
        throw ValidationError("initial guess count must equal the polynomial degree");
    // Split any coincident starting points; the update needs distinct iterates.
    for (std::size_t k = 0; k < degree; ++k)
        for (std::size_t j = 0; j < k; ++j)
            if (z[k] == z[j]) z[k] += cdouble(1e-8, 1e-8) * (1.0 + std::abs(z[k]));

    for (int iteration = 1; iteration <= options.max_iterations; ++iteration) {
        bool all_settled = true;
        for (std::size_t k = 0; k < degree; ++k) {
            const auto [value, derivative] = horner_with_derivative(coeffs, z[k]);
            if (std::abs(value) <= options.residual_tolerance * evaluation_scale(coeffs, z[k]))
                continue;  // at the attainable floor (covers multiple roots)
            cdouble newton = (derivative != cdouble{0.0, 0.0})
                                 ? value / derivative
                                 : cdouble(1e-6, 1e-6) * (1.0 + std::abs(z[k]));
            cdouble repulsion{0.0, 0.0};
            for (std::size_t j = 0; j < degree; ++j) {
                if (j == k) continue;
                cdouble diff = z[k] - z[j];
                if (diff == cdouble{0.0, 0.0}) diff = cdouble(1e-12, 0.0) * (1.0 + std::abs(z[k]));
                repulsion += 1.0 / diff;
            }
            const cdouble denom = 1.0 - newton * repulsion;
            const cdouble step = (denom != cdouble{0.0, 0.0}) ? newton / denom : newton;
            z[k] -= step;
            if (std::abs(step) > options.step_tolerance * (1.0 + std::abs(z[k])))
                all_settled = false;
        }
        if (all_settled) return {std::move(z), iteration};
    }

    std::vector<double> residuals(degree);
    for (std::size_t k = 0; k < degree; ++k) residuals[k] = std::abs(horner(coeffs, z[k]));
    throw NumericalError("root iteration did not converge within " +
                             std::to_string(options.max_iterations) + " iterations",
                         std::move(z), std::move(residuals));
}

}  // namespace ringeit
