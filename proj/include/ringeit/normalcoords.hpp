#pragma once

#include <array>
#include <cmath>
#include <string>

#include "ringeit/errors.hpp"
#include "ringeit/params.hpp"

namespace ringeit {

// Coupling-weighted relative (a) and center-of-mass (s) quadratures.
struct CollectiveCoords {
    double Q_a = 0.0;
    double P_a = 0.0;
    double Q_s = 0.0;
    double P_s = 0.0;
};

// Mixing block [[g1, -g2], [g1, g2]] / sqrt(g1^2 + g2^2). Rows have unit
// norm always; they are mutually orthogonal only when g1 == g2, so the
// inverse is not the transpose in general.
inline std::array<std::array<double, 2>, 2> mixing_matrix(double g1, double g2) {
    const double norm = std::sqrt(g1 * g1 + g2 * g2);
    if (!(norm > 0.0)) throw DegenerateTransformError("both couplings are zero");
    return {{{g1 / norm, -g2 / norm}, {g1 / norm, g2 / norm}}};
}

inline CollectiveCoords to_collective(double q1, double p1, double q2, double p2, double g1,
                                      double g2) {
    const auto m = mixing_matrix(g1, g2);
    return {m[0][0] * q1 + m[0][1] * q2, m[0][0] * p1 + m[0][1] * p2,
            m[1][0] * q1 + m[1][1] * q2, m[1][0] * p1 + m[1][1] * p2};
}

// Inverse transform; requires both couplings nonzero (with g2 = 0 the map
// collapses onto mirror 1 and cannot be inverted).
struct MirrorCoords {
    double Q1 = 0.0, P1 = 0.0, Q2 = 0.0, P2 = 0.0;
};

inline MirrorCoords from_collective(const CollectiveCoords& c, double g1, double g2) {
    if (g1 == 0.0 || g2 == 0.0)
        throw DegenerateTransformError("inverse transform requires both couplings nonzero");
    const double norm = std::sqrt(g1 * g1 + g2 * g2);
    return {norm * (c.Q_a + c.Q_s) / (2.0 * g1), norm * (c.P_a + c.P_s) / (2.0 * g1),
            norm * (c.Q_s - c.Q_a) / (2.0 * g2), norm * (c.P_s - c.P_a) / (2.0 * g2)};
}

enum class CouplingRegime { eit_dip, central_peak };

// Coefficients of the Hamiltonian rewritten in collective coordinates. The
// cross coupling chi between the relative and center-of-mass modes vanishes
// iff omega_1/g1^2 == omega_2/g2^2; with equal masses that reduces to
// omega_1 == omega_2. chi = 0 leaves the center of mass decoupled (pure
// transparency dip); chi != 0 feeds it back and produces the narrow central
// absorption peak.
struct TransformedHamiltonianCoeffs {
    double omega = 0.0;            // collective frequency (rad/s)
    double chi = 0.0;              // relative/center-of-mass cross coupling (rad/s)
    double cavity_coupling = 0.0;  // sqrt(g1^2+g2^2) cos(theta/2) prefactor (rad/s)
    CouplingRegime regime = CouplingRegime::eit_dip;
};

inline TransformedHamiltonianCoeffs transformed_coeffs(const SystemParams& params) {
    const Couplings g = derive_couplings(params);
    if (g.g1 == 0.0 || g.g2 == 0.0)
        throw DegenerateTransformError("transformed coefficients require nonzero couplings");
    const double sum2 = g.g1 * g.g1 + g.g2 * g.g2;
    TransformedHamiltonianCoeffs coeffs;
    coeffs.omega = 0.25 * sum2 * (params.omega_1 / (g.g1 * g.g1) + params.omega_2 / (g.g2 * g.g2));
    coeffs.chi = 0.25 * sum2 * (params.omega_1 / (g.g1 * g.g1) - params.omega_2 / (g.g2 * g.g2));
    coeffs.cavity_coupling = std::sqrt(sum2) * std::cos(0.5 * params.theta);
    coeffs.regime = std::abs(coeffs.chi) <= 1e-12 * std::abs(coeffs.omega)
                        ? CouplingRegime::eit_dip
                        : CouplingRegime::central_peak;
    return coeffs;
}

inline std::string regime_name(CouplingRegime regime) {
    return regime == CouplingRegime::eit_dip ? "EIT-dip" : "central-peak";
}

}  // namespace ringeit
