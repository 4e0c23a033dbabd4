#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "ringeit/response.hpp"
#include "support/paper_config.hpp"

using namespace ringeit;
using testsupport::equal_frequency_params;
using testsupport::paper_params;

namespace {
const double omega_m = testsupport::paper_omega_m();
}

TEST_CASE("pump off reduces to the bare cavity Lorentzian") {
    const SystemParams p = paper_params();
    const DriveState off = pump_steady_state(p, 0.0);
    const ResponseEvaluator evaluator(p, off);
    for (double x = 0.5; x <= 1.5 + 1e-9; x += 0.01) {
        const ResponsePoint point = evaluator.evaluate(x * omega_m);
        const cdouble closed = pump_off_eps_out_plus(p, x * omega_m);
        REQUIRE_THAT(std::abs(point.eps_out_plus - closed),
                     Catch::Matchers::WithinAbs(0.0, 1e-12 * std::abs(closed)));
        REQUIRE(point.stokes_intensity == 0.0);
        REQUIRE(point.eps_out_minus == cdouble(0.0, 0.0));
    }
    // exact resonance: the quadrature reaches the impedance-matched value 2
    REQUIRE_THAT(evaluator.evaluate(p.effective_detuning).nu_p,
                 Catch::Matchers::WithinRel(2.0, 1e-12));
}

TEST_CASE("point values on the driven spectra") {
    const SystemParams p = paper_params();

    SECTION("2 mW") {
        const DriveState d = pump_steady_state(p, 2e-3);
        const ResponseEvaluator evaluator(p, d);
        REQUIRE_THAT(evaluator.evaluate(0.93 * omega_m).nu_p,
                     Catch::Matchers::WithinRel(1.3991682074291189, 1e-10));
        REQUIRE_THAT(evaluator.evaluate(0.93 * omega_m).stokes_intensity,
                     Catch::Matchers::WithinRel(0.010641235490046647, 1e-10));
        REQUIRE_THAT(evaluator.evaluate(1.045 * omega_m).nu_p,
                     Catch::Matchers::WithinRel(1.8346706915865134, 1e-10));
        REQUIRE_THAT(evaluator.evaluate(1.045 * omega_m).stokes_intensity,
                     Catch::Matchers::WithinRel(0.0015188719613903146, 1e-10));
        REQUIRE_THAT(evaluator.evaluate(1.0 * omega_m).nu_p,
                     Catch::Matchers::WithinRel(1.9993632264927967, 1e-10));
        REQUIRE_THAT(evaluator.evaluate(1.0 * omega_m).stokes_intensity,
                     Catch::Matchers::WithinRel(1.7096268775229037e-5, 1e-10));
    }
    SECTION("15 mW") {
        const DriveState d = pump_steady_state(p, 15e-3);
        const ResponseEvaluator evaluator(p, d);
        REQUIRE_THAT(evaluator.evaluate(0.7 * omega_m).nu_p,
                     Catch::Matchers::WithinRel(2.0430621111855376, 1e-10));
        REQUIRE_THAT(evaluator.evaluate(0.7 * omega_m).stokes_intensity,
                     Catch::Matchers::WithinRel(0.16236202483764041, 1e-10));
        REQUIRE_THAT(evaluator.evaluate(1.0 * omega_m).nu_p,
                     Catch::Matchers::WithinRel(1.9762770941936145, 1e-10));
        REQUIRE_THAT(evaluator.evaluate(1.0 * omega_m).stokes_intensity,
                     Catch::Matchers::WithinRel(0.00092533625417044553, 1e-10));
    }
    SECTION("equal frequencies keep the Stokes line bright on resonance") {
        const SystemParams eq = equal_frequency_params();
        REQUIRE_THAT(ResponseEvaluator(eq, pump_steady_state(eq, 2e-3))
                         .evaluate(omega_m)
                         .stokes_intensity,
                     Catch::Matchers::WithinRel(0.08362424142693184, 1e-10));
        REQUIRE_THAT(ResponseEvaluator(eq, pump_steady_state(eq, 15e-3))
                         .evaluate(omega_m)
                         .stokes_intensity,
                     Catch::Matchers::WithinRel(0.0838231798609523, 1e-10));
    }
}

TEST_CASE("derived fields are consistent") {
    const SystemParams p = paper_params();
    const DriveState d = pump_steady_state(p, 2e-3);
    const ResponseEvaluator evaluator(p, d);
    for (double x : {0.6, 0.9, 1.0, 1.1, 1.4}) {
        const ResponsePoint point = evaluator.evaluate(x * omega_m);
        REQUIRE(point.nu_p == point.eps_out_plus.real());
        REQUIRE(point.stokes_intensity == std::norm(point.eps_out_minus));
        REQUIRE_THAT(std::abs(point.eps_out_plus - 2.0 * p.kappa * point.c_plus),
                     Catch::Matchers::WithinAbs(0.0, 1e-14 * std::abs(point.eps_out_plus)));
        REQUIRE_THAT(std::abs(point.eps_out_minus - 2.0 * p.kappa * point.c_minus),
                     Catch::Matchers::WithinAbs(0.0, 1e-14 * std::abs(point.eps_out_minus) + 1e-30));
    }
}

TEST_CASE("stokes response has a deep null between the mechanical lines") {
    // equal masses make G1^2 omega_1 = G2^2 omega_2, so the numerator's real
    // part crosses zero at the rms mechanical frequency; an imaginary residue
    // of order gamma survives, so the intensity dips to ~(gamma/omega)^2 of
    // the maximum rather than to zero
    const SystemParams p = paper_params();
    const DriveState d = pump_steady_state(p, 15e-3);
    const ResponseEvaluator evaluator(p, d);
    const double null_delta =
        std::sqrt(0.5 * (p.omega_1 * p.omega_1 + p.omega_2 * p.omega_2));

    const double a1 = d.G1 * d.G1 * p.omega_1;
    const double a2 = d.G2 * d.G2 * p.omega_2;
    const double real_part = a1 * (p.omega_2 * p.omega_2 - null_delta * null_delta) +
                             a2 * (p.omega_1 * p.omega_1 - null_delta * null_delta);
    REQUIRE(std::abs(real_part) < 1e-12 * a1 * null_delta * null_delta);

    const double at_null = evaluator.evaluate(null_delta).stokes_intensity;
    REQUIRE(at_null < 1e-6 * 0.18621218413780347);
}

TEST_CASE("weak drive approaches the pump-off limit away from the dips") {
    const SystemParams p = paper_params();
    const DriveState weak = pump_steady_state(p, 1e-15);
    const ResponseEvaluator evaluator(p, weak);
    for (double x : {0.5, 0.7, 0.95, 1.0, 1.05, 1.3}) {
        const cdouble closed = pump_off_eps_out_plus(p, x * omega_m);
        REQUIRE_THAT(std::abs(evaluator.evaluate(x * omega_m).eps_out_plus - closed),
                     Catch::Matchers::WithinAbs(0.0, 1e-6 * std::abs(closed)));
    }
}

TEST_CASE("uniform grid") {
    const auto grid = uniform_grid(0.5, 1.5, 5);
    REQUIRE(grid.size() == 5);
    REQUIRE(grid.front() == 0.5);
    REQUIRE(grid.back() == 1.5);
    REQUIRE_THAT(grid[2], Catch::Matchers::WithinAbs(1.0, 1e-15));
    REQUIRE(uniform_grid(2.0, 3.0, 1) == std::vector<double>{2.0});
    REQUIRE_THROWS_AS(uniform_grid(1.0, 0.0, 5), ValidationError);
    REQUIRE_THROWS_AS(uniform_grid(0.0, 1.0, 0), ValidationError);
}

TEST_CASE("spectrum scan") {
    const SystemParams p = paper_params();
    const DriveState d = pump_steady_state(p, 2e-3);
    std::vector<double> grid;
    for (double x = 0.8; x <= 1.2 + 1e-12; x += 0.05) grid.push_back(x * omega_m);
    const ResponseSpectrum spectrum = scan_spectrum(p, d, grid);
    REQUIRE(spectrum.points.size() == grid.size());
    REQUIRE(spectrum.grid == grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        REQUIRE(spectrum.points[i].delta == grid[i]);

    REQUIRE_THROWS_AS(scan_spectrum(p, d, {}), ValidationError);
    REQUIRE_THROWS_AS(scan_spectrum(p, d, {2.0 * omega_m, omega_m}), ValidationError);
    REQUIRE_THROWS_AS(scan_spectrum(p, d, {omega_m, omega_m}), ValidationError);
}
