#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ringeit/params.hpp"
#include "support/generators.hpp"
#include "support/paper_config.hpp"

using namespace ringeit;
using testsupport::paper_params;

TEST_CASE("validation rejects unphysical parameters") {
    SystemParams p = paper_params();
    REQUIRE_NOTHROW(validate(p));

    SECTION("non-positive scales") {
        auto broken = p;
        broken.mass_1 = 0.0;
        REQUIRE_THROWS_AS(validate(broken), ValidationError);
        broken = p;
        broken.omega_2 = -1.0;
        REQUIRE_THROWS_AS(validate(broken), ValidationError);
        broken = p;
        broken.kappa = 0.0;
        REQUIRE_THROWS_AS(validate(broken), ValidationError);
        broken = p;
        broken.gamma_1 = -p.gamma_1;
        REQUIRE_THROWS_AS(validate(broken), ValidationError);
        broken = p;
        broken.wavelength = 0.0;
        REQUIRE_THROWS_AS(validate(broken), ValidationError);
    }
    SECTION("pull may be zero but not negative") {
        auto zero_pull = p;
        zero_pull.pull_parameter = 0.0;
        REQUIRE_NOTHROW(validate(zero_pull));
        zero_pull.pull_parameter = -1.0;
        REQUIRE_THROWS_AS(validate(zero_pull), ValidationError);
    }
    SECTION("fold angle range") {
        auto angled = p;
        angled.theta = 0.0;
        REQUIRE_NOTHROW(validate(angled));
        angled.theta = pi;
        REQUIRE_THROWS_AS(validate(angled), ValidationError);
        angled.theta = -0.1;
        REQUIRE_THROWS_AS(validate(angled), ValidationError);
    }
    SECTION("non-finite values") {
        auto nonfinite = p;
        nonfinite.effective_detuning = std::numeric_limits<double>::infinity();
        REQUIRE_THROWS_AS(validate(nonfinite), ValidationError);
    }
}

TEST_CASE("pump frequency from the wavelength") {
    // 2 pi c / 775 nm
    REQUIRE_THAT(pump_frequency(paper_params()),
                 Catch::Matchers::WithinRel(2430518151366262.3, 1e-12));
}

TEST_CASE("reference frequency is the mean mechanical frequency") {
    const SystemParams p = paper_params();
    REQUIRE_THAT(reference_frequency(p),
                 Catch::Matchers::WithinRel(testsupport::paper_omega_m(), 1e-14));
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const SystemParams q = testsupport::random_params(rng);
        REQUIRE_THAT(reference_frequency(q),
                     Catch::Matchers::WithinRel(0.5 * (q.omega_1 + q.omega_2), 1e-15));
    }
}

TEST_CASE("sideband diagnostic") {
    const SidebandDiagnostic d = resolved_sideband(paper_params());
    REQUIRE_THAT(d.ratio, Catch::Matchers::WithinRel(15.0 / 46.62, 1e-12));
    REQUIRE(d.resolved);

    SystemParams bad_cavity = paper_params();
    bad_cavity.kappa = 2.0 * bad_cavity.omega_1;
    REQUIRE_FALSE(resolved_sideband(bad_cavity).resolved);
}

TEST_CASE("single-photon couplings") {
    const Couplings g = derive_couplings(paper_params());
    REQUIRE_THAT(g.g1, Catch::Matchers::WithinRel(9150.2516955111643, 1e-12));
    REQUIRE_THAT(g.g2, Catch::Matchers::WithinRel(10115.983870441286, 1e-12));

    SECTION("scaling in pull, mass, and frequency") {
        SystemParams p = paper_params();
        p.pull_parameter *= 3.0;
        const Couplings scaled = derive_couplings(p);
        REQUIRE_THAT(scaled.g1, Catch::Matchers::WithinRel(3.0 * g.g1, 1e-14));
        p = paper_params();
        p.mass_1 *= 4.0;
        REQUIRE_THAT(derive_couplings(p).g1, Catch::Matchers::WithinRel(0.5 * g.g1, 1e-14));
        p = paper_params();
        p.omega_2 *= 4.0;
        REQUIRE_THAT(derive_couplings(p).g2, Catch::Matchers::WithinRel(0.5 * g.g2, 1e-14));
    }
}

TEST_CASE("pump steady state at the reference powers") {
    const SystemParams p = paper_params();

    SECTION("2 mW") {
        const DriveState d = pump_steady_state(p, 2e-3);
        REQUIRE_THAT(d.epsilon, Catch::Matchers::WithinRel(1212768880747.9061, 1e-12));
        REQUIRE_THAT(std::norm(d.c0), Catch::Matchers::WithinRel(12810500.831671577, 1e-12));
        REQUIRE_THAT(d.G1, Catch::Matchers::WithinRel(28362644.828385212, 1e-12));
        REQUIRE_THAT(d.G2, Catch::Matchers::WithinRel(31356083.652622589, 1e-12));
    }
    SECTION("15 mW") {
        const DriveState d = pump_steady_state(p, 15e-3);
        REQUIRE_THAT(d.epsilon, Catch::Matchers::WithinRel(3321304365129.6046, 1e-12));
        REQUIRE_THAT(std::norm(d.c0), Catch::Matchers::WithinRel(96078756.237536825, 1e-12));
        REQUIRE_THAT(d.G1, Catch::Matchers::WithinRel(77674301.815069107, 1e-12));
        REQUIRE_THAT(d.G2, Catch::Matchers::WithinRel(85872171.657801877, 1e-12));
    }
    SECTION("pump off") {
        const DriveState d = pump_steady_state(p, 0.0);
        REQUIRE(d.epsilon == 0.0);
        REQUIRE(d.c0 == std::complex<double>(0.0, 0.0));
        REQUIRE(d.G1 == 0.0);
        REQUIRE(d.G2 == 0.0);
        REQUIRE(d.Q10 == 0.0);
        REQUIRE(d.Q20 == 0.0);
    }
    SECTION("static displacements push the mirrors apart") {
        const DriveState d = pump_steady_state(p, 2e-3);
        REQUIRE(d.Q10 < 0.0);
        REQUIRE(d.Q20 > 0.0);
        const double c0_abs = std::abs(d.c0);
        REQUIRE_THAT(d.Q10, Catch::Matchers::WithinRel(-(d.G1 / p.omega_1) * c0_abs, 1e-14));
        REQUIRE_THAT(d.Q20, Catch::Matchers::WithinRel(+(d.G2 / p.omega_2) * c0_abs, 1e-14));
    }
    SECTION("negative power rejected") {
        REQUIRE_THROWS_AS(pump_steady_state(p, -1e-3), ValidationError);
    }
    SECTION("intracavity amplitude solves the cavity equation") {
        const DriveState d = pump_steady_state(p, 15e-3);
        const std::complex<double> lhs =
            std::complex<double>(p.kappa, p.effective_detuning) * d.c0;
        REQUIRE_THAT(lhs.real(), Catch::Matchers::WithinRel(d.epsilon, 1e-12));
        REQUIRE_THAT(std::abs(lhs.imag()), Catch::Matchers::WithinAbs(0.0, 1e-3 * d.epsilon));
    }
}

TEST_CASE("cubic solver") {
    SECTION("three distinct real roots") {
        const auto roots = detail::solve_cubic_real(-6.0, 11.0, -6.0);
        REQUIRE(roots.size() == 3);
        REQUIRE_THAT(roots[0], Catch::Matchers::WithinRel(1.0, 1e-12));
        REQUIRE_THAT(roots[1], Catch::Matchers::WithinRel(2.0, 1e-12));
        REQUIRE_THAT(roots[2], Catch::Matchers::WithinRel(3.0, 1e-12));
    }
    SECTION("single real root") {
        const auto roots = detail::solve_cubic_real(0.0, 1.0, 1.0);
        REQUIRE(roots.size() == 1);
        REQUIRE_THAT(roots[0], Catch::Matchers::WithinRel(-0.6823278038280193, 1e-12));
    }
    SECTION("triple root deduplicated") {
        const auto roots = detail::solve_cubic_real(-6.0, 12.0, -8.0);
        REQUIRE(roots.size() == 1);
        REQUIRE_THAT(roots[0], Catch::Matchers::WithinRel(2.0, 1e-6));
    }
    SECTION("random root triples recovered") {
        std::mt19937_64 rng(23);
        for (int i = 0; i < 200; ++i) {
            const double r1 = testsupport::uniform(rng, -10.0, 10.0);
            const double r2 = testsupport::uniform(rng, -10.0, 10.0);
            const double r3 = testsupport::uniform(rng, -10.0, 10.0);
            const auto roots =
                detail::solve_cubic_real(-(r1 + r2 + r3), r1 * r2 + r1 * r3 + r2 * r3,
                                         -r1 * r2 * r3);
            std::vector<double> expected{r1, r2, r3};
            std::sort(expected.begin(), expected.end());
            REQUIRE(!roots.empty());
            for (double x : roots) {
                double nearest = expected[0];
                for (double e : expected)
                    if (std::abs(e - x) < std::abs(nearest - x)) nearest = e;
                REQUIRE_THAT(x, Catch::Matchers::WithinAbs(nearest, 1e-7));
            }
        }
    }
}

TEST_CASE("self-consistent detuning") {
    const SystemParams p = paper_params();

    SECTION("pump off collapses to the bare detuning") {
        const auto solutions = self_consistent_detuning(p, 1.1e8, 0.0);
        REQUIRE(solutions.size() == 1);
        REQUIRE_THAT(solutions[0].detuning, Catch::Matchers::WithinRel(1.1e8, 1e-12));
    }
    SECTION("bare detuning that lands on the mechanical line at 2 mW") {
        const auto solutions = self_consistent_detuning(p, 331072474.57927583, 2e-3);
        bool found = false;
        for (const DetuningSolution& s : solutions)
            if (std::abs(s.detuning - 325468998.91190258) < 1.0) {
                found = true;
                REQUIRE_THAT(s.drive.G1,
                             Catch::Matchers::WithinRel(28362644.828385212, 1e-9));
            }
        REQUIRE(found);
    }
    SECTION("every branch satisfies the fixed-point relation") {
        std::mt19937_64 rng(31);
        for (int i = 0; i < 50; ++i) {
            const SystemParams q = testsupport::random_params(rng);
            const double bare = q.effective_detuning * testsupport::uniform(rng, 0.5, 2.0);
            const double power = testsupport::log_uniform(rng, 1e-6, 5e-2);
            const Couplings g = derive_couplings(q);
            const double eps2 = 2.0 * q.kappa * power / (hbar * pump_frequency(q));
            const double cos_half = std::cos(0.5 * q.theta);
            const double shift =
                (g.g1 * g.g1 / q.omega_1 + g.g2 * g.g2 / q.omega_2) * cos_half * cos_half * eps2;
            const auto solutions = self_consistent_detuning(q, bare, power);
            REQUIRE(!solutions.empty());
            double previous = -std::numeric_limits<double>::infinity();
            for (const DetuningSolution& s : solutions) {
                REQUIRE(s.detuning >= previous);
                previous = s.detuning;
                const double k2 = q.kappa * q.kappa;
                const double residual =
                    s.detuning - bare + shift / (k2 + s.detuning * s.detuning);
                REQUIRE_THAT(residual, Catch::Matchers::WithinAbs(
                                           0.0, 1e-9 * std::max(std::abs(bare), q.kappa)));
            }
        }
    }
}
