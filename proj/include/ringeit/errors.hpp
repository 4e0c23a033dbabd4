#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ringeit {

// Invalid physical parameters or call preconditions.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// Malformed configuration input; message carries line/field diagnostics.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// |d(delta)| fell below the evaluation floor at a real probe detuning.
struct SingularityError : std::runtime_error {
    SingularityError(const std::string& what_arg, double delta_arg)
        : std::runtime_error(what_arg), delta(delta_arg) {}
    double delta;
};

// An iterative solve failed to converge; carries the best iterate found.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what_arg) : std::runtime_error(what_arg) {}
    NumericalError(const std::string& what_arg,
                   std::vector<std::complex<double>> best,
                   std::vector<double> resid)
        : std::runtime_error(what_arg),
          best_iterate(std::move(best)),
          residuals(std::move(resid)) {}
    std::vector<std::complex<double>> best_iterate;
    std::vector<double> residuals;
};

// A spectral feature stayed under-resolved after maximal grid refinement.
struct ResolutionError : std::runtime_error {
    explicit ResolutionError(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// Adaptive refinement exceeded its point budget.
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// Collective-coordinate transform requested with both couplings zero.
struct DegenerateTransformError : std::runtime_error {
    explicit DegenerateTransformError(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// Process exit codes used by the CLI.
enum ExitCode : int {
    exit_ok = 0,
    exit_config = 2,
    exit_numerical = 3,
    exit_resolution = 4,
};

}  // namespace ringeit
