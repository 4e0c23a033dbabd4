#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace testsupport {

// Independent root oracle: eigenvalues of the companion matrix of the monic
// normalization, via Eigen's complex Schur decomposition.
inline std::vector<std::complex<double>> companion_roots(
    const std::vector<std::complex<double>>& coeffs) {
    const Eigen::Index n = static_cast<Eigen::Index>(coeffs.size()) - 1;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) m(i + 1, i) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i)
        m(i, n - 1) = -coeffs[static_cast<std::size_t>(i)] / coeffs.back();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
    std::vector<std::complex<double>> roots(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    return roots;
}

// Greedy nearest-neighbour pairing distance; adequate for well-separated
// spectra where it coincides with the optimal assignment.
inline double max_matched_distance(std::vector<std::complex<double>> a,
                                   std::vector<std::complex<double>> b) {
    double worst = 0.0;
    for (const std::complex<double>& x : a) {
        std::size_t best = 0;
        double best_distance = std::abs(b[0] - x);
        for (std::size_t j = 1; j < b.size(); ++j) {
            const double d = std::abs(b[j] - x);
            if (d < best_distance) {
                best_distance = d;
                best = j;
            }
        }
        worst = std::max(worst, best_distance);
        b.erase(b.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return worst;
}

}  // namespace testsupport
