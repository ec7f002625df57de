#pragma once

// Test-only reference computations, independent of the library code paths
// they check.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace leocov::oracle {

/// Adaptive Gauss-Kronrod (61 points, recursive bisection).
template <class F>
double integrate(F f, double a, double b, double rel_tol = 1e-13)
{
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 25, rel_tol);
}

struct McResult {
    double mean;
    double standard_error;
};

/// Pr(SIR > theta) for fixed distances by drawing every fading gain,
/// serving link included, and counting successes. Unit-mean Gamma(M) powers.
inline McResult coverage_by_indicator(double theta, double r1, std::span<const double> interferers,
                                      double alpha, int m, std::size_t draws, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::gamma_distribution<double> power(m, 1.0 / m);
    std::size_t hits = 0;
    const double serving_loss = std::pow(r1, -alpha);
    for (std::size_t d = 0; d < draws; ++d) {
        double interference = 0.0;
        for (double r : interferers) interference += power(gen) * std::pow(r, -alpha);
        const double signal = power(gen) * serving_loss;
        hits += signal > theta * interference;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(draws);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(draws))};
}

}  // namespace leocov::oracle
