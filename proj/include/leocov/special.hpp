#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace leocov::special {

/// Chebyshev-node quadrature on a finite interval.
///
/// Nodes are cos((2k-1) pi / (2 order)), k = 1..order, and each weight carries
/// the sqrt(1 - node^2) factor together with pi / order, so
///
///     integral_a^b g(r) dr ~= (b - a) / 2 * sum_k weight_k * g(map(a, b, k)).
///
/// The rule converges like order^-2 for integrands that do not vanish at the
/// interval ends; it is exact for g(t) = p(t) sqrt(1 - t^2) with p a
/// polynomial of degree <= 2 order - 3.
class ChebyshevRule {
public:
    explicit ChebyshevRule(int order);

    int order() const { return order_; }
    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }

    double map(double a, double b, std::size_t k) const
    {
        return 0.5 * (b - a) * nodes_[k] + 0.5 * (b + a);
    }

    template <class F>
    double integrate(double a, double b, F&& g) const
    {
        double acc = 0.0;
        for (std::size_t k = 0; k < nodes_.size(); ++k) {
            acc += weights_[k] * g(map(a, b, k));
        }
        return 0.5 * (b - a) * acc;
    }

private:
    int order_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

ChebyshevRule chebyshev_rule(int order);

/// Q(m, x) = sum_{i<m} x^i e^-x / i!, the upper regularized incomplete gamma
/// function for integer shape. Pr(G > x) for G ~ Gamma(m, 1).
double regularized_upper_gamma(int m, double x);

/// P(m, x) = 1 - Q(m, x), evaluated from its own power series for x < m + 1.
double regularized_lower_gamma(int m, double x);

/// I_x(a, b) by Lentz's continued fraction. Throws NumericalError if the
/// fraction fails to converge within the iteration cap.
double regularized_incomplete_beta(double x, double a, double b);

/// All vectors of `parts` nonnegative integers summing to b, in reverse
/// lexicographic order: (b,0,..,0) first, (0,..,0,b) last.
std::vector<std::vector<int>> compositions(int b, int parts);

/// b! / prod(parts_i!). Exact integer arithmetic up to b = 20, log-gamma above.
double multinomial(int b, std::span<const int> parts);

double binomial(int n, int k);

double factorial(int n);

}  // namespace leocov::special
