#include "leocov/special.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>

#include "leocov/error.hpp"

namespace leocov::special {

namespace {

constexpr int kExactFactorialLimit = 20;

std::uint64_t exact_factorial(int n)
{
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

constexpr double kBetaTolerance = 1e-12;
constexpr int kBetaMaxIterations = 300;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double x, double a, double b)
{
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kBetaMaxIterations; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kBetaTolerance) return h;
    }
    throw NumericalError("incomplete beta continued fraction did not converge (a=" +
                         std::to_string(a) + ", b=" + std::to_string(b) +
                         ", x=" + std::to_string(x) + ")");
}

}  // namespace

ChebyshevRule::ChebyshevRule(int order) : order_(order)
{
    if (order < 1) throw InvalidArgument("Chebyshev rule order must be >= 1");
    nodes_.resize(static_cast<std::size_t>(order));
    weights_.resize(static_cast<std::size_t>(order));
    const double step = std::numbers::pi / order;
    for (int k = 1; k <= order; ++k) {
        // sqrt(1 - cos^2) = sin of the same angle, without the cancellation.
        const double angle = (2 * k - 1) * std::numbers::pi / (2.0 * order);
        nodes_[k - 1] = std::cos(angle);
        weights_[k - 1] = step * std::sin(angle);
    }
    // cos((2k-1)pi/2n) is not bit-symmetric in floating point; mirror the upper half.
    for (int k = 0; k < order / 2; ++k) {
        nodes_[order - 1 - k] = -nodes_[k];
        weights_[order - 1 - k] = weights_[k];
    }
    if (order % 2 == 1) nodes_[order / 2] = 0.0;
}

ChebyshevRule chebyshev_rule(int order) { return ChebyshevRule(order); }

double regularized_upper_gamma(int m, double x)
{
    if (m < 1) throw InvalidArgument("gamma shape must be >= 1");
    if (!(x >= 0.0)) throw InvalidArgument("gamma argument must be >= 0");
    if (x == 0.0) return 1.0;
    // e^-x sum x^i / i!, accumulated term by term.
    double term = std::exp(-x);
    double sum = term;
    for (int i = 1; i < m; ++i) {
        term *= x / i;
        sum += term;
    }
    return std::min(sum, 1.0);
}

double regularized_lower_gamma(int m, double x)
{
    if (m < 1) throw InvalidArgument("gamma shape must be >= 1");
    if (!(x >= 0.0)) throw InvalidArgument("gamma argument must be >= 0");
    if (x == 0.0) return 0.0;
    if (x >= m + 1.0) return 1.0 - regularized_upper_gamma(m, x);
    // x^m e^-x / m! * sum_k x^k / ((m+1)...(m+k))
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 1000; ++k) {
        term *= x / (m + k);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    const double log_prefix = m * std::log(x) - x - std::lgamma(m + 1.0);
    return std::min(sum * std::exp(log_prefix), 1.0);
}

double regularized_incomplete_beta(double x, double a, double b)
{
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("incomplete beta: x must lie in [0, 1]");
    if (!(a > 0.0 && b > 0.0)) throw InvalidArgument("incomplete beta: shape parameters must be > 0");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(x, a, b) / a;
    }
    return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

std::vector<std::vector<int>> compositions(int b, int parts)
{
    if (b < 0) throw InvalidArgument("compositions: b must be >= 0");
    if (parts < 1) throw InvalidArgument("compositions: parts must be >= 1");
    std::vector<std::vector<int>> out;
    std::vector<int> current(static_cast<std::size_t>(parts), 0);
    // Depth-first fill: slot i takes every value from the remaining budget down to 0.
    auto fill = [&](auto&& self, int slot, int remaining) -> void {
        if (slot == parts - 1) {
            current[slot] = remaining;
            out.push_back(current);
            return;
        }
        for (int v = remaining; v >= 0; --v) {
            current[slot] = v;
            self(self, slot + 1, remaining - v);
        }
    };
    fill(fill, 0, b);
    return out;
}

double factorial(int n)
{
    if (n < 0) throw InvalidArgument("factorial of a negative number");
    if (n <= kExactFactorialLimit) return static_cast<double>(exact_factorial(n));
    return std::exp(std::lgamma(n + 1.0));
}

double multinomial(int b, std::span<const int> parts)
{
    if (b < 0) throw InvalidArgument("multinomial: b must be >= 0");
    int total = 0;
    for (int p : parts) {
        if (p < 0) throw InvalidArgument("multinomial: negative part");
        total += p;
    }
    if (total != b) {
        throw InvalidArgument("multinomial: parts sum to " + std::to_string(total) +
                              ", expected " + std::to_string(b));
    }
    if (b <= kExactFactorialLimit) {
        std::uint64_t denom = 1;
        for (int p : parts) denom *= exact_factorial(p);
        return static_cast<double>(exact_factorial(b) / denom);
    }
    double log_value = std::lgamma(b + 1.0);
    for (int p : parts) log_value -= std::lgamma(p + 1.0);
    return std::round(std::exp(log_value));
}

double binomial(int n, int k)
{
    if (k < 0 || k > n) return 0.0;
    const int parts[2] = {k, n - k};
    return multinomial(n, parts);
}

}  // namespace leocov::special
