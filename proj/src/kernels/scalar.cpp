#include <cstddef>

#include "kernels_internal.hpp"

namespace leocov::kernels {

namespace {

double scalar_interference_product(std::span<const double> ratios, double scale, int power)
{
    double prod = 1.0;
    for (double t : ratios) prod *= 1.0 / (1.0 + scale * t);
    return detail::ipow(prod, power);
}

double scalar_pgfl_sum(std::span<const double> weights, std::span<const double> ratios,
                       std::span<const double> scales, std::span<const int> exponents)
{
    double acc = 0.0;
    for (std::size_t n = 0; n < ratios.size(); ++n) {
        acc += weights[n] * detail::pgfl_term(ratios[n], scales, exponents);
    }
    return acc;
}

double scalar_dot(std::span<const double> a, std::span<const double> b)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

constexpr KernelTable kScalar{
    Backend::scalar,
    &scalar_interference_product,
    &scalar_pgfl_sum,
    &scalar_dot,
};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace leocov::kernels
