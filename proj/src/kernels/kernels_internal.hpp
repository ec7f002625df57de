#pragma once

#include <cstddef>
#include <span>

#include "leocov/kernels.hpp"

namespace leocov::kernels::detail {

// Internal linkage: this header is also compiled with -mavx2, and shared
// inline definitions would let the linker pick the AVX-encoded copy.
namespace {

// x^n for n >= 0 by repeated squaring.
inline double ipow(double x, int n)
{
    double result = 1.0;
    while (n > 0) {
        if (n & 1) result *= x;
        x *= x;
        n >>= 1;
    }
    return result;
}

// 1 - prod_m (1 + s_m t)^-e_m for one node; also serves the SIMD tails.
inline double pgfl_term(double t, std::span<const double> scales, std::span<const int> exponents)
{
    double prod = 1.0;
    for (std::size_t m = 0; m < scales.size(); ++m) {
        if (exponents[m] == 0) continue;
        prod *= ipow(1.0 / (1.0 + scales[m] * t), exponents[m]);
    }
    return 1.0 - prod;
}

}  // namespace

}  // namespace leocov::kernels::detail
