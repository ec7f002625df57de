#pragma once

// Data-parallel inner loops shared by the analytic engine and the simulator.
//
// Every kernel has a scalar reference and, where the target supports it, an
// AVX2+FMA variant. The active backend is chosen once at first use from the
// CPU features (override with LEOCOV_KERNELS=scalar|avx2|auto) and can be
// switched explicitly with set_backend(). Variants agree with the scalar
// reference to rounding; reductions are reassociated, so results are not
// bit-identical across backends.

#include <span>
#include <string_view>
#include <vector>

namespace leocov::kernels {

enum class Backend { scalar, avx2 };

/// Function table implemented by each backend.
struct KernelTable {
    Backend backend;

    /// prod_i (1 + scale * ratios_i)^-power, power >= 0.
    double (*interference_product)(std::span<const double> ratios, double scale, int power);

    /// sum_n weights_n * (1 - prod_m (1 + scales_m * ratios_n)^-exponents_m).
    /// `scales` and `exponents` have equal length; exponents are >= 0.
    double (*pgfl_sum)(std::span<const double> weights, std::span<const double> ratios,
                       std::span<const double> scales, std::span<const int> exponents);

    /// sum_i a_i * b_i over equal-length spans.
    double (*dot)(std::span<const double> a, std::span<const double> b);
};

const KernelTable& scalar_table();

/// nullptr when the AVX2 variant was not compiled in.
const KernelTable* avx2_table();

bool backend_supported(Backend backend);

/// Throws InvalidArgument if the backend is not supported on this machine.
void set_backend(Backend backend);

Backend active_backend();

std::string_view backend_name(Backend backend);

/// Parses "scalar", "avx2"; throws InvalidArgument otherwise.
Backend parse_backend(std::string_view name);

/// Selects the best supported backend.
Backend best_backend();

const KernelTable& active();

inline double interference_product(std::span<const double> ratios, double scale, int power)
{
    return active().interference_product(ratios, scale, power);
}

inline double pgfl_sum(std::span<const double> weights, std::span<const double> ratios,
                       std::span<const double> scales, std::span<const int> exponents)
{
    return active().pgfl_sum(weights, ratios, scales, exponents);
}

inline double dot(std::span<const double> a, std::span<const double> b)
{
    return active().dot(a, b);
}

}  // namespace leocov::kernels
