// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <cstddef>

#include "kernels_internal.hpp"

namespace leocov::kernels {

namespace {

inline double hsum(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hprod(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d p = _mm_mul_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_mul_sd(p, _mm_unpackhi_pd(p, p)));
}

inline __m256d ipow(__m256d x, int n)
{
    __m256d result = _mm256_set1_pd(1.0);
    while (n > 0) {
        if (n & 1) result = _mm256_mul_pd(result, x);
        x = _mm256_mul_pd(x, x);
        n >>= 1;
    }
    return result;
}

double avx2_interference_product(std::span<const double> ratios, double scale, int power)
{
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d s = _mm256_set1_pd(scale);
    __m256d acc = one;
    std::size_t i = 0;
    const std::size_t n = ratios.size();
    for (; i + 4 <= n; i += 4) {
        const __m256d t = _mm256_loadu_pd(ratios.data() + i);
        acc = _mm256_mul_pd(acc, _mm256_div_pd(one, _mm256_fmadd_pd(s, t, one)));
    }
    double prod = hprod(acc);
    for (; i < n; ++i) prod *= 1.0 / (1.0 + scale * ratios[i]);
    return detail::ipow(prod, power);
}

double avx2_pgfl_sum(std::span<const double> weights, std::span<const double> ratios,
                     std::span<const double> scales, std::span<const int> exponents)
{
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t n = 0;
    const std::size_t count = ratios.size();
    for (; n + 4 <= count; n += 4) {
        const __m256d t = _mm256_loadu_pd(ratios.data() + n);
        __m256d prod = one;
        for (std::size_t m = 0; m < scales.size(); ++m) {
            if (exponents[m] == 0) continue;
            const __m256d s = _mm256_set1_pd(scales[m]);
            const __m256d base = _mm256_div_pd(one, _mm256_fmadd_pd(s, t, one));
            prod = _mm256_mul_pd(prod, ipow(base, exponents[m]));
        }
        const __m256d w = _mm256_loadu_pd(weights.data() + n);
        acc = _mm256_fmadd_pd(w, _mm256_sub_pd(one, prod), acc);
    }
    double total = hsum(acc);
    for (; n < count; ++n) total += weights[n] * detail::pgfl_term(ratios[n], scales, exponents);
    return total;
}

double avx2_dot(std::span<const double> a, std::span<const double> b)
{
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    const std::size_t n = a.size();
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i + 4),
                               _mm256_loadu_pd(b.data() + i + 4), acc1);
    }
    if (i + 4 <= n) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
        i += 4;
    }
    double total = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) total += a[i] * b[i];
    return total;
}

constexpr KernelTable kAvx2{
    Backend::avx2,
    &avx2_interference_product,
    &avx2_pgfl_sum,
    &avx2_dot,
};

}  // namespace

namespace detail {
const KernelTable* avx2_table_impl() { return &kAvx2; }
}  // namespace detail

}  // namespace leocov::kernels
