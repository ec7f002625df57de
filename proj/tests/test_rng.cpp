#include <doctest.h>

#include <random>
#include <set>

#include "leocov/rng.hpp"

using leocov::Philox4x32;

static_assert(std::uniform_random_bit_generator<Philox4x32>);

TEST_CASE("Philox4x32-10 known-answer vectors")
{
    using B = Philox4x32::Block;
    using K = Philox4x32::Key;
    CHECK(Philox4x32::generate(B{0, 0, 0, 0}, K{0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::generate(B{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
          B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::generate(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
          B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("Philox streams are reproducible and distinct")
{
    Philox4x32 a(42, 7);
    Philox4x32 b(42, 7);
    Philox4x32 c(42, 8);
    Philox4x32 d(43, 7);
    bool differs_c = false;
    bool differs_d = false;
    for (int i = 0; i < 1000; ++i) {
        const auto va = a();
        CHECK(va == b());
        differs_c |= va != c();
        differs_d |= va != d();
    }
    CHECK(differs_c);
    CHECK(differs_d);
    CHECK(a.seed() == 42);
    CHECK(a.stream() == 7);
}

TEST_CASE("Philox output is roughly uniform")
{
    Philox4x32 g(1, 0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = 200000;
    double sum = 0.0;
    int bins[10] = {};
    for (int i = 0; i < n; ++i) {
        const double x = u(g);
        sum += x;
        ++bins[static_cast<int>(x * 10)];
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
    double chi2 = 0.0;
    for (int b : bins) chi2 += (b - n / 10.0) * (b - n / 10.0) / (n / 10.0);
    CHECK(chi2 < 27.9);  // 99.9th percentile of chi-square with 9 dof
}
