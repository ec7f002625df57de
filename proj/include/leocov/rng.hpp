#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace leocov {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A stream is identified by (seed, stream id): the 64-bit seed is the key,
/// the stream id fills the upper half of the 128-bit counter and the lower
/// half counts blocks within the stream. Streams with different ids never
/// overlap, so the i-th Monte Carlo realization can be regenerated from
/// (seed, i) alone, whichever thread runs it.
///
/// Satisfies UniformRandomBitGenerator with 32-bit output.
class Philox4x32 {
public:
    using result_type = std::uint32_t;
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    Philox4x32(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          counter_{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)}
    {
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        if (index_ == 4) {
            buffer_ = generate(counter_, key_);
            increment();
            index_ = 0;
        }
        return buffer_[index_++];
    }

    /// Ten-round Philox bijection of one counter block under `key`.
    static Block generate(Block counter, Key key)
    {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t{kMul0} * counter[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * counter[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
        }
        return counter;
    }

    std::uint64_t seed() const { return std::uint64_t{key_[1]} << 32 | key_[0]; }
    std::uint64_t stream() const { return std::uint64_t{counter_[3]} << 32 | counter_[2]; }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    void increment()
    {
        if (++counter_[0] == 0) ++counter_[1];
    }

    Key key_;
    Block counter_;
    Block buffer_{};
    int index_ = 4;
};

}  // namespace leocov
