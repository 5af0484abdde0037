#pragma once

#include <cstdint>

namespace opsw {

/// Counter-based 64-bit generator.
///
/// The stream for (seed, stream_id) is the SplitMix64 output function applied
/// to `key + c * 0x9E3779B97F4A7C15` for c = 1, 2, ..., where
/// `key = mix(seed ^ mix(stream_id + 0x632BE59BD9B4E019))`. Each draw depends
/// only on (seed, stream_id, c), so streams can be consumed in any order or on
/// any thread and produce identical values on every platform.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream_id)
        : key_(mix(seed ^ mix(stream_id + 0x632BE59BD9B4E019ULL))) {}

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next() noexcept {
        ++counter_;
        return mix(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on [-1, 1); exact in binary64.
    double symmetric() noexcept { return 2.0 * uniform() - 1.0; }

    std::uint64_t below(std::uint64_t bound) noexcept { return bound ? next() % bound : 0; }

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace opsw
