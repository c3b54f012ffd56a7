#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace ruinlab {

/// Philox4x32-10 block function (Salmon et al., Random123). Maps a 128-bit
/// counter and a 64-bit key to 128 pseudo-random bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Counter-based random stream for one simulated path.
///
/// The key is derived from the root seed, the path index occupies the high
/// half of the Philox counter and the low half counts blocks. Two streams
/// with the same (seed, path index) produce identical sequences no matter
/// which thread drives them or in which order paths are visited.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t path_index) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform on the open interval (0, 1) with 53 bits of resolution.
    double uniform() noexcept;
    /// Standard normal variate (Marsaglia polar method).
    double normal() noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t path_index() const noexcept { return index_; }
    /// Number of 64-bit words consumed so far.
    std::uint64_t counter() const noexcept { return consumed_; }

private:
    void refill() noexcept;

    std::uint64_t seed_;
    std::uint64_t index_;
    std::array<std::uint32_t, 2> key_;
    std::uint64_t block_ = 0;
    std::uint64_t consumed_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int available_ = 0;
};

}  // namespace ruinlab
