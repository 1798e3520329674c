#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace regen {

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                         std::array<std::uint32_t, 2> key) noexcept;

/// splitmix64 finaliser; used to derive purpose-specific seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for an independent family of streams, e.g. one per sweep horizon.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept;

/// Counter-based random stream.
///
/// The key is the 64-bit seed and the upper half of the 128-bit counter is the
/// stream index, so stream k is reachable in O(1) and distinct (seed, index)
/// pairs never share a counter block. Streams are cheap values; copy one to
/// fork an identical sequence, never share one across threads.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_index) noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_index() const noexcept { return index_; }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() noexcept;
    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) noexcept;
    double exponential() noexcept;
    double normal() noexcept;
    /// Gamma(shape, 1) by Marsaglia-Tsang.
    double gamma(double shape) noexcept;

private:
    void refill() noexcept;

    std::uint64_t seed_;
    std::uint64_t index_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    unsigned used_ = 2;
    bool has_spare_normal_ = false;
    double spare_normal_ = 0.0;
};

inline RngStream spawn_stream(std::uint64_t seed, std::uint64_t index) noexcept {
    return RngStream(seed, index);
}

}  // namespace regen
