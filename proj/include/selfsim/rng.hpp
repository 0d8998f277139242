#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace selfsim {

/// Philox4x32-10 block function (Salmon et al., Random123).
/// Maps a 128-bit counter and a 64-bit key to 128 random bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// A counter-based random stream addressed by (seed, stream_id).
///
/// The seed is the Philox key; the stream id occupies the upper half of the
/// counter and the draw index the lower half, so any two streams are disjoint
/// blocks of one Philox sequence. Streams are plain values: copying one
/// snapshots its position, and a freshly constructed stream always replays
/// the same sequence.
///
/// Satisfies UniformRandomBitGenerator.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
        : seed_(seed), stream_id_(stream_id) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() noexcept;

    /// Standard normal (Box-Muller; the second variate of each pair is cached).
    double normal() noexcept;

    /// +1 or -1 with equal probability.
    double sign() noexcept { return ((*this)() >> 63) ? 1.0 : -1.0; }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }
    /// Number of 128-bit blocks consumed so far.
    std::uint64_t blocks_used() const noexcept { return block_; }

private:
    void refill() noexcept;

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    unsigned buffered_ = 0;
    std::optional<double> spare_normal_;
};

/// n i.i.d. standard normal variates drawn from a copy of `stream`.
std::vector<double> gaussian_stream(RngStream stream, std::size_t n);

/// One Gamma(shape, rate 1) variate. Marsaglia-Tsang for shape >= 1;
/// for shape < 1 the shape+1 variate is boosted by U^(1/shape) in log space.
/// Throws DomainError for shape <= 0.
double gamma_sample(double shape, RngStream& stream);

} // namespace selfsim
