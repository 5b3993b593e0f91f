#pragma once

#include <array>
#include <cstdint>

namespace beamdisp::mc {

/// Philox 4x32-10 counter-based block cipher (Salmon et al., "Parallel random
/// numbers: as easy as 1, 2, 3").  Passes BigCrush; chosen here because a
/// keyed counter gives every trial its own reproducible stream regardless of
/// execution order.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// One deterministic random stream, keyed by (seed, stream_id).  The 128-bit
/// Philox counter holds the draw-block index in its low half and stream_id in
/// its high half, so streams never overlap.
class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint64_t stream_id)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_id_(stream_id) {}

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (pairs cached).
    double normal();

    /// Poisson draw: exponential-gap summation for small means, transformed
    /// rejection (PTRS) otherwise.
    std::uint64_t poisson(double mean);

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int avail_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace beamdisp::mc
