#pragma once

#include <cstdint>

namespace levyaction {

// Counter-based random stream: the state is derived from (seed, stream_id) alone,
// so identical ids reproduce identical samples no matter how work is split
// across workers. The generator is xoshiro256++ seeded through splitmix64;
// Gaussian and Poisson draws are implemented here rather than through
// std::<distributions> so the byte stream is pinned by this file.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    // Child stream with a deterministic id; independent of draws made so far.
    RngStream substream(std::uint64_t k) const;

    std::uint64_t next_u64();

    // Uniform on [0,1) with 53 random bits.
    double uniform();

    // Standard normal via Box-Muller; consumes exactly two uniforms.
    double gaussian();

    // Poisson(lambda); splits large rates into additive blocks.
    std::uint64_t poisson(double lambda);

private:
    std::uint64_t s_[4];
    std::uint64_t seed_;
    std::uint64_t stream_id_;
};

}  // namespace levyaction
