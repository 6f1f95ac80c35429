#include "levyaction/rng.hpp"

#include <cmath>
#include <numbers>

namespace levyaction {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    std::uint64_t x = seed ^ (0xD1B54A32D192ED03ull * (stream_id + 1));
    s_[0] = splitmix64(x);
    s_[1] = splitmix64(x);
    s_[2] = splitmix64(x);
    s_[3] = splitmix64(x);
    // all-zero state is invalid for xoshiro
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

RngStream RngStream::substream(std::uint64_t k) const {
    std::uint64_t x = stream_id_ ^ (k + 0x9E3779B97F4A7C15ull);
    std::uint64_t child = splitmix64(x);
    return RngStream(seed_, child);
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
    // 1-u1 keeps the log argument in (0,1]
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t RngStream::poisson(double lambda) {
    if (!(lambda > 0.0)) return 0;
    if (lambda > 30.0) {
        // additivity: Poisson(a+b) = Poisson(a) + Poisson(b)
        const std::uint64_t parts = static_cast<std::uint64_t>(lambda / 30.0) + 1;
        const double each = lambda / static_cast<double>(parts);
        std::uint64_t total = 0;
        for (std::uint64_t i = 0; i < parts; ++i) total += poisson(each);
        return total;
    }
    const double limit = std::exp(-lambda);
    std::uint64_t k = 0;
    double prod = uniform();
    while (prod > limit) {
        ++k;
        prod *= uniform();
    }
    return k;
}

}  // namespace levyaction
