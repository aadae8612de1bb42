#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>

namespace fblmimo {

// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3",
// SC'11).  A 10-round bijection of a 128-bit counter under a 64-bit key.
// Counter-based generation gives random access to any draw: trial k of a
// Monte-Carlo run is reproducible regardless of chunking, thread count or
// evaluation order.
struct Philox4x32 {
    struct Block {
        std::uint32_t x0, x1, x2, x3;
    };

    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static Block generate(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                          std::uint32_t c3, std::uint32_t k0, std::uint32_t k1) {
        for (int r = 0; r < 10; ++r) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c0;
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c2;
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            c0 = hi1 ^ c1 ^ k0;
            c1 = lo1;
            c2 = hi0 ^ c3 ^ k1;
            c3 = lo0;
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        return {c0, c1, c2, c3};
    }
};

// Map 64 random bits to (0,1]; the +1 keeps log() finite.
inline double uniform_open(std::uint64_t bits) {
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

// Map 64 random bits to [0,1).
inline double uniform_half_open(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Two independent N(0,1) samples addressed by (seed, draw, index).
/// One Philox block supplies the two uniforms of a Box-Muller pair; the
/// exact-consumption transform (no rejection) is what keeps the counter
/// mapping stable.
inline std::pair<double, double> gaussian_pair(std::uint64_t seed, std::uint64_t draw,
                                               std::uint32_t index) {
    const Philox4x32::Block b = Philox4x32::generate(
        index,
        static_cast<std::uint32_t>(draw), static_cast<std::uint32_t>(draw >> 32),
        0u,
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32));
    const std::uint64_t u = (static_cast<std::uint64_t>(b.x0) << 32) | b.x1;
    const std::uint64_t v = (static_cast<std::uint64_t>(b.x2) << 32) | b.x3;
    const double r = std::sqrt(-2.0 * std::log(uniform_open(u)));
    const double theta = 6.283185307179586476925286766559 * uniform_half_open(v);
    return {r * std::cos(theta), r * std::sin(theta)};
}

/// Circularly-symmetric complex Gaussian CN(0,1): real and imaginary parts
/// i.i.d. N(0, 1/2).
inline std::complex<double> gaussian_complex(std::uint64_t seed, std::uint64_t draw,
                                             std::uint32_t index) {
    const auto [re, im] = gaussian_pair(seed, draw, index);
    return {re * 0.70710678118654752440, im * 0.70710678118654752440};
}

}  // namespace fblmimo
