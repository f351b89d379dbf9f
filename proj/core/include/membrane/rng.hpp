#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace membrane {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11 constants).
// Every random number is a pure function of (seed, stream_id, index), so
// sample streams are reproducible independently of thread scheduling, and
// distinct stream_ids give statistically independent streams.
struct Philox4x32 {
    static constexpr uint32_t M0 = 0xD2511F53u;
    static constexpr uint32_t M1 = 0xCD9E8D57u;
    static constexpr uint32_t W0 = 0x9E3779B9u;
    static constexpr uint32_t W1 = 0xBB67AE85u;

    static std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const uint64_t p0 = uint64_t(M0) * ctr[0];
            const uint64_t p1 = uint64_t(M1) * ctr[2];
            ctr = {uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], uint32_t(p1),
                   uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], uint32_t(p0)};
            key[0] += W0;
            key[1] += W1;
        }
        return ctr;
    }
};

// One 256-bit Philox block addressed by (seed | stream | index).
inline std::array<uint32_t, 4> philox_block(uint64_t seed, uint64_t stream, uint64_t index) {
    const std::array<uint32_t, 4> ctr = {uint32_t(index), uint32_t(index >> 32), uint32_t(stream),
                                         uint32_t(stream >> 32)};
    const std::array<uint32_t, 2> key = {uint32_t(seed), uint32_t(seed >> 32)};
    return Philox4x32::block(ctr, key);
}

// Uniform in (0,1): 53 random bits, offset half a ulp away from 0.
inline double u01_from_bits(uint32_t hi, uint32_t lo) {
    const uint64_t bits = (uint64_t(hi) << 32) | lo;
    return double(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

// Two independent standard Gaussians per counter (Box-Muller; exact map of
// the uniform block, no rejection state).
inline void gaussian_pair(uint64_t seed, uint64_t stream, uint64_t index, double& g0, double& g1) {
    const auto b = philox_block(seed, stream, index);
    const double u1 = u01_from_bits(b[0], b[1]);
    const double u2 = u01_from_bits(b[2], b[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    g0 = r * std::cos(6.283185307179586476925286766559 * u2);
    g1 = r * std::sin(6.283185307179586476925286766559 * u2);
}

inline double uniform01(uint64_t seed, uint64_t stream, uint64_t index) {
    const auto b = philox_block(seed, stream, index);
    return u01_from_bits(b[0], b[1]);
}

// Sequential convenience view over one (seed, stream) lane.
class RngStream {
public:
    RngStream(uint64_t seed, uint64_t stream) : seed_(seed), stream_(stream) {}

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double g0, g1;
        gaussian_pair(seed_, stream_, index_++, g0, g1);
        spare_ = g1;
        have_spare_ = true;
        return g0;
    }

    double uniform() { return uniform01(seed_, stream_, index_++); }

    // Uniform integer in [0, n).
    uint64_t below(uint64_t n) {
        const auto b = philox_block(seed_, stream_, index_++);
        const uint64_t r = (uint64_t(b[0]) << 32) | b[1];
        return r % n;
    }

private:
    uint64_t seed_, stream_;
    uint64_t index_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace membrane
