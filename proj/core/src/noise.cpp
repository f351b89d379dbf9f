#include "membrane/noise.hpp"

#include <cmath>
#include <vector>

#include "membrane/rng.hpp"

namespace membrane {

// Two passes: an integer pass producing the uniforms and a transcendental
// pass the compiler can vectorize through libmvec (this TU builds with
// relaxed math).
void gaussian_blocks(uint64_t seed, uint64_t stream, uint64_t first_counter, size_t n_pairs,
                     double* out) {
    constexpr size_t kBlock = 1024;
    double u1[kBlock], u2[kBlock];
    double r[kBlock], c[kBlock], s[kBlock];
    size_t done = 0;
    while (done < n_pairs) {
        const size_t m = std::min(kBlock, n_pairs - done);
        for (size_t i = 0; i < m; ++i) {
            const auto b = philox_block(seed, stream, first_counter + done + i);
            u1[i] = u01_from_bits(b[0], b[1]);
            u2[i] = u01_from_bits(b[2], b[3]);
        }
        for (size_t i = 0; i < m; ++i) r[i] = std::sqrt(-2.0 * std::log(u1[i]));
        for (size_t i = 0; i < m; ++i) c[i] = std::cos(6.283185307179586476925286766559 * u2[i]);
        for (size_t i = 0; i < m; ++i) s[i] = std::sin(6.283185307179586476925286766559 * u2[i]);
        for (size_t i = 0; i < m; ++i) {
            out[2 * (done + i)] = r[i] * c[i];
            out[2 * (done + i) + 1] = r[i] * s[i];
        }
        done += m;
    }
}

}  // namespace membrane
