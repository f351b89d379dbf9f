#pragma once

#include <cstddef>
#include <cstdint>

namespace membrane {

// Fills out[0..2*n_pairs) with standard Gaussians; pair (out[2i], out[2i+1])
// is the Box-Muller image of the Philox block (seed, stream,
// first_counter + i). Lives in its own translation unit so the transcendental
// loop can be compiled with relaxed math (hot path of the spectral samplers).
void gaussian_blocks(uint64_t seed, uint64_t stream, uint64_t first_counter, size_t n_pairs,
                     double* out);

}  // namespace membrane
