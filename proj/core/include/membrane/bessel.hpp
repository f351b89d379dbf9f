#pragma once

#include <vector>

namespace membrane {

// Exponentially scaled modified Bessel function e^{-z} I_k(z) for integer
// order k (I_{-k} = I_k) and z >= 0, to ~1e-13 relative accuracy. The scaled
// form is what the Green-function integrands need: the factor e^{-t} of the
// integrand regroups as the product of per-coordinate scaled factors
// e^{-t/d} I_{x_i}(t/d), each in (0, 1], so products never overflow even for
// t ~ 1e18.
double bessel_i_scaled(int k, double z);

// All orders 0..k_max at once (one Miller recurrence sweep); the integrands
// evaluate whole products at a common argument.
std::vector<double> bessel_i_scaled_orders(double z, int k_max);

// Certified pointwise bound: e^{-z} I_k(z) <= min(1, sqrt(pi/(8z))) for all
// integer k and z > 0 (from the cosine integral representation and
// 1 - cos(phi) >= 2 phi^2 / pi^2). Used for truncation tails.
double bessel_i_scaled_envelope(double z);

}  // namespace membrane
