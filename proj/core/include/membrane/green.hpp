#pragma once

#include "membrane/lattice.hpp"
#include "membrane/quadrature.hpp"

namespace membrane {

struct GreenValue {
    double value = 0.0;
    double error = 0.0;  // certified: panel estimate + analytic truncation tail
};

// Certified bounds on the discarded half-line tail of the Bessel-integral
// representations, from the envelope e^{-z} I_k(z) <= sqrt(pi/(8z)):
//   integrand_g(t) <= (pi d / (8t))^{d/2},  integrand_G(t) = t * integrand_g(t).
double green_tail_bound_simple(int d, double T);
double green_tail_bound_bilaplacian(int d, double T);

// Cutoff T making the certified tail <= tol_share, plus sensible floor.
QuadratureSpec auto_spec_simple(int d, double abs_tol);
QuadratureSpec auto_spec_bilaplacian(int d, double abs_tol);

// g(x) = int_0^inf e^{-t} prod_i I_{x_i}(t/d) dt   (random-walk Green function)
GreenValue green_simple(const LatticeVector& x, const QuadratureSpec& spec);

// G(x) = int_0^inf t e^{-t} prod_i I_{x_i}(t/d) dt (bilaplacian Green function)
GreenValue green_bilaplacian(const LatticeVector& x, const QuadratureSpec& spec);

// Convenience with auto-chosen cutoff.
GreenValue green_simple(const LatticeVector& x, double abs_tol = 1e-8);
GreenValue green_bilaplacian(const LatticeVector& x, double abs_tol = 1e-8);

}  // namespace membrane
