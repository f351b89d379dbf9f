#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "membrane/lattice.hpp"

namespace membrane {

// Fourier symbols of the Green operators restricted to K = Z^3 x {0}^{d-3}.
// The generating identity sum_k I_k(z) e^{ik theta} = e^{z cos theta} gives
//   ghat_K(theta)  = int_0^inf   e^{-t} e^{(t/d) sum cos theta_i} I_0(t/d)^{d-3} dt,
//   Ghat_K(theta)  = int_0^inf t e^{-t} e^{(t/d) sum cos theta_i} I_0(t/d)^{d-3} dt,
// evaluated in overflow-free scaled form. Requires d >= 8 (summability on K).
double symbol_g_on_K(const std::array<double, 3>& theta, int d, double quad_tol = 1e-8);
double symbol_G_on_K(const std::array<double, 3>& theta, int d, double quad_tol = 1e-8);

// Cross-check route: truncated lattice sum sum_{|x|inf <= R} g((x,0)) cos(theta.x)
// plus a tail bound from the g-decay envelope.
struct LatticeSumCheck {
    double value = 0.0;
    double tail_bound = 0.0;
};
LatticeSumCheck symbol_g_lattice_sum(const std::array<double, 3>& theta, int d, int R,
                                     double quad_tol = 1e-8);

// Symbol sampled on the reduced uniform grid theta_i = 2 pi k / M, k = 0..M/2
// (the symbol is even in each axis), with a certified Lipschitz slack that
// turns grid extrema into bounds on the continuum extrema.
struct SymbolGrid {
    int d = 0;
    int M = 0;
    double quad_tol = 0.0;
    std::vector<double> values;  // (M/2+1)^3, axis-major
    double grid_min = 0.0, grid_max = 0.0;
    double lip_axis = 0.0;  // bound on |d symbol / d theta_i|
    double slack = 0.0;     // 3 * lip_axis * (pi / M)

    double at(int k0, int k1, int k2) const;
    double min_certified() const { return grid_min - slack; }
    double max_certified() const { return grid_max + slack; }
};

SymbolGrid build_symbol_grid_g(int d, int M, double quad_tol = 1e-8);
SymbolGrid build_symbol_grid_G(int d, int M, double quad_tol = 1e-8);

// sigma^2(d) = certified lower bound on inf ghat_K;  rho(G') = certified
// upper bound on sup (ghat_K - sigma^2).
struct Sigma2Result {
    double sigma2 = 0.0;
    double rho_Gprime = 0.0;
    SymbolGrid grid;
};
Sigma2Result sigma2_and_Gprime(int d, int M, double quad_tol = 1e-8);

// rho_s(B) <= (d/(d-3))^2 (G_{d-3}(0) - g_{d-3}(0)^2), Green values from the
// Bessel quadrature in dimension d-3.
double rho_B_bound(int d, double quad_tol = 1e-8);

// Numerical realization of the covariance decomposition G|_K = gamma Id + Phi.
struct DecompositionReport {
    int d = 0;
    double sigma2 = 0.0;
    double gamma = 0.0;  // sigma2^2, bit-exact
    double rho_Gprime = 0.0;
    double rho_B = 0.0;
    double rho_Phi_bound = 0.0;  // 2 sigma2 rho_G' + rho_G'^2 + rho_B
    double d_times_rho_Phi = 0.0;
    // cross-check residuals
    double lazy_identity_residual = 0.0;   // ghat(0) - (d/(d-3)) g_{d-3}(0)
    double bhat0_lower = 0.0;              // Ghat(0) - ghat(0)^2, must be in [0, rho_B]
    double phi_symbol_min = 0.0;           // min over grid of (Ghat - gamma)
    // grid-refinement sandwich (M and 2M runs)
    double grid_min_M = 0.0, slack_M = 0.0, grid_min_2M = 0.0, slack_2M = 0.0;
    bool valid = false;
    std::string violated_clause;
};

DecompositionReport decompose(int d, int M = 32, double quad_tol = 1e-8);

// Exploratory slab percolation: exact-window samples on
// [-W,W]^2 x [0,L0] x {0}^{d-3}, coupled crossing frequencies (face-to-face
// along the first axis) over the sorted h grid.
struct SlabCrossingRow {
    double h = 0.0;
    uint64_t n_samples = 0, n_success = 0;
    double p_hat = 0.0, ci_lo = 0.0, ci_hi = 1.0;
};
std::vector<SlabCrossingRow> slab_experiment(int d, int L0, int W,
                                             const std::vector<double>& h_grid,
                                             uint64_t n_samples, uint64_t seed);

}  // namespace membrane
