#include <doctest.h>

#include <cmath>

#include "membrane/green.hpp"
#include "membrane/highdim.hpp"

using namespace membrane;

TEST_SUITE_BEGIN("highdim");

TEST_CASE("symbol symmetry and maximum at zero") {
    const int d = 8;
    const double v = symbol_g_on_K({0.4, 1.1, 2.0}, d, 1e-9);
    CHECK(symbol_g_on_K({1.1, 2.0, 0.4}, d, 1e-9) == doctest::Approx(v).epsilon(1e-10));
    CHECK(symbol_g_on_K({0.4, 1.1, 2 * M_PI - 2.0}, d, 1e-9) == doctest::Approx(v).epsilon(1e-10));
    const double at0 = symbol_g_on_K({0, 0, 0}, d, 1e-9);
    for (double t1 : {0.5, 1.5, 3.0}) CHECK(symbol_g_on_K({t1, 0.7, 0.1}, d, 1e-9) <= at0);
}

TEST_CASE("lazy-walk identity at theta = 0") {
    for (int d : {8, 16}) {
        const double sym0 = symbol_g_on_K({0, 0, 0}, d, 1e-9);
        const double g0 = green_simple(LatticeVector(size_t(d - 3), 0), 1e-9).value;
        CHECK(std::abs(sym0 - double(d) / double(d - 3) * g0) < 1e-6);
    }
}

TEST_CASE("lattice-sum route brackets the quadrature symbol") {
    const int d = 9;
    const std::array<double, 3> theta = {1.2, 0.0, 2.4};
    const double sym = symbol_g_on_K(theta, d, 1e-9);
    const LatticeSumCheck ls = symbol_g_lattice_sum(theta, d, 5, 1e-8);
    CHECK(std::abs(ls.value - sym) <= ls.tail_bound + 1e-6);
}

TEST_CASE("sigma2 and G' bounds") {
    const Sigma2Result r8 = sigma2_and_Gprime(8, 32, 1e-8);
    CHECK(r8.sigma2 >= 0.5);
    CHECK(r8.sigma2 < 1.0);
    CHECK(r8.rho_Gprime > 0.0);
    // G' symbol = symbol - sigma2 >= 0 at every grid point by construction
    CHECK(r8.grid.grid_min >= r8.sigma2);
    // sigma2 increases toward 1 with d
    const Sigma2Result r16 = sigma2_and_Gprime(16, 32, 1e-8);
    CHECK(r16.sigma2 > r8.sigma2);
}

TEST_CASE("rho_B bound: positivity, decay, two-tolerance agreement") {
    const double b8 = rho_B_bound(8, 1e-9);
    CHECK(b8 >= 0.0);
    // independent quadrature settings (different cutoffs and refinement paths)
    CHECK(std::abs(rho_B_bound(8, 3e-10) - b8) < 1e-8);
    double prev = 8.0 * b8;
    for (int d : {12, 16, 24}) {
        const double scaled = d * rho_B_bound(d, 1e-8);
        CHECK(scaled < prev);  // consistent with rho_s(B) <= c/d
        prev = scaled;
    }
}

TEST_CASE("decomposition report at d = 8") {
    const DecompositionReport rep = decompose(8, 32, 1e-8);
    CHECK(rep.valid);
    CHECK(rep.gamma == rep.sigma2 * rep.sigma2);  // bit-exact definition
    CHECK(rep.gamma >= 0.25);
    CHECK(rep.gamma <= 1.0);
    CHECK(rep.rho_Phi_bound ==
          doctest::Approx(2 * rep.sigma2 * rep.rho_Gprime + rep.rho_Gprime * rep.rho_Gprime +
                          rep.rho_B));
    CHECK(std::abs(rep.lazy_identity_residual) < 1e-6);
    CHECK(rep.bhat0_lower >= -1e-6);
    CHECK(rep.bhat0_lower <= rep.rho_B + 1e-6);
    // sandwich: finer grid minimum inside the coarse certified interval
    CHECK(rep.grid_min_2M >= rep.grid_min_M - rep.slack_M - 1e-9);
    CHECK(rep.grid_min_2M <= rep.grid_min_M + 1e-9);
    CHECK(rep.slack_2M < rep.slack_M);
}

TEST_CASE("slab experiment: coupled extremes") {
    const std::vector<double> grid = {-50.0, 8.0};
    const auto rows = slab_experiment(9, 1, 3, grid, 30, 13);
    CHECK(rows[0].p_hat == 1.0);   // h below any field value
    CHECK(rows[1].p_hat == 0.0);   // h far above
    CHECK(rows[0].ci_lo <= rows[0].p_hat);
    CHECK(rows[1].ci_hi >= rows[1].p_hat);
}

TEST_SUITE_END();
