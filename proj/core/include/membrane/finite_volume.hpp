#pragma once

#include <Eigen/Sparse>
#include <memory>

#include "membrane/boxops.hpp"
#include "membrane/green_table.hpp"
#include "membrane/lattice.hpp"

namespace membrane {

// Explicit 25-point stencil of Delta^2 restricted to the box (double-layer
// Dirichlet rows eliminated), as an Eigen sparse SPD matrix.
Eigen::SparseMatrix<double> bilaplacian_matrix(int d, int N);

// Finite-volume Green functions on B(0,N): G_N columns (bilaplacian,
// double-layer Dirichlet) and g_N columns (walk killed on exit). Direct
// sparse factorization for small boxes, DST-preconditioned CG beyond.
class FiniteVolumeBox {
public:
    FiniteVolumeBox(int d, int N);

    int d() const { return d_; }
    int N() const { return N_; }
    const Window& box() const { return box_; }

    // G_N(x, .) over the box; defining-equation residual verified to
    // residual_tol in max norm (NumericError on failure).
    std::vector<double> dirichlet_column(const LatticeVector& x, double residual_tol = 1e-10) const;

    // g_N(x, .) over the box.
    std::vector<double> killed_column(const LatticeVector& x, double residual_tol = 1e-12) const;

    double dirichlet_value(const LatticeVector& x, const LatticeVector& y,
                           double residual_tol = 1e-10) const;

    // bar G_N(x,y) = sum_z g_N(x,z) g_N(z,y); the z-sum is exact over the box
    // (g_N vanishes outside).
    double bar_value(const LatticeVector& x, const LatticeVector& y) const;

    bool uses_direct_solver() const { return llt_ != nullptr; }

private:
    int d_, N_;
    Window box_;
    std::unique_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> llt_;
    std::unique_ptr<DirichletBilaplacian> op_;
    std::unique_ptr<DstBilaplacianInverse> pre_;
};

// Var[xi_x^{B(0,N)}] = G(x,x) - G_N(x,x); nonnegative up to solver tolerance.
double variance_xi(int N, const LatticeVector& x, int d, double quad_tol = 1e-8);

// Probe-column tables (full y-columns for each probe x), per the table
// storage contract.
GreenTable green_dirichlet_GN(int N, int d, const std::vector<LatticeVector>& probes);
GreenTable killed_green_gN(int N, int d, const std::vector<LatticeVector>& probes);
GreenTable bar_GN(int N, int d, const std::vector<LatticeVector>& probes);

// Number of unknowns below which the direct sparse factorization is used.
size_t direct_solver_cap();

}  // namespace membrane
