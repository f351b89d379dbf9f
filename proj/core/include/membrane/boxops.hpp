#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "membrane/lattice.hpp"

namespace membrane {

// Discrete Laplacian Delta f(x) = (1/2d) sum_{y~x} f(y) - f(x) with f == 0
// outside `win`. out and in are indexed by win.
void apply_laplacian_window(const Window& win, const std::vector<double>& in,
                            std::vector<double>& out);

// The double-layer Dirichlet bilaplacian on box B(0,N): A = Delta^2 with
// zero values imposed on the two exterior layers. Computed as two padded
// Laplacian applications through the N+1 window (Delta of a U-supported
// function vanishes beyond U+1, so the composition is exact).
class DirichletBilaplacian {
public:
    explicit DirichletBilaplacian(const Window& box);
    DirichletBilaplacian(int d, int radius) : DirichletBilaplacian(Window::box(d, radius)) {}
    const Window& box() const { return box_; }
    size_t size() const { return box_.size(); }
    void apply(const std::vector<double>& in, std::vector<double>& out) const;

private:
    Window box_, grown_;
    std::vector<size_t> embed_;  // box index -> grown index
    mutable std::vector<double> pad_, lap_;
};

struct CgResult {
    int iterations = 0;
    double residual_norm = 0.0;  // final ||b - A x||_2
    bool converged = false;
};

using LinearOp = std::function<void(const std::vector<double>&, std::vector<double>&)>;

// Plain conjugate gradients on an SPD operator; runs to ||r|| <= tol * ||b||.
CgResult conjugate_gradient(const LinearOp& A, const std::vector<double>& b, std::vector<double>& x,
                            double rel_tol, int max_iters);

// Preconditioned CG (M_inv must be SPD).
CgResult conjugate_gradient(const LinearOp& A, const LinearOp& M_inv, const std::vector<double>& b,
                            std::vector<double>& x, double rel_tol, int max_iters);

// Exact inverse of the *single-layer* Dirichlet Laplacian squared on a box,
// via DST-I (the sine basis diagonalizes that operator). Spectrally close to
// the double-layer bilaplacian, so it serves as its preconditioner.
class DstBilaplacianInverse {
public:
    explicit DstBilaplacianInverse(const Window& box);
    ~DstBilaplacianInverse();
    DstBilaplacianInverse(const DstBilaplacianInverse&) = delete;
    DstBilaplacianInverse& operator=(const DstBilaplacianInverse&) = delete;
    void apply(const std::vector<double>& in, std::vector<double>& out) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Solves the double-layer Dirichlet bilaplacian system A x = b on B(0,N)
// with DST-preconditioned CG. rel_tol is on the 2-norm residual.
CgResult solve_dirichlet_bilaplacian(const DirichletBilaplacian& A, const DstBilaplacianInverse& M,
                                     const std::vector<double>& b, std::vector<double>& x,
                                     double rel_tol, int max_iters);

}  // namespace membrane
