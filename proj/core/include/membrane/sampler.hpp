#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "membrane/boxops.hpp"
#include "membrane/green_table.hpp"
#include "membrane/lattice.hpp"

namespace membrane {

struct GeometrySpec {
    enum class Kind { dirichlet_box, torus, exact_window };
    Kind kind = Kind::dirichlet_box;
    int d = 5;
    int param = 1;  // N (box radius), L (torus side), or window radius

    void validate() const;
    Window window() const;
    std::string describe() const;
};

// One realization of the membrane model with full seed provenance; rerunning
// any (seed, stream_id) reproduces the bytes exactly.
struct FieldSample {
    GeometrySpec geometry;
    Window window;  // domain of `values` (a sub-box for subset-sampled tori)
    std::vector<double> values;
    uint64_t seed = 0;
    uint64_t stream_id = 0;

    double at(const LatticeVector& x) const { return values[window.index(x)]; }
};

// Exact samples with covariance G_N on B(0,N). Writing the precision as
// A = B^T B with B the free Laplacian applied to zero-extended box functions,
// phi = A^{-1} B^T zeta has covariance A^{-1} B^T B A^{-1} = G_N exactly, so a
// sample is one white-noise field on the grown box, one Laplacian apply, and
// one DST-preconditioned CG solve (about ten iterations).
class DirichletBoxSampler {
public:
    DirichletBoxSampler(int d, int N, uint64_t seed, double solve_tol = 1e-10);
    FieldSample sample(uint64_t stream_id) const;
    const GeometrySpec& geometry() const { return geom_; }

private:
    GeometrySpec geom_;
    Window box_, grown_;
    uint64_t seed_;
    double solve_tol_;
    std::unique_ptr<DirichletBilaplacian> op_;
    std::unique_ptr<DstBilaplacianInverse> pre_;
    mutable std::mutex mu_;
};

// Real Gaussian field on (Z/LZ)^d with spectral density lambda(theta)^{-2},
// zero mode removed (fields have exact zero spatial mean). Spectral noise is
// Hermitian-paired so fields are exactly real, and every mode's draw is a
// pure function of (seed, stream, mode rank).
class TorusSampler {
public:
    TorusSampler(int d, int L, uint64_t seed);
    ~TorusSampler();
    TorusSampler(const TorusSampler&) = delete;
    TorusSampler& operator=(const TorusSampler&) = delete;

    FieldSample sample(uint64_t stream_id) const;
    const GeometrySpec& geometry() const { return geom_; }

    // Exact covariance: L^{-d} sum_{theta != 0} lambda^{-2} cos(theta . delta).
    double covariance(const LatticeVector& delta) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    GeometrySpec geom_;
};

// Same law as TorusSampler restricted to a box window, synthesized by
// truncated axis-by-axis inverse transforms; used where only two distant
// boxes of a large torus are observed.
class TorusSubsetSampler {
public:
    TorusSubsetSampler(LatticeVector sides, Window out, uint64_t seed);  // anisotropic torus
    TorusSubsetSampler(int d, int L, Window out, uint64_t seed);
    FieldSample sample(uint64_t stream_id) const;
    const LatticeVector& sides() const { return sides_; }

private:
    LatticeVector sides_;
    Window out_;
    uint64_t seed_;
    std::vector<double> sqrt_s_;
    std::vector<std::vector<std::complex<double>>> phases_;  // per axis: [theta][t]
    mutable std::vector<std::complex<double>> work_, next_;  // reused across samples
    mutable std::mutex mu_;
};

// Samples with covariance exactly G(x - y) on B(0,R) via dense (in-place)
// factorization of the Green Gram matrix.
class ExactWindowSampler {
public:
    ExactWindowSampler(int d, int radius, uint64_t seed, double quad_tol = 1e-8);
    FieldSample sample(uint64_t stream_id) const;
    // Up to `count` streams starting at stream0, generated as one blocked
    // triangular multiply (identical values to one-at-a-time generation).
    std::vector<FieldSample> sample_block(uint64_t stream0, int count) const;
    bool jitter_applied() const { return jitter_applied_; }
    const GeometrySpec& geometry() const { return geom_; }

private:
    Eigen::MatrixXd gram_;  // holds L after in-place factorization
    GeometrySpec geom_;
    Window box_;
    uint64_t seed_;
    bool jitter_applied_ = false;
};

// phi = xi + psi with xi = E[phi | F_{U^c}] (discrete biharmonic in U, equal
// to phi outside) and psi independent of F_{U^c}, distributed as the
// Dirichlet model on U.
struct ConditionalSplit {
    std::vector<double> xi;   // on the sample window
    std::vector<double> psi;  // on the sample window; == 0 off U
    Window region;            // U
    double stencil_residual = 0.0;
    int iterations = 0;
};

// U must sit inside the sample's window with a two-layer margin (the model
// is Markov of range 2, so E[phi | F_{U^c}] only reads the double layer).
// For torus samples the margin may wrap.
ConditionalSplit conditional_split(const FieldSample& sample, const Window& U,
                                   double residual_tol = 1e-9);

// Centered window view B(0,radius) of a full-torus sample (reads wrap mod L);
// the standard embedding for annulus-crossing observables, valid while
// 2*radius+1 <= L.
FieldSample torus_window_view(const FieldSample& torus_sample, int radius);

// Raw sample dump ("MPFS"), debug path of the CLI.
void write_field_dump(const FieldSample& sample, const std::string& path);
FieldSample read_field_dump(const std::string& path);

}  // namespace membrane
