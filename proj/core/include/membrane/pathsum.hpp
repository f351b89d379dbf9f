#pragma once

#include <cstdint>

#include "membrane/lattice.hpp"

namespace membrane {

enum class PathWeight { simple, bilaplacian };  // w(n) = 1 or n+1

struct PathsumResult {
    double partial_sum = 0.0;   // sum_{n <= n_max} w(n) P_0[X_n = x], exact up to roundoff
    double tail_bound = 0.0;    // C * sum_{n > n_max} w(n) n^{-d/2}, C empirical (reported)
    double clt_constant = 0.0;  // C = max over computed n of n^{d/2} * (pointwise bound on P_n)
    int n_max = 0;
};

// Exact truncated random-walk representation of g (w = 1) and
// G = sum_n (n+1) P_0[X_n = x] (w = n+1), evaluated by dynamic programming
// over per-coordinate step allocations: conditionally on the multinomial
// split of n steps among the d axes, the walk factorizes into 1-d simple
// walks, and the allocation convolutions keep every intermediate in [0,1].
// The tail bound uses sup_x P_0[X_n = x] <= C n^{-d/2} with C taken as the
// empirical sup over the computed range (P_n(0) for even n, the
// Cauchy-Schwarz bound sqrt(P_{n-1}(0) P_{n+1}(0)) for odd n).
PathsumResult green_oracle_pathsum(const LatticeVector& x, int n_max, PathWeight weight,
                                   uint64_t memory_budget_bytes = uint64_t(2) << 30);

// Precomputes the origin sequence and the CLT constant once, then serves
// many offsets at the same (d, n_max); what the acceptance sweep uses.
class PathsumOracle {
public:
    PathsumOracle(int d, int n_max, uint64_t memory_budget_bytes = uint64_t(2) << 30);

    PathsumResult evaluate(const LatticeVector& x, PathWeight weight) const;
    // P_0[X_n = x] for all n <= n_max.
    std::vector<double> occupation_sequence(const LatticeVector& x) const;
    double clt_constant() const { return clt_constant_; }

private:
    int d_, n_max_;
    uint64_t budget_;
    double clt_constant_;
};

}  // namespace membrane
