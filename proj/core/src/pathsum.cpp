#include "membrane/pathsum.hpp"

#include <algorithm>
#include <cmath>

#include "membrane/errors.hpp"

namespace membrane {

namespace {

// P[1-d simple walk = k after m steps] for m = 0..n; zero off-parity.
// Positive-stable recurrence along even/odd strides.
std::vector<double> one_d_law(int k, int n) {
    k = std::abs(k);
    std::vector<double> w(size_t(n) + 1, 0.0);
    if (k > n) return w;
    w[size_t(k)] = std::exp(-double(k) * std::log(2.0));  // C(k,k) 2^{-k}
    for (int m = k; m + 2 <= n; m += 2) {
        const double up = double(m + 1) * double(m + 2);
        const double down = 4.0 * (double((m + k) / 2) + 1.0) * (double((m - k) / 2) + 1.0);
        w[size_t(m) + 2] = w[size_t(m)] * up / down;
    }
    return w;
}

// W[n] = sum_m Binom(n, m; p) U[m] V[n-m] with p = cells_u / (cells_u + cells_v):
// the law of a walk on cells_u + cells_v axes from the laws of its two axis
// groups. Binomial weights are expanded outward from the mode so nothing
// underflows; U, V, W all stay in [0,1].
std::vector<double> combine(const std::vector<double>& U, int cells_u, const std::vector<double>& V,
                            int cells_v) {
    const int n_top = int(U.size()) - 1;
    const double p = double(cells_u) / double(cells_u + cells_v);
    const double q = 1.0 - p;
    const double log_p = std::log(p), log_q = std::log(q);
    std::vector<double> W(U.size(), 0.0);
    constexpr double kCut = 1e-22;  // relative binomial-tail cutoff
    for (int n = 0; n <= n_top; ++n) {
        const int m0 = std::clamp(int(std::lround(p * n)), 0, n);
        const double log_b0 = std::lgamma(double(n) + 1) - std::lgamma(double(m0) + 1) -
                              std::lgamma(double(n - m0) + 1) + m0 * log_p + (n - m0) * log_q;
        const double b0 = std::exp(log_b0);
        double acc = b0 * U[size_t(m0)] * V[size_t(n - m0)];
        double b = b0;
        for (int m = m0 - 1; m >= 0; --m) {  // downward from the mode
            b *= (double(m + 1) / double(n - m)) * (q / p);
            if (b < kCut * b0) break;
            acc += b * U[size_t(m)] * V[size_t(n - m)];
        }
        b = b0;
        for (int m = m0 + 1; m <= n; ++m) {  // upward from the mode
            b *= (double(n - m + 1) / double(m)) * (p / q);
            if (b < kCut * b0) break;
            acc += b * U[size_t(m)] * V[size_t(n - m)];
        }
        W[size_t(n)] = acc;
    }
    return W;
}

// P_0[X_n = x] for n = 0..n_top by folding the coordinate laws together.
std::vector<double> occupation(const LatticeVector& x, int n_top) {
    const int d = int(x.size());
    std::vector<double> acc = one_d_law(x[0], n_top);
    for (int i = 1; i < d; ++i) acc = combine(acc, i, one_d_law(x[i], n_top), 1);
    return acc;
}

double weight_of(PathWeight w, int n) { return w == PathWeight::bilaplacian ? double(n + 1) : 1.0; }

// C * sum_{n > N} w(n) n^{-d/2}: a few explicit terms, then the integral bound
// (the summand is decreasing for d >= 5).
double tail_from_constant(double C, int d, int N, PathWeight w) {
    const double half_d = 0.5 * d;
    double tail = 0.0;
    int n = N + 1;
    for (; n <= N + 16; ++n) tail += weight_of(w, n) * std::pow(double(n), -half_d);
    const double M = double(n - 1);
    tail += std::pow(M, 1.0 - half_d) / (half_d - 1.0);
    if (w == PathWeight::bilaplacian) tail += std::pow(M, 2.0 - half_d) / (half_d - 2.0);
    return C * tail;
}

void check_budget(int d, int n_max, uint64_t budget) {
    // working set: ~(d + 3) sequences of length n_max + 2
    const uint64_t need = uint64_t(d + 3) * (uint64_t(n_max) + 2) * sizeof(double);
    if (need > budget)
        throw ResourceError("green_oracle_pathsum: n_max exceeds the memory budget");
}

// Pointwise bound on sup_x P_0[X_n = x] from the origin sequence: lambda^n is
// nonnegative for even n (so the origin dominates), and Cauchy-Schwarz in
// Fourier handles odd n.
double clt_constant_from_origin(const std::vector<double>& p0, int d, int upto) {
    double c = 0.0;
    for (int n = 1; n <= upto; ++n) {
        double bound;
        if (n % 2 == 0)
            bound = p0[size_t(n)];
        else
            bound = std::sqrt(p0[size_t(n) - 1] * p0[size_t(n) + 1]);
        c = std::max(c, std::pow(double(n), 0.5 * d) * bound);
    }
    return c;
}

}  // namespace

PathsumOracle::PathsumOracle(int d, int n_max, uint64_t budget)
    : d_(d), n_max_(n_max), budget_(budget) {
    if (d < 1 || n_max < 0) throw PreconditionError("PathsumOracle: bad arguments");
    check_budget(d, n_max, budget);
    const int upto = std::max(n_max, 64);
    const std::vector<double> p0 = occupation(LatticeVector(size_t(d), 0), upto + 1);
    clt_constant_ = clt_constant_from_origin(p0, d, upto);
}

std::vector<double> PathsumOracle::occupation_sequence(const LatticeVector& x) const {
    if (int(x.size()) != d_) throw PreconditionError("PathsumOracle: dimension mismatch");
    auto p = occupation(x, n_max_);
    return p;
}

PathsumResult PathsumOracle::evaluate(const LatticeVector& x, PathWeight weight) const {
    if (int(x.size()) != d_) throw PreconditionError("PathsumOracle: dimension mismatch");
    const std::vector<double> p = occupation(x, n_max_);
    PathsumResult r;
    r.n_max = n_max_;
    r.clt_constant = clt_constant_;
    for (int n = 0; n <= n_max_; ++n) r.partial_sum += weight_of(weight, n) * p[size_t(n)];
    r.tail_bound = tail_from_constant(clt_constant_, d_, n_max_, weight);
    return r;
}

PathsumResult green_oracle_pathsum(const LatticeVector& x, int n_max, PathWeight weight,
                                   uint64_t budget) {
    const PathsumOracle oracle(int(x.size()), n_max, budget);
    return oracle.evaluate(x, weight);
}

}  // namespace membrane
