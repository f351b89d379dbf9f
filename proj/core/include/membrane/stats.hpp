#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace membrane {

struct MeanVar {
    double mean = 0.0;
    double var = 0.0;  // unbiased sample variance
    size_t n = 0;
    double se_mean() const;
    // Standard error of the sample variance of a Gaussian: var * sqrt(2/(n-1)).
    double se_var_gaussian() const;
};

MeanVar mean_var(const std::vector<double>& xs);

// Sample covariance of paired observations plus the Gaussian-exact standard
// error of the estimator, sqrt((Cxx*Cyy + Cxy^2)/n).
struct CovEstimate {
    double cov = 0.0;
    double se = 0.0;
    size_t n = 0;
};
CovEstimate covariance(const std::vector<double>& xs, const std::vector<double>& ys);

double pearson_correlation(const std::vector<double>& xs, const std::vector<double>& ys);

// Exact (Clopper-Pearson) two-sided binomial confidence bounds.
struct BinomialCI {
    double lo = 0.0;
    double hi = 1.0;
};
BinomialCI binomial_ci(uint64_t successes, uint64_t trials, double confidence);

// One-sided exact upper confidence bound on p.
double binomial_upper_bound(uint64_t successes, uint64_t trials, double confidence);

// Percentile bootstrap CI for the mean of xs (deterministic given seed).
BinomialCI bootstrap_mean_ci(const std::vector<double>& xs, double confidence, int n_boot,
                             uint64_t seed);

// Standard normal tail P[Z > t].
double normal_upper_tail(double t);

// Least-squares slope of y against x.
double regression_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace membrane
