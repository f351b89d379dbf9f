#include "membrane/stats.hpp"

#include <boost/math/distributions/beta.hpp>
#include <cmath>

#include "membrane/errors.hpp"
#include "membrane/rng.hpp"

namespace membrane {

double MeanVar::se_mean() const { return n > 1 ? std::sqrt(var / double(n)) : 0.0; }

double MeanVar::se_var_gaussian() const {
    return n > 1 ? var * std::sqrt(2.0 / double(n - 1)) : 0.0;
}

MeanVar mean_var(const std::vector<double>& xs) {
    MeanVar mv;
    mv.n = xs.size();
    if (mv.n == 0) return mv;
    double s = 0;
    for (double x : xs) s += x;
    mv.mean = s / double(mv.n);
    if (mv.n > 1) {
        double ss = 0;
        for (double x : xs) ss += (x - mv.mean) * (x - mv.mean);
        mv.var = ss / double(mv.n - 1);
    }
    return mv;
}

CovEstimate covariance(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw PreconditionError("covariance: need paired samples, n >= 2");
    CovEstimate ce;
    ce.n = xs.size();
    const MeanVar mx = mean_var(xs), my = mean_var(ys);
    double s = 0;
    for (size_t i = 0; i < xs.size(); ++i) s += (xs[i] - mx.mean) * (ys[i] - my.mean);
    ce.cov = s / double(ce.n - 1);
    ce.se = std::sqrt((mx.var * my.var + ce.cov * ce.cov) / double(ce.n));
    return ce;
}

double pearson_correlation(const std::vector<double>& xs, const std::vector<double>& ys) {
    const CovEstimate ce = covariance(xs, ys);
    const MeanVar mx = mean_var(xs), my = mean_var(ys);
    const double denom = std::sqrt(mx.var * my.var);
    return denom > 0 ? ce.cov / denom : 0.0;
}

BinomialCI binomial_ci(uint64_t s, uint64_t n, double confidence) {
    if (n == 0 || confidence <= 0 || confidence >= 1)
        throw PreconditionError("binomial_ci: bad arguments");
    const double alpha = 1.0 - confidence;
    BinomialCI ci;
    // Clopper-Pearson via the beta quantile.
    if (s == 0)
        ci.lo = 0.0;
    else
        ci.lo = boost::math::quantile(boost::math::beta_distribution<>(double(s), double(n - s + 1)),
                                      alpha / 2);
    if (s == n)
        ci.hi = 1.0;
    else
        ci.hi = boost::math::quantile(boost::math::beta_distribution<>(double(s + 1), double(n - s)),
                                      1.0 - alpha / 2);
    return ci;
}

double binomial_upper_bound(uint64_t s, uint64_t n, double confidence) {
    if (n == 0) throw PreconditionError("binomial_upper_bound: n = 0");
    if (s == n) return 1.0;
    return boost::math::quantile(boost::math::beta_distribution<>(double(s + 1), double(n - s)),
                                 confidence);
}

BinomialCI bootstrap_mean_ci(const std::vector<double>& xs, double confidence, int n_boot,
                             uint64_t seed) {
    if (xs.empty() || n_boot < 10) throw PreconditionError("bootstrap_mean_ci: bad arguments");
    const size_t n = xs.size();
    std::vector<double> means(n_boot);
    RngStream rng(seed, 0x626f6f74 /* "boot" */);
    for (int b = 0; b < n_boot; ++b) {
        double s = 0;
        for (size_t i = 0; i < n; ++i) s += xs[rng.below(n)];
        means[b] = s / double(n);
    }
    std::sort(means.begin(), means.end());
    const double alpha = 1.0 - confidence;
    const auto pick = [&](double q) {
        const double pos = q * double(n_boot - 1);
        const size_t i = size_t(pos);
        const double frac = pos - double(i);
        return i + 1 < means.size() ? means[i] * (1 - frac) + means[i + 1] * frac : means.back();
    };
    return {pick(alpha / 2), pick(1 - alpha / 2)};
}

double normal_upper_tail(double t) { return 0.5 * std::erfc(t / std::sqrt(2.0)); }

double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw PreconditionError("regression_slope: bad input");
    const MeanVar mx = mean_var(x), my = mean_var(y);
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx.mean) * (y[i] - my.mean);
        sxx += (x[i] - mx.mean) * (x[i] - mx.mean);
    }
    return sxy / sxx;
}

}  // namespace membrane
