#include "membrane/green.hpp"

#include <cmath>

#include "membrane/bessel.hpp"
#include "membrane/errors.hpp"

namespace membrane {

namespace {

constexpr double kPi = 3.14159265358979323846;

// (pi d / 8)^{d/2} * T^{1+p-d/2} / (d/2 - 1 - p), p = 0 (simple) or 1 (bilaplacian).
double tail_bound(int d, double T, int p) {
    if (d < 5) throw PreconditionError("green: d >= 5 required");
    if (T <= kPi * d / 8)
        throw PreconditionError("green: cutoff too small for the envelope tail bound");
    const double half_d = 0.5 * d;
    return std::pow(kPi * d / 8.0, half_d) * std::pow(T, 1.0 + p - half_d) / (half_d - 1.0 - p);
}

QuadratureSpec auto_spec(int d, double abs_tol, int p) {
    if (abs_tol <= 0) throw PreconditionError("green: abs_tol must be > 0");
    const double half_d = 0.5 * d;
    const double expo = half_d - 1.0 - p;  // tail ~ C T^{-expo}
    const double C = std::pow(kPi * d / 8.0, half_d) / expo;
    double T = std::pow(2.0 * C / abs_tol, 1.0 / expo);
    T = std::max(T, 4.0 * d);
    QuadratureSpec spec;
    spec.upper_cutoff = T;
    spec.abs_tol = abs_tol;
    return spec;
}

// Integrand prod_i e^{-t/d} I_{x_i}(t/d), optionally with a leading factor t.
// Every factor lies in (0,1], so the product is overflow-free at any t.
struct GreenIntegrand {
    std::vector<int> orders;  // |x_i|
    int k_max;
    int d;
    bool weighted;

    GreenIntegrand(const LatticeVector& x, bool weighted_) : d(int(x.size())), weighted(weighted_) {
        orders.reserve(x.size());
        k_max = 0;
        for (int c : x) {
            orders.push_back(std::abs(c));
            k_max = std::max(k_max, std::abs(c));
        }
    }

    double operator()(double t) const {
        if (t <= 0) return 0.0;
        const std::vector<double> iv = bessel_i_scaled_orders(t / d, k_max);
        double prod = 1.0;
        for (int k : orders) prod *= iv[size_t(k)];
        return weighted ? t * prod : prod;
    }
};

GreenValue evaluate(const LatticeVector& x, const QuadratureSpec& spec, bool weighted) {
    spec.validate();
    const int d = int(x.size());
    if (d < 5) throw PreconditionError("green: d >= 5 required");
    const double tail = tail_bound(d, spec.upper_cutoff, weighted ? 1 : 0);
    const GreenIntegrand f(x, weighted);
    const double panel_tol = std::max(spec.abs_tol - tail, spec.abs_tol * 0.25);
    const QuadratureResult qr =
        integrate_adaptive([&f](double t) { return f(t); }, 0.0, spec.upper_cutoff, panel_tol,
                           spec.max_refinements);
    return {qr.value, qr.error + tail};
}

}  // namespace

double green_tail_bound_simple(int d, double T) { return tail_bound(d, T, 0); }
double green_tail_bound_bilaplacian(int d, double T) { return tail_bound(d, T, 1); }

QuadratureSpec auto_spec_simple(int d, double abs_tol) { return auto_spec(d, abs_tol, 0); }
QuadratureSpec auto_spec_bilaplacian(int d, double abs_tol) { return auto_spec(d, abs_tol, 1); }

GreenValue green_simple(const LatticeVector& x, const QuadratureSpec& spec) {
    return evaluate(x, spec, false);
}

GreenValue green_bilaplacian(const LatticeVector& x, const QuadratureSpec& spec) {
    return evaluate(x, spec, true);
}

GreenValue green_simple(const LatticeVector& x, double abs_tol) {
    return evaluate(x, auto_spec_simple(int(x.size()), abs_tol), false);
}

GreenValue green_bilaplacian(const LatticeVector& x, double abs_tol) {
    return evaluate(x, auto_spec_bilaplacian(int(x.size()), abs_tol), true);
}

}  // namespace membrane
