#include "membrane/bessel.hpp"

#include <cmath>
#include <cstdlib>

#include "membrane/errors.hpp"

namespace membrane {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Scaled power series: e^{-z} (z/2)^k sum_m (z^2/4)^m / (m! (m+k)!).
// All terms are positive and the scaled sum is <= 1, so plain forward
// summation is accurate; used for small z where few terms are needed.
double series_scaled(int k, double z) {
    double t = std::exp(double(k) * std::log(z / 2) - std::lgamma(double(k) + 1.0) - z);
    double sum = t;
    const double q = z * z / 4;
    for (int m = 1; m < 400; ++m) {
        t *= q / (double(m) * double(m + k));
        sum += t;
        if (t < sum * 1e-17) break;
    }
    return sum;
}

// Miller downward recurrence normalized with e^{-z} (I_0 + 2 sum_{j>=1} I_j) = 1.
// Orders decay like exp(-j^2/(2z)) once j exceeds ~sqrt(z), so a start order
// of k_max + 10 sqrt(z) + 40 buries the trial-seed error below 1e-20
// relative. Gives every order 0..k_max in one sweep.
void miller_scaled(double z, int k_max, std::vector<double>& out) {
    const int start = k_max + int(10.0 * std::sqrt(z)) + 40;
    std::vector<double> b(size_t(start) + 2, 0.0);
    b[size_t(start)] = 1e-280;
    for (int j = start; j >= 1; --j) {
        b[size_t(j) - 1] = b[size_t(j) + 1] + (2.0 * double(j) / z) * b[size_t(j)];
        if (b[size_t(j) - 1] > 1e260) {
            // keep all computed entries on a common scale
            for (int i = j - 1; i <= start + 1; ++i) b[size_t(i)] *= 1e-260;
        }
    }
    double norm = b[0];
    for (int j = 1; j <= start; ++j) norm += 2.0 * b[size_t(j)];
    out.resize(size_t(k_max) + 1);
    for (int k = 0; k <= k_max; ++k) out[size_t(k)] = b[size_t(k)] / norm;
}

// Scaled large-z asymptotic series
//   e^{-z} I_k(z) ~ (2 pi z)^{-1/2} [1 - (mu-1)/(8z) + (mu-1)(mu-9)/(2!(8z)^2) - ...],
// mu = 4k^2, truncated at the smallest term. Requires mu/(8z) small; callers
// enforce 4k^2 <= z/8.
double asymptotic_scaled(int k, double z) {
    const double mu = 4.0 * double(k) * double(k);
    const double inv8z = 1.0 / (8.0 * z);
    double term = 1.0, sum = 1.0;
    double prev = 1.0;
    for (int j = 1; j < 60; ++j) {
        const double f = mu - double(2 * j - 1) * double(2 * j - 1);
        term *= -f * inv8z / double(j);
        if (std::abs(term) >= prev) break;  // smallest term reached
        sum += term;
        prev = std::abs(term);
        if (prev < 1e-17 * sum) break;
    }
    return sum / std::sqrt(2.0 * kPi * z);
}

constexpr double kAsymptoticZ = 1e4;   // below this Miller is cheap and exact
constexpr double kMillerMaxZ = 1e8;    // recurrence length guard

bool asymptotic_ok(int k, double z) { return z > kAsymptoticZ && 4.0 * double(k) * double(k) <= z / 8.0; }

}  // namespace

double bessel_i_scaled_envelope(double z) {
    if (z <= 0) return 1.0;
    const double s = std::sqrt(kPi / (8.0 * z));
    return s < 1.0 ? s : 1.0;
}

double bessel_i_scaled(int k, double z) {
    k = std::abs(k);
    if (z < 0) throw PreconditionError("bessel_i_scaled: z < 0");
    if (z == 0.0) return k == 0 ? 1.0 : 0.0;
    if (z <= 2.0) return series_scaled(k, z);
    if (asymptotic_ok(k, z)) return asymptotic_scaled(k, z);
    if (z > kMillerMaxZ)
        throw PreconditionError("bessel_i_scaled: order too large for argument this size");
    std::vector<double> v;
    miller_scaled(z, k, v);
    return v[size_t(k)];
}

std::vector<double> bessel_i_scaled_orders(double z, int k_max) {
    if (z < 0 || k_max < 0) throw PreconditionError("bessel_i_scaled_orders: bad arguments");
    std::vector<double> out(size_t(k_max) + 1, 0.0);
    if (z == 0.0) {
        out[0] = 1.0;
        return out;
    }
    if (z <= 2.0) {
        for (int k = 0; k <= k_max; ++k) out[size_t(k)] = series_scaled(k, z);
        return out;
    }
    if (asymptotic_ok(k_max, z)) {
        for (int k = 0; k <= k_max; ++k) out[size_t(k)] = asymptotic_scaled(k, z);
        return out;
    }
    if (z > kMillerMaxZ)
        throw PreconditionError("bessel_i_scaled_orders: order too large for argument this size");
    miller_scaled(z, k_max, out);
    return out;
}

}  // namespace membrane
