#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <vector>

namespace membrane {

using BigInt = boost::multiprecision::cpp_int;

// gamma_d = 2 d 21^d / 7, exact (21^d contributes 7^d, so divisibility holds
// for every d >= 1; asserted).
BigInt gamma_d_exact(int d);

// Multi-scale schedule: L_{k+1} = ell0 L_k, h_k = h_hat / prod_{j<k}(1 - eps j^{-2}),
// P = prod_{j>=1}(1 - eps/j^2) with a certified tail bound, h_inf = h_hat / P.
struct RenormSchedule {
    int d = 5;
    double ell0 = 2.5;  // in (2, 3]
    int L1 = 100;       // >= 100
    double eps = 0.1;   // in [0, 1); 0 degenerates to h_k == h_hat
    double h_hat = 2.0; // > 1

    BigInt gamma_d;
    long double P_value = 1.0L;   // finite product up to J
    long double P_error = 0.0L;   // certified bound on |P_value - P|
    long double h_inf = 0.0L;     // h_hat / P_value
    double rho = 0.0;             // log 2 / log ell0

    long double level_L(int k) const;  // L_k = ell0^{k-1} L1
    long double level_h(int k) const;  // h_k (nondecreasing, h_1 = h_hat)
};

RenormSchedule build_schedule(int d, double ell0, int L1, double eps, double h_hat);

// Verifies c6 ell0^{kd} L1^d exp(-(c7/k^4)(L1 ell0^k)^{d-4} + A + 2^{k+1}) < 1 - gamma_d e^{-A}
// for k = 1..k_max in extended precision (log space; exponents like 2^{k+1}
// overflow doubles long before k = 60).
struct SmallnessResult {
    int ok_upto = 0;          // largest k with the inequality verified for all j <= k
    bool asymptotic_ok = false;  // log lhs decreasing with growing decrements beyond k_max
};
SmallnessResult smallness_check(const RenormSchedule& s, double A, double c6, double c7,
                                int k_max = 60);

// Borell-TIS base bound: p_1(h_hat) <= exp(-(h_hat - E[max])^2 / (2 G(0)))
// with E[max] <= sqrt(2 G(0) log |D_0^1|), |D_0^1| = (3 ceil(L1))^d.
double p1_bound_borell_tis(double h_hat, int L1, int d);

// Exact binomial upper confidence bound on p_1 from torus Monte Carlo:
// crossing of E^{>= h} from C = [0,L1)^d to the complement of D = [-L1,2L1)^d,
// coupled across the sorted h_list (shared samples).
struct McP1Result {
    double h = 0.0;
    uint64_t n_samples = 0, n_success = 0;
    double upper_bound = 0.0;
};
std::vector<McP1Result> mc_estimate_p1(const std::vector<double>& h_list, int L1, int d,
                                       uint64_t n_samples, double confidence, uint64_t seed,
                                       int torus_side);

enum class CertMode { conditional, empirical };
enum class P1Provenance { borell_tis, monte_carlo };

struct InductionInputs {
    RenormSchedule schedule;
    double A = 16.0;
    double B = 0.5;  // in (0,1)
    double p1_bound = 0.0;
    P1Provenance p1_provenance = P1Provenance::borell_tis;
    double p1_confidence = 0.0;  // for monte_carlo provenance
    CertMode mode = CertMode::conditional;
    // conditional mode: user-supplied decoupling constants (the paper proves
    // existence, not values)
    double c6 = 1.0, c7 = 1.0;
    // empirical mode: error term C (2N_k+1)^d exp(-c3 eps_k^2 N_k^{d-4}) with
    // constants measured by the decoupling experiment
    double emp_C = 0.0, emp_c3 = 0.0;
    int k_max = 60;
};

struct CertificateReport {
    InductionInputs in;
    bool base_ok = false;
    int smallness_upto = 0;
    bool asymptotic_ok = false;
    bool certified = false;
    std::string failing_stage;  // empty when certified
    long double h_inf = 0.0L;
    double rho = 0.0;
    // verified log bounds on p_k(h_k), k = 1..k_max (log q_k <= -A - B 2^k)
    std::vector<long double> log_pk_bound;

    // flat key=value block (stable keys) for downstream diffing
    std::string serialize() const;
};

CertificateReport run_induction(const InductionInputs& in);

}  // namespace membrane
