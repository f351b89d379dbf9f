#include "membrane/renorm.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "membrane/errors.hpp"
#include "membrane/green.hpp"
#include "membrane/percolation.hpp"
#include "membrane/sampler.hpp"
#include "membrane/stats.hpp"

namespace membrane {

namespace {

// log(exp(a) + exp(b)) without overflow
long double log_add_exp(long double a, long double b) {
    if (a < b) std::swap(a, b);
    if (std::isinf(b) && b < 0) return a;
    return a + std::log1p(std::exp(b - a));
}

// log of the conditional-mode error term
// c6 ell0^{kd} L1^d exp(-(c7/k^4)(L1 ell0^k)^{d-4})
long double log_error_term_conditional(const RenormSchedule& s, double c6, double c7, int k) {
    const long double log_ell0 = std::log((long double)s.ell0);
    const long double log_L1 = std::log((long double)s.L1);
    const long double scale_log = (long double)(s.d - 4) * (log_L1 + k * log_ell0);
    long double decay;
    if (scale_log > 11000.0L)  // exp would overflow long double; the term is 0
        decay = -INFINITY;
    else
        decay = -((long double)c7 / std::pow((long double)k, 4.0L)) * std::exp(scale_log);
    return std::log((long double)c6) + (long double)k * s.d * log_ell0 + (long double)s.d * log_L1 +
           decay;
}

// log of the empirical-mode error term C (2N_k+1)^d exp(-c3 eps_k^2 N_k^{d-4})
long double log_error_term_empirical(const RenormSchedule& s, double C, double c3, int k) {
    const long double N_k = std::floor(1.5L * s.level_L(k)) + 1.0L;
    const long double eps_k = ((long double)s.eps / ((long double)k * k)) * s.level_h(k + 1);
    const long double scale_log = (long double)(s.d - 4) * std::log(N_k);
    long double decay;
    if (scale_log > 11000.0L)
        decay = -INFINITY;
    else
        decay = -(long double)c3 * eps_k * eps_k * std::exp(scale_log);
    return std::log((long double)C) + (long double)s.d * std::log(2.0L * N_k + 1.0L) + decay;
}

}  // namespace

BigInt gamma_d_exact(int d) {
    if (d < 1) throw PreconditionError("gamma_d: d >= 1");
    BigInt num = 2 * BigInt(d) * boost::multiprecision::pow(BigInt(21), unsigned(d));
    if (num % 7 != 0) throw NumericError("gamma_d: 7 does not divide 2d 21^d");
    return num / 7;
}

long double RenormSchedule::level_L(int k) const {
    return (long double)L1 * std::pow((long double)ell0, (long double)(k - 1));
}

long double RenormSchedule::level_h(int k) const {
    long double prod = 1.0L;
    for (int j = 1; j <= k - 1; ++j) prod *= 1.0L - (long double)eps / ((long double)j * j);
    return (long double)h_hat / prod;
}

RenormSchedule build_schedule(int d, double ell0, int L1, double eps, double h_hat) {
    if (d < 5) throw PreconditionError("build_schedule: d >= 5");
    if (!(ell0 > 2.0 && ell0 <= 3.0)) throw PreconditionError("build_schedule: ell0 in (2,3]");
    if (L1 < 100) throw PreconditionError("build_schedule: L1 >= 100");
    if (!(eps >= 0.0 && eps < 1.0)) throw PreconditionError("build_schedule: eps in [0,1)");
    if (!(h_hat > 1.0)) throw PreconditionError("build_schedule: h_hat > 1");
    RenormSchedule s;
    s.d = d;
    s.ell0 = ell0;
    s.L1 = L1;
    s.eps = eps;
    s.h_hat = h_hat;
    s.gamma_d = gamma_d_exact(d);
    s.rho = std::log(2.0) / std::log(ell0);
    if (eps == 0.0) {
        s.P_value = 1.0L;
        s.P_error = 0.0L;
        s.h_inf = (long double)h_hat;  // bit-exact degenerate case
        return s;
    }
    const long long J = 1000000;
    long double P = 1.0L;
    for (long long j = 1; j <= J; ++j) P *= 1.0L - (long double)eps / ((long double)j * j);
    // |sum_{j>J} log(1 - eps/j^2)| <= eps / ((1-eps)(J-1))
    const long double log_tail = (long double)eps / ((1.0L - (long double)eps) * (long double)(J - 1));
    s.P_value = P;
    s.P_error = P * (1.0L - std::exp(-log_tail));
    // Weierstrass sandwich
    if (!(P <= 1.0L - (long double)eps + 1e-18L))
        throw NumericError("build_schedule: P above its first factor");
    const long double lower = 1.0L - (long double)eps * 1.6449340668482264365L;  // pi^2/6
    if (P + s.P_error < lower - 1e-15L)
        throw NumericError("build_schedule: P below the Weierstrass bound");
    s.h_inf = (long double)h_hat / P;
    return s;
}

SmallnessResult smallness_check(const RenormSchedule& s, double A, double c6, double c7,
                                int k_max) {
    if (c6 <= 0 || c7 <= 0) throw PreconditionError("smallness_check: c6, c7 > 0");
    const long double g = s.gamma_d.convert_to<long double>();
    if (std::exp(-(long double)A) >= 1.0L / g)
        throw PreconditionError("smallness_check: need exp(-A) < 1/gamma_d");
    const long double rhs_log = std::log(1.0L - g * std::exp(-(long double)A));
    const auto lhs_log = [&](int k) {
        return log_error_term_conditional(s, c6, c7, k) + (long double)A + std::exp2((long double)(k + 1));
    };
    SmallnessResult out;
    for (int k = 1; k <= k_max; ++k) {
        if (lhs_log(k) < rhs_log)
            out.ok_upto = k;
        else
            break;
    }
    // Beyond k_max the lhs must fall monotonically with growing decrements:
    // (L1 ell0^k)^{d-4}/k^4 multiplies by ell0^{d-4} (k/(k+1))^4 > 2 per step
    // eventually (ell0 > 2, d >= 5), beating the 2^{k+1} growth.
    if (out.ok_upto == k_max) {
        bool ok = std::pow(s.ell0, s.d - 4) > 2.0;
        long double prev = lhs_log(k_max);
        long double prev_drop = 0.0L;
        for (int k = k_max + 1; k <= k_max + 60 && ok; ++k) {
            const long double cur = lhs_log(k);
            const long double drop = prev - cur;
            if (!(cur < rhs_log) || !(drop > 0.0L) || (k > k_max + 1 && !(drop >= prev_drop)))
                ok = false;
            prev = cur;
            prev_drop = drop;
        }
        out.asymptotic_ok = ok;
    }
    return out;
}

double p1_bound_borell_tis(double h_hat, int L1, int d) {
    if (L1 < 1 || d < 5) throw PreconditionError("p1_bound_borell_tis: bad arguments");
    const double G0 = green_bilaplacian(LatticeVector(size_t(d), 0), 1e-9).value;
    const double log_size = double(d) * std::log(3.0 * double(L1));
    const double emax_bound = std::sqrt(2.0 * G0 * log_size);
    if (!(h_hat > emax_bound))
        throw PreconditionError("p1_bound_borell_tis: h_hat below the max-expectation bound");
    return std::exp(-(h_hat - emax_bound) * (h_hat - emax_bound) / (2.0 * G0));
}

std::vector<McP1Result> mc_estimate_p1(const std::vector<double>& h_list, int L1, int d,
                                       uint64_t n_samples, double confidence, uint64_t seed,
                                       int torus_side) {
    if (!std::is_sorted(h_list.begin(), h_list.end()))
        throw PreconditionError("mc_estimate_p1: h_list must be sorted");
    // D = [-L1, 2L1)^d plus the one-site exit shell must fit the torus
    if (torus_side < 3 * L1 + 3)
        throw PreconditionError("mc_estimate_p1: torus too small for D with margin");
    const TorusSampler sampler(d, torus_side, seed);
    const Window shell(LatticeVector(size_t(d), -L1 - 1), LatticeVector(size_t(d), 2 * L1));
    std::vector<McP1Result> out(h_list.size());
    for (size_t i = 0; i < h_list.size(); ++i)
        out[i] = {h_list[i], n_samples, 0, 0.0};
    for (uint64_t s = 0; s < n_samples; ++s) {
        const FieldSample torus = sampler.sample(s);
        // restrict to the shell window (coordinates mod L)
        FieldSample view;
        view.geometry = torus.geometry;
        view.window = shell;
        view.seed = torus.seed;
        view.stream_id = torus.stream_id;
        view.values.resize(shell.size());
        {
            LatticeVector x = shell.lo();
            size_t idx = 0;
            const int L = torus_side;
            LatticeVector w = LatticeVector(size_t(d));
            do {
                for (int a = 0; a < d; ++a) w[size_t(a)] = ((x[size_t(a)] % L) + L) % L;
                view.values[idx++] = torus.values[torus.window.index(w)];
            } while (shell.next_site(x));
        }
        bool prev = true;
        for (size_t i = 0; i < h_list.size(); ++i) {
            const OccupancyGrid grid = threshold(view, h_list[i]);
            const ClusterLabeling lab = label_clusters(grid, Adjacency::nearest_neighbor);
            // cluster meeting C = [0,L1)^d and exiting D = [-L1,2L1)^d
            std::vector<uint8_t> meets_c(lab.count(), 0), exits(lab.count(), 0);
            LatticeVector x = shell.lo();
            size_t flat = 0;
            do {
                const int64_t ci = lab.cluster_index(flat);
                if (ci >= 0) {
                    bool in_c = true, in_d = true;
                    for (int a = 0; a < d; ++a) {
                        in_c = in_c && x[size_t(a)] >= 0 && x[size_t(a)] < L1;
                        in_d = in_d && x[size_t(a)] >= -L1 && x[size_t(a)] < 2 * L1;
                    }
                    if (in_c) meets_c[size_t(ci)] = 1;
                    if (!in_d) exits[size_t(ci)] = 1;
                }
                ++flat;
            } while (shell.next_site(x));
            bool cross = false;
            for (size_t c = 0; c < lab.count() && !cross; ++c)
                cross = meets_c[c] && exits[c];
            if (!prev && cross) throw NumericError("mc_estimate_p1: coupled monotonicity violated");
            prev = cross;
            out[i].n_success += cross ? 1 : 0;
        }
    }
    for (auto& r : out) r.upper_bound = binomial_upper_bound(r.n_success, r.n_samples, confidence);
    return out;
}

CertificateReport run_induction(const InductionInputs& in) {
    CertificateReport rep;
    rep.in = in;
    rep.rho = in.schedule.rho;
    const RenormSchedule& s = in.schedule;
    if (!(in.B > 0 && in.B < 1)) throw PreconditionError("run_induction: B in (0,1)");
    if (in.p1_bound <= 0) throw PreconditionError("run_induction: p1 bound required");

    const long double A = in.A, B = in.B;
    const long double g_log = std::log(s.gamma_d.convert_to<long double>());

    // base case: p1 <= exp(-A - 2B)
    const long double log_p1 = std::log((long double)in.p1_bound);
    rep.base_ok = log_p1 <= -A - 2.0L * B + 1e-18L;

    const auto log_err = [&](int k) {
        return in.mode == CertMode::conditional
                   ? log_error_term_conditional(s, in.c6, in.c7, k)
                   : log_error_term_empirical(s, in.emp_C, in.emp_c3, k);
    };

    // smallness for the actual error model: gamma_d e^{-A} + err_k e^{A + B 2^{k+1}} < 1
    const long double r1 = std::exp(-A) * std::exp(g_log);
    bool smallness_ok = r1 < 1.0L;
    rep.smallness_upto = 0;
    for (int k = 1; k <= in.k_max && smallness_ok; ++k) {
        const long double t2_log = log_err(k) + A + B * std::exp2((long double)(k + 1));
        if (t2_log < std::log(1.0L - r1))
            rep.smallness_upto = k;
        else
            smallness_ok = false;
    }
    smallness_ok = smallness_ok && rep.smallness_upto == in.k_max;

    // conditional mode inherits the literal section inequality's asymptotic
    // check; the empirical mode uses the same domination criterion on its form
    if (smallness_ok) {
        bool ok = std::pow(s.ell0, s.d - 4) > 2.0;
        long double prev = log_err(in.k_max) + A + B * std::exp2((long double)(in.k_max + 1));
        long double prev_drop = 0.0L;
        for (int k = in.k_max + 1; k <= in.k_max + 60 && ok; ++k) {
            const long double cur = log_err(k) + A + B * std::exp2((long double)(k + 1));
            const long double drop = prev - cur;
            if (!(cur < std::log(1.0L - r1)) || !(drop > 0.0L) ||
                (k > in.k_max + 1 && !(drop >= prev_drop)))
                ok = false;
            prev = cur;
            prev_drop = drop;
        }
        rep.asymptotic_ok = ok;
    }

    // run the recursion log q_{k+1} = log(gamma_d q_k^2 + err_k) and verify
    // q_k <= exp(-A - B 2^k) arithmetically
    rep.log_pk_bound.assign(size_t(in.k_max) + 1, 0.0L);
    rep.log_pk_bound[1] = log_p1;
    bool recursion_ok = rep.base_ok;
    for (int k = 1; k < in.k_max && recursion_ok; ++k) {
        const long double next =
            log_add_exp(g_log + 2.0L * rep.log_pk_bound[size_t(k)], log_err(k));
        rep.log_pk_bound[size_t(k) + 1] = next;
        if (next > -A - B * std::exp2((long double)(k + 1)) + 1e-15L) recursion_ok = false;
    }

    rep.certified = rep.base_ok && smallness_ok && rep.asymptotic_ok && recursion_ok;
    if (!rep.base_ok)
        rep.failing_stage = "base_case";
    else if (!smallness_ok)
        rep.failing_stage = "smallness";
    else if (!rep.asymptotic_ok)
        rep.failing_stage = "asymptotic";
    else if (!recursion_ok)
        rep.failing_stage = "recursion";
    if (rep.certified) rep.h_inf = s.h_inf;
    return rep;
}

std::string CertificateReport::serialize() const {
    std::ostringstream out;
    char buf[64];
    const auto put_real = [&](const char* key, long double v) {
        std::snprintf(buf, sizeof(buf), "%.21Lg", v);
        out << key << "=" << buf << "\n";
    };
    out << "mode=" << (in.mode == CertMode::conditional ? "conditional" : "empirical") << "\n";
    out << "d=" << in.schedule.d << "\n";
    put_real("ell0", (long double)in.schedule.ell0);
    out << "L1=" << in.schedule.L1 << "\n";
    put_real("eps", (long double)in.schedule.eps);
    put_real("h_hat", (long double)in.schedule.h_hat);
    put_real("A", (long double)in.A);
    put_real("B", (long double)in.B);
    out << "gamma_d=" << in.schedule.gamma_d.str() << "\n";
    put_real("P_value", in.schedule.P_value);
    put_real("P_error", in.schedule.P_error);
    put_real("p1_bound", (long double)in.p1_bound);
    out << "p1_provenance="
        << (in.p1_provenance == P1Provenance::borell_tis ? "borell_tis" : "monte_carlo") << "\n";
    if (in.p1_provenance == P1Provenance::monte_carlo)
        put_real("p1_confidence", (long double)in.p1_confidence);
    if (in.mode == CertMode::conditional) {
        put_real("c6", (long double)in.c6);
        put_real("c7", (long double)in.c7);
    } else {
        put_real("emp_C", (long double)in.emp_C);
        put_real("emp_c3", (long double)in.emp_c3);
    }
    out << "k_max=" << in.k_max << "\n";
    out << "base_ok=" << (base_ok ? 1 : 0) << "\n";
    out << "smallness_upto=" << smallness_upto << "\n";
    out << "asymptotic_ok=" << (asymptotic_ok ? 1 : 0) << "\n";
    out << "certified=" << (certified ? 1 : 0) << "\n";
    out << "failing_stage=" << failing_stage << "\n";
    put_real("h_inf", h_inf);
    put_real("rho", (long double)rho);
    return out.str();
}

}  // namespace membrane
