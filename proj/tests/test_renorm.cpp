#include <doctest.h>

#include <cmath>

#include "membrane/green.hpp"
#include "membrane/renorm.hpp"
#include "membrane/stats.hpp"

using namespace membrane;

TEST_SUITE_BEGIN("renorm");

TEST_CASE("gamma_d exact values and divisibility") {
    CHECK(gamma_d_exact(5) == BigInt(5834430));
    for (int d = 1; d <= 40; ++d) {
        const BigInt g = gamma_d_exact(d);  // throws if 7 does not divide
        CHECK(g * 7 == 2 * BigInt(d) * boost::multiprecision::pow(BigInt(21), unsigned(d)));
    }
}

TEST_CASE("schedule: degenerate and generic") {
    const RenormSchedule s0 = build_schedule(5, 2.5, 100, 0.0, 2.0);
    CHECK(s0.P_value == 1.0L);
    CHECK(s0.h_inf == 2.0L);  // bit-exact
    CHECK(s0.level_h(7) == 2.0L);

    const RenormSchedule s = build_schedule(5, 2.5, 100, 0.3, 2.0);
    CHECK(double(s.P_value) <= 1.0 - 0.3);
    CHECK(double(s.P_value) >= 1.0 - 0.3 * 1.6449340668482264 - double(s.P_error));
    // h_k nondecreasing from h_hat
    CHECK(s.level_h(1) == doctest::Approx(2.0));
    long double prev = 0;
    for (int k = 1; k <= 12; ++k) {
        CHECK(s.level_h(k) >= prev);
        prev = s.level_h(k);
    }
    CHECK(double(s.h_inf) == doctest::Approx(2.0 / double(s.P_value)));
    // L_k geometric
    CHECK(double(s.level_L(1)) == 100.0);
    CHECK(double(s.level_L(3)) == doctest::Approx(100.0 * 2.5 * 2.5));
    // monotonicity of h_inf in h_hat and P
    const RenormSchedule bigger = build_schedule(5, 2.5, 100, 0.3, 3.0);
    CHECK(bigger.h_inf > s.h_inf);
    const RenormSchedule smaller_eps = build_schedule(5, 2.5, 100, 0.1, 2.0);
    CHECK(smaller_eps.P_value > s.P_value);
    CHECK(smaller_eps.h_inf < s.h_inf);
}

TEST_CASE("smallness check") {
    const RenormSchedule s = build_schedule(5, 2.5, 100, 0.1, 17.0);
    const double A = 16.6;  // exp(-A) < 1/gamma_5
    // huge c7 kills the error term for every k
    const SmallnessResult big = smallness_check(s, A, 1.0, 1e6, 60);
    CHECK(big.ok_upto == 60);
    CHECK(big.asymptotic_ok);
    // enormous c6 with tiny c7 fails immediately
    const SmallnessResult bad = smallness_check(s, A, 1e300, 1e-12, 60);
    CHECK(bad.ok_upto == 0);
    // doubling L1 never breaks an ok-for-all configuration
    for (double c7 : {2000.0, 5e4}) {
        bool prev_ok = false;
        for (int L1 : {100, 200, 400, 800}) {
            const RenormSchedule sl = build_schedule(5, 2.5, L1, 0.1, 17.0);
            const SmallnessResult r = smallness_check(sl, A, 1.0, c7, 60);
            const bool ok = r.ok_upto == 60 && r.asymptotic_ok;
            if (prev_ok) CHECK(ok);
            prev_ok = ok;
        }
    }
    // precondition: exp(-A) must be below 1/gamma_d
    CHECK_THROWS_AS(smallness_check(s, 10.0, 1.0, 1.0, 60), PreconditionError);
}

TEST_CASE("Borell-TIS base bound") {
    const double b1 = p1_bound_borell_tis(17.0, 100, 5);
    const double b2 = p1_bound_borell_tis(18.0, 100, 5);
    CHECK(b2 < b1);  // strictly decreasing in h_hat
    CHECK(p1_bound_borell_tis(60.0, 100, 5) < 1e-100);
    const double G0 = green_bilaplacian(LatticeVector(5, 0), 1e-9).value;
    const double emax = std::sqrt(2.0 * G0 * 5.0 * std::log(300.0));
    CHECK(p1_bound_borell_tis(2.0 * emax, 100, 5) < 1.0);
    CHECK_THROWS_AS(p1_bound_borell_tis(emax * 0.5, 100, 5), PreconditionError);
}

TEST_CASE("Monte Carlo p1 bound") {
    // tiny geometry: L1 = 2 on a torus of side 16
    const std::vector<double> hs = {1.0, 30.0};
    const auto rows = mc_estimate_p1(hs, 2, 5, 40, 0.99, 5, 16);
    CHECK(rows[1].n_success == 0);  // h far above the field maximum
    CHECK(rows[1].upper_bound ==
          doctest::Approx(1.0 - std::pow(1.0 - 0.99, 1.0 / 40.0)).epsilon(1e-12));
    CHECK(rows[1].n_success <= rows[0].n_success);  // coupled monotonicity
    CHECK(rows[1].upper_bound <= rows[0].upper_bound + 1e-12);
    CHECK_THROWS_AS(mc_estimate_p1(hs, 4, 5, 4, 0.99, 5, 8), PreconditionError);
}

TEST_CASE("induction engine") {
    InductionInputs in;
    in.schedule = build_schedule(5, 2.5, 100, 0.1, 17.0);
    in.A = 16.6;
    in.B = 0.5;
    in.mode = CertMode::conditional;
    in.c6 = 1.0;
    in.c7 = 2000.0;
    in.p1_bound = std::exp(-in.A - 2 * in.B);  // base case boundary
    in.p1_provenance = P1Provenance::borell_tis;
    const CertificateReport rep = run_induction(in);
    CHECK(rep.base_ok);
    CHECK(rep.certified);
    CHECK(rep.failing_stage.empty());
    // p_2 <= exp(-A - 4B) verified arithmetically
    CHECK(double(rep.log_pk_bound[2]) <= -in.A - 4 * in.B + 1e-12);
    // h_inf equals h_hat / P with P recomputed independently (reversed
    // multiplication order at the same truncation depth)
    long double P = 1.0L;
    for (long long j = 1000000; j >= 1; --j) P *= 1.0L - 0.1L / ((long double)j * j);
    CHECK(std::abs(double(rep.h_inf - 17.0L / P)) < 1e-12);
    // and the certified tail error covers a deeper truncation
    long double P2 = 1.0L;
    for (long long j = 1; j <= 4000000; ++j) P2 *= 1.0L - 0.1L / ((long double)j * j);
    CHECK(std::abs(double(in.schedule.P_value - P2)) <= double(in.schedule.P_error));
    CHECK(rep.rho == doctest::Approx(std::log(2.0) / std::log(2.5)));

    // slightly above the base-case threshold: not certified
    InductionInputs bad = in;
    bad.p1_bound = std::exp(-in.A - 2 * in.B) * 1.001;
    const CertificateReport rep_bad = run_induction(bad);
    CHECK_FALSE(rep_bad.certified);
    CHECK(rep_bad.failing_stage == "base_case");

    // deterministic serialization
    CHECK(rep.serialize() == run_induction(in).serialize());
    CHECK(rep.serialize().find("gamma_d=5834430") != std::string::npos);
}

TEST_CASE("empirical mode runs and is labeled") {
    InductionInputs in;
    in.schedule = build_schedule(5, 2.5, 100, 0.1, 17.0);
    in.A = 16.6;
    in.B = 0.5;
    in.mode = CertMode::empirical;
    in.emp_C = 2.0;
    in.emp_c3 = 1.0;
    in.p1_bound = std::exp(-in.A - 2 * in.B);
    const CertificateReport rep = run_induction(in);
    CHECK(rep.serialize().find("mode=empirical") != std::string::npos);
    CHECK(rep.base_ok);
}

TEST_SUITE_END();
