#include <doctest.h>

#include <cmath>

#include "membrane/config.hpp"
#include "membrane/errors.hpp"
#include "membrane/experiments.hpp"

using namespace membrane;

TEST_SUITE_BEGIN("experiments");

namespace {

Config sweep_cfg(int workers) {
    Config cfg = Config::parse_string(
        "sweep.d = 5\n"
        "sweep.L_box = 8\n"
        "sweep.L = 1\n"
        "sweep.h = -20,0.5,20\n"
        "sweep.samples = 40\n"
        "seed = 99\n");
    cfg.set("workers", std::to_string(workers));
    return cfg;
}

}  // namespace

TEST_CASE("sweep: deterministic across reruns and worker counts") {
    const ExperimentOutput a = run_sweep(sweep_cfg(1));
    const ExperimentOutput b = run_sweep(sweep_cfg(1));
    const ExperimentOutput c = run_sweep(sweep_cfg(3));
    CHECK(a.csv == b.csv);
    // worker count is recorded in the config hash line; the data rows must match
    const auto rows = [](const std::string& s) { return s.substr(s.find('\n') + 1); };
    CHECK(rows(a.csv) == rows(c.csv));
    // p_hat nonincreasing along h
    CHECK(a.csv.find("p_hat") != std::string::npos);
}

TEST_CASE("sweep: extreme levels saturate") {
    const ExperimentOutput out = run_sweep(sweep_cfg(1));
    // h = -20 row ends with p_hat 1, h = +20 row with p_hat 0
    CHECK(out.csv.find(",-20,40,40,1,") != std::string::npos);
    CHECK(out.csv.find(",20,40,0,0,") != std::string::npos);
}

TEST_CASE("certify: eps = 0 degenerates to h_inf = h_hat") {
    const Config cfg = Config::parse_string(
        "certify.d = 5\ncertify.ell0 = 2.5\ncertify.L1 = 100\ncertify.eps = 0\n"
        "certify.h_hat = 19\ncertify.A = 16.6\ncertify.B = 0.5\n"
        "certify.c6 = 1\ncertify.c7 = 2000\nseed = 1\n");
    const ExperimentOutput out = run_certify(cfg);
    CHECK(out.csv.find(",1,19\n") != std::string::npos);  // certified=1, h_inf = h_hat
    CHECK(out.report.find("certified=1") != std::string::npos);
    CHECK(out.report.find("h_inf=19\n") != std::string::npos);
}

TEST_CASE("green validation rows stay within bounds") {
    const Config cfg = Config::parse_string(
        "green.kind = bilaplacian\ngreen.d = 5\ngreen.radius = 1\ngreen.tol = 1e-7\n"
        "green.oracle_nmax = 1500\nseed = 2\n");
    const ExperimentOutput out = run_green_validate(cfg);
    CHECK(out.csv.find("within_bounds") != std::string::npos);
    // every row ends in ,1 (within bounds)
    size_t rows = 0, ok = 0, pos = 0;
    while ((pos = out.csv.find('\n', pos + 1)) != std::string::npos) {
        if (out.csv.compare(pos - 2, 2, ",1") == 0) ++ok;
        ++rows;
    }
    CHECK(ok >= 2);  // header+rows: all data rows within bounds
}

TEST_CASE("decoupling: tiny geometry runs and saturates under a huge sprinkle") {
    // eps larger than any field value makes the sprinkled marginals 1
    const DecouplingResult r = decoupling_experiment(5, 12, 1, 2.0, 50.0, 0.0, 30, 2, 3, 1);
    CHECK(r.p1_sprinkled == 1.0);
    CHECK(r.p2_sprinkled == 1.0);
    CHECK(r.slack == doctest::Approx(1.0 - r.p_joint));
    CHECK(r.n_splits == 2);
    CHECK(r.mean_split_residual < 1e-8);
    // infeasible separation is rejected
    CHECK_THROWS_AS(decoupling_experiment(5, 12, 3, 4.0, 0.5, 0.0, 10, 0, 3, 1),
                    PreconditionError);
}

TEST_SUITE_END();
