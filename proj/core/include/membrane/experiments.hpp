#pragma once

#include <string>
#include <vector>

#include "membrane/config.hpp"
#include "membrane/renorm.hpp"

namespace membrane {

// Experiment runners behind the CLI subcommands. Each produces a
// deterministic CSV (byte-identical for identical (config, seed), any worker
// count); every row carries (seed, stream/config identity) so it can be
// regenerated in isolation.

struct ExperimentOutput {
    std::string csv;
    std::string report;  // optional flat key=value block (certify)
};

// green: build/validate a Green table (symmetry, decay, oracle cross-check).
ExperimentOutput run_green_validate(const Config& cfg);

// sample: covariance validation for one geometry.
ExperimentOutput run_sample_validate(const Config& cfg);

// sweep: coupled crossing-probability sweep on the torus.
ExperimentOutput run_sweep(const Config& cfg);

// decoupling: the Theorem 3.1 Monte Carlo (slack + H_eps diagnostics).
ExperimentOutput run_decoupling(const Config& cfg);

// certify: schedule + smallness + induction.
ExperimentOutput run_certify(const Config& cfg);

// decompose: Lemma 6.2 sweep.
ExperimentOutput run_decompose(const Config& cfg);

// slab: exploratory slab crossing frequencies.
ExperimentOutput run_slab(const Config& cfg);

// Decoupling internals shared with the acceptance suite.
struct DecouplingResult {
    int d = 5, N = 3, torus_side = 27;
    double r = 4.0, eps = 0.5, h = 0.0;
    uint64_t n_samples = 0;
    double p_joint = 0.0;        // P_h[A1 and A2]
    double p1_sprinkled = 0.0;   // P_{h-eps}[A1]
    double p2_sprinkled = 0.0;   // P_{h-eps}[A2]
    double slack = 0.0;          // product - joint
    double slack_ci_lo = 0.0, slack_ci_hi = 0.0;
    // decreasing-event variant (vacancy events at swapped levels)
    double dec_slack = 0.0, dec_slack_ci_lo = 0.0, dec_slack_ci_hi = 0.0;
    // H_eps diagnostics over n_splits conditional splits
    uint64_t n_splits = 0, n_heps_violations = 0;
    double p_heps_c = 0.0;        // empirical P[H_eps^c]
    double measured_var_max = 0.0;  // max sampled Var(xi_x), x in K2 probes
    double lemma33_bound = 0.0;     // 2 (2N+1)^d exp(-eps^2/(8 var_max))
    double mean_split_residual = 0.0;
};

DecouplingResult decoupling_experiment(int d, int torus_side, int N, double r, double eps,
                                       double h, uint64_t n_samples, uint64_t n_splits,
                                       uint64_t seed, int workers);

}  // namespace membrane
