#include "membrane/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "membrane/csv.hpp"
#include "membrane/errors.hpp"
#include "membrane/finite_volume.hpp"
#include "membrane/green.hpp"
#include "membrane/highdim.hpp"
#include "membrane/parallel.hpp"
#include "membrane/pathsum.hpp"
#include "membrane/percolation.hpp"
#include "membrane/rng.hpp"
#include "membrane/sampler.hpp"
#include "membrane/stats.hpp"

namespace membrane {

namespace {

std::string provenance_line(const char* schema, const Config& cfg, uint64_t seed) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "# schema=%s v1 seed=%llu config_hash=%016llx\n", schema,
                  (unsigned long long)seed, (unsigned long long)cfg.hash());
    return buf;
}

// occupied path from the center site of K = B(center, N) to its inner
// boundary shell (|x - center|_inf = N), inside K; increasing in the field.
bool box_crossing_event(const FieldSample& s, const LatticeVector& center, int N, double h) {
    const int d = s.window.dim();
    LatticeVector lo(center), hi(center);
    for (int a = 0; a < d; ++a) {
        lo[size_t(a)] -= N;
        hi[size_t(a)] += N;
    }
    const Window K(lo, hi);
    if (s.at(center) < h) return false;
    std::vector<uint8_t> seen(K.size(), 0);
    std::vector<size_t> stack{K.index(center)};
    seen[K.index(center)] = 1;
    LatticeVector x = LatticeVector(size_t(d));
    LatticeVector y = LatticeVector(size_t(d));
    while (!stack.empty()) {
        const size_t i = stack.back();
        stack.pop_back();
        x = K.site(i);
        int r = 0;
        for (int a = 0; a < d; ++a) r = std::max(r, std::abs(x[size_t(a)] - center[size_t(a)]));
        if (r == N) return true;
        for (int a = 0; a < d; ++a)
            for (int dir : {-1, 1}) {
                y = x;
                y[size_t(a)] += dir;
                if (!K.contains(y)) continue;
                const size_t j = K.index(y);
                if (seen[j]) continue;
                seen[j] = 1;
                if (s.at(y) >= h) stack.push_back(j);
            }
    }
    return false;
}

}  // namespace

DecouplingResult decoupling_experiment(int d, int axis0_side, int N, double r, double eps,
                                       double h, uint64_t n_samples, uint64_t n_splits,
                                       uint64_t seed, int workers) {
    DecouplingResult out;
    out.d = d;
    out.N = N;
    out.torus_side = axis0_side;
    out.r = r;
    out.eps = eps;
    out.h = h;
    out.n_samples = n_samples;
    out.n_splits = n_splits;

    const int U_radius = int(std::ceil((1.0 + r / 2.0) * N));
    const int cross_side = 2 * U_radius + 5;  // U plus double layer plus one spare
    const int gap_needed = int(std::floor(r * N)) + 1;
    if (axis0_side < 2 * (2 * N + 1) + 2 * gap_needed)
        throw PreconditionError("decoupling: separating axis too short for d_inf > rN both ways");
    LatticeVector sides(size_t(d), cross_side);
    sides[0] = axis0_side;

    // centers: K1 at axis0 = N, K2 across the balanced gaps; cross axes centered
    const int cc = U_radius + 2;
    LatticeVector c1(size_t(d), cc), c2(size_t(d), cc);
    c1[0] = N;
    c2[0] = N + (2 * N + 1) + (axis0_side - 2 * (2 * N + 1)) / 2;
    {
        // d_inf between the boxes, both ways around the separating axis
        const int fwd = (c2[0] - N) - (c1[0] + N);
        const int bwd = axis0_side - ((c2[0] + N) - (c1[0] - N));
        if (std::min(fwd, bwd) <= int(std::floor(r * N)))
            throw PreconditionError("decoupling: box separation below rN");
    }

    // event window: bounding box of K1 and K2
    LatticeVector lo(size_t(d), cc - N), hi(size_t(d), cc + N);
    lo[0] = c1[0] - N;
    hi[0] = c2[0] + N;
    const TorusSubsetSampler event_sampler(sides, Window(lo, hi), seed);

    struct Bits {
        uint8_t a1h, a2h, a1s, a2s;
    };
    std::vector<Bits> bits(n_samples);
    run_sharded(n_samples, workers, [&](size_t i) {
        const FieldSample s = event_sampler.sample(uint64_t(i));
        bits[i].a1h = box_crossing_event(s, c1, N, h) ? 1 : 0;
        bits[i].a2h = box_crossing_event(s, c2, N, h) ? 1 : 0;
        bits[i].a1s = box_crossing_event(s, c1, N, h - eps) ? 1 : 0;
        bits[i].a2s = box_crossing_event(s, c2, N, h - eps) ? 1 : 0;
    });
    uint64_t joint = 0, m1 = 0, m2 = 0, dec_joint = 0, dec_m1 = 0, dec_m2 = 0;
    for (const Bits& b : bits) {
        joint += b.a1h & b.a2h;
        m1 += b.a1s;
        m2 += b.a2s;
        // decreasing events B_i = not A_i: P_{h-eps}[B1 cap B2] <= P_h[B1] P_h[B2] + err
        dec_joint += (1 - b.a1s) & (1 - b.a2s);
        dec_m1 += 1 - b.a1h;
        dec_m2 += 1 - b.a2h;
    }
    const double n = double(n_samples);
    out.p_joint = double(joint) / n;
    out.p1_sprinkled = double(m1) / n;
    out.p2_sprinkled = double(m2) / n;
    out.slack = out.p1_sprinkled * out.p2_sprinkled - out.p_joint;
    out.dec_slack = double(dec_m1) / n * double(dec_m2) / n - double(dec_joint) / n;

    // percentile bootstrap over the indicator triples
    {
        const int n_boot = 1000;
        std::vector<double> slacks(n_boot), dec_slacks(n_boot);
        RngStream rng(seed, 0x64656373 /* "decs" */);
        for (int b = 0; b < n_boot; ++b) {
            uint64_t bj = 0, b1 = 0, b2 = 0, dj = 0, d1 = 0, d2 = 0;
            for (uint64_t i = 0; i < n_samples; ++i) {
                const Bits& t = bits[size_t(rng.below(n_samples))];
                bj += t.a1h & t.a2h;
                b1 += t.a1s;
                b2 += t.a2s;
                dj += (1 - t.a1s) & (1 - t.a2s);
                d1 += 1 - t.a1h;
                d2 += 1 - t.a2h;
            }
            slacks[size_t(b)] = double(b1) / n * double(b2) / n - double(bj) / n;
            dec_slacks[size_t(b)] = double(d1) / n * double(d2) / n - double(dj) / n;
        }
        std::sort(slacks.begin(), slacks.end());
        std::sort(dec_slacks.begin(), dec_slacks.end());
        const auto pick = [&](std::vector<double>& v, double q) {
            return v[size_t(q * double(v.size() - 1))];
        };
        out.slack_ci_lo = pick(slacks, 0.025);
        out.slack_ci_hi = pick(slacks, 0.975);
        out.dec_slack_ci_lo = pick(dec_slacks, 0.025);
        out.dec_slack_ci_hi = pick(dec_slacks, 0.975);
    }

    // H_eps diagnostics: conditional splits on U = B(c2, (1+r/2)N)
    if (n_splits > 0) {
        LatticeVector ulo(c2), uhi(c2);
        for (int a = 0; a < d; ++a) {
            ulo[size_t(a)] -= U_radius;
            uhi[size_t(a)] += U_radius;
        }
        const Window U(ulo, uhi);
        LatticeVector wlo(ulo), whi(uhi);
        for (int a = 0; a < d; ++a) {
            wlo[size_t(a)] -= 2;
            whi[size_t(a)] += 2;
        }
        const TorusSubsetSampler split_sampler(sides, Window(wlo, whi), seed);
        // probe sites in K2: center, a face midpoint, a full corner
        std::vector<LatticeVector> probes = {c2};
        {
            LatticeVector f(c2);
            f[0] += N;
            probes.push_back(f);
            LatticeVector corner(c2);
            for (int a = 0; a < d; ++a) corner[size_t(a)] += N;
            probes.push_back(corner);
        }
        std::vector<std::vector<double>> xi_probe(probes.size());
        std::vector<uint8_t> violated(n_splits, 0);
        std::vector<double> residuals(n_splits, 0.0);
        std::vector<std::vector<double>> probe_slots(n_splits);
        run_sharded(n_splits, workers, [&](size_t i) {
            const FieldSample s = split_sampler.sample(n_samples + uint64_t(i));
            const ConditionalSplit split = conditional_split(s, U, 1e-8);
            residuals[i] = split.stencil_residual;
            double sup = 0;
            LatticeVector x(c2);
            LatticeVector klo(c2), khi(c2);
            for (int a = 0; a < d; ++a) {
                klo[size_t(a)] -= N;
                khi[size_t(a)] += N;
            }
            const Window K2(klo, khi);
            x = K2.lo();
            do {
                sup = std::max(sup, std::abs(split.xi[s.window.index(x)]));
            } while (K2.next_site(x));
            violated[i] = sup > eps / 2 ? 1 : 0;
            probe_slots[i].resize(probes.size());
            for (size_t p = 0; p < probes.size(); ++p)
                probe_slots[i][p] = split.xi[s.window.index(probes[p])];
        });
        for (size_t p = 0; p < probes.size(); ++p) {
            xi_probe[p].resize(n_splits);
            for (size_t i = 0; i < n_splits; ++i) xi_probe[p][i] = probe_slots[i][p];
        }
        uint64_t viols = 0;
        double rsum = 0;
        for (size_t i = 0; i < n_splits; ++i) {
            viols += violated[i];
            rsum += residuals[i];
        }
        out.n_heps_violations = viols;
        out.p_heps_c = double(viols) / double(n_splits);
        out.mean_split_residual = rsum / double(n_splits);
        double vmax = 0;
        for (const auto& xs : xi_probe) vmax = std::max(vmax, mean_var(xs).var);
        out.measured_var_max = vmax;
        out.lemma33_bound =
            2.0 * std::pow(2.0 * N + 1.0, d) * std::exp(-eps * eps / (8.0 * vmax));
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV runners

ExperimentOutput run_green_validate(const Config& cfg) {
    const int d = int(cfg.get_int("green.d", 5));
    const int radius = int(cfg.get_int("green.radius", 2));
    const double tol = cfg.get_real("green.tol", 1e-8);
    const uint64_t seed = cfg.get_u64("seed", 1);
    const std::string kind_s = cfg.get_string("green.kind", "bilaplacian");
    const GreenKind kind = kind_s == "simple" ? GreenKind::simple : GreenKind::bilaplacian;
    const int oracle_n = int(cfg.get_int("green.oracle_nmax", 4000));

    const GreenTable table = build_green_table(kind, d, radius, tol);
    const PathsumOracle oracle(d, oracle_n);
    CsvWriter csv({"kind", "d", "offset", "value", "error_bound", "oracle_partial", "oracle_tail",
                   "within_bounds"});
    for (const auto& [off, entry] : table.offsets) {
        std::string offset_s;
        for (size_t i = 0; i < off.size(); ++i)
            offset_s += (i ? ";" : "") + std::to_string(off[i]);
        const PathsumResult ps = oracle.evaluate(
            off, kind == GreenKind::simple ? PathWeight::simple : PathWeight::bilaplacian);
        const bool ok = entry.value >= ps.partial_sum - entry.error &&
                        entry.value <= ps.partial_sum + ps.tail_bound + entry.error;
        csv.cell(green_kind_name(kind))
            .cell(int64_t(d))
            .cell(offset_s)
            .cell(entry.value)
            .cell(entry.error)
            .cell(ps.partial_sum)
            .cell(ps.tail_bound)
            .cell(ok);
        csv.end_row();
    }
    return {provenance_line("green", cfg, seed) + csv.str(), ""};
}

ExperimentOutput run_sample_validate(const Config& cfg) {
    const int d = int(cfg.get_int("sample.d", 5));
    const std::string geo = cfg.get_string("sample.geometry", "torus");
    const int param = int(cfg.get_int("sample.param", 8));
    const uint64_t count = cfg.get_u64("sample.count", 2000);
    const uint64_t seed = cfg.get_u64("seed", 1);
    const int workers = int(cfg.get_int("workers", 1));

    // probes: canonical offsets |delta|_inf <= 2 against the geometry's origin
    std::vector<LatticeVector> probes;
    for (const LatticeVector& c : canonical_offsets_upto(d, 2))
        if (linf_norm(c) <= 2) probes.push_back(c);

    CsvWriter csv({"geometry", "d", "param", "probe", "analytic", "empirical", "se", "z"});
    std::vector<std::vector<double>> at_probe(probes.size(), std::vector<double>(count));
    std::vector<std::vector<double>> at_origin(probes.size(), std::vector<double>(count));
    std::vector<double> analytic(probes.size());

    const auto record = [&](const std::function<FieldSample(uint64_t)>& gen) {
        std::vector<FieldSample> tmp(1);
        run_sharded(count, workers, [&](size_t i) {
            const FieldSample s = gen(uint64_t(i));
            for (size_t p = 0; p < probes.size(); ++p) {
                at_origin[p][i] = s.at(LatticeVector(size_t(d), 0));
                at_probe[p][i] = s.at(probes[p]);
            }
        });
    };

    if (geo == "torus") {
        TorusSampler sampler(d, param, seed);
        for (size_t p = 0; p < probes.size(); ++p) analytic[p] = sampler.covariance(probes[p]);
        record([&](uint64_t i) { return sampler.sample(i); });
    } else if (geo == "dirichlet") {
        DirichletBoxSampler sampler(d, param, seed);
        FiniteVolumeBox fv(d, param);
        const std::vector<double> col = fv.dirichlet_column(LatticeVector(size_t(d), 0));
        for (size_t p = 0; p < probes.size(); ++p) analytic[p] = col[fv.box().index(probes[p])];
        record([&](uint64_t i) { return sampler.sample(i); });
    } else if (geo == "window") {
        ExactWindowSampler sampler(d, param, seed);
        const QuadratureSpec spec = auto_spec_bilaplacian(d, 1e-8);
        for (size_t p = 0; p < probes.size(); ++p)
            analytic[p] = green_bilaplacian(probes[p], spec).value;
        record([&](uint64_t i) { return sampler.sample(i); });
    } else {
        throw PreconditionError("sample.geometry must be torus|dirichlet|window");
    }

    for (size_t p = 0; p < probes.size(); ++p) {
        if (linf_norm(probes[p]) > param) continue;
        const CovEstimate ce = covariance(at_origin[p], at_probe[p]);
        std::string probe_s;
        for (size_t i = 0; i < probes[p].size(); ++i)
            probe_s += (i ? ";" : "") + std::to_string(probes[p][i]);
        csv.cell(geo)
            .cell(int64_t(d))
            .cell(int64_t(param))
            .cell(probe_s)
            .cell(analytic[p])
            .cell(ce.cov)
            .cell(ce.se)
            .cell(ce.se > 0 ? (ce.cov - analytic[p]) / ce.se : 0.0);
        csv.end_row();
    }
    return {provenance_line("sample", cfg, seed) + csv.str(), ""};
}

ExperimentOutput run_sweep(const Config& cfg) {
    const int d = int(cfg.get_int("sweep.d", 5));
    const int L_box = int(cfg.get_int("sweep.L_box", 16));
    const int L = int(cfg.get_int("sweep.L", 3));
    std::vector<double> h_grid = cfg.get_real_list("sweep.h");
    const uint64_t n = cfg.get_u64("sweep.samples", 200);
    const uint64_t seed = cfg.get_u64("seed", 1);
    const int workers = int(cfg.get_int("workers", 1));
    if (4 * L + 3 >= L_box)
        throw PreconditionError("sweep: need 4L+3 < L_box to avoid wraparound");
    std::sort(h_grid.begin(), h_grid.end());

    const TorusSampler sampler(d, L_box, seed);
    std::vector<std::vector<uint8_t>> ind(n, std::vector<uint8_t>(h_grid.size()));
    run_sharded(n, workers, [&](size_t i) {
        const FieldSample view = torus_window_view(sampler.sample(uint64_t(i)), 2 * L + 1);
        bool prev = true;
        for (size_t k = 0; k < h_grid.size(); ++k) {
            const OccupancyGrid grid = threshold(view, h_grid[k]);
            const bool c = crossing_indicator(label_clusters(grid, Adjacency::nearest_neighbor), L);
            if (!prev && c) throw NumericError("sweep: coupled monotonicity violated");
            prev = c;
            ind[i][k] = c ? 1 : 0;
        }
    });
    CsvWriter csv({"d", "L_box", "L", "h", "n_samples", "n_success", "p_hat", "ci_lo", "ci_hi",
                   "seed"});
    for (size_t k = 0; k < h_grid.size(); ++k) {
        uint64_t succ = 0;
        for (uint64_t i = 0; i < n; ++i) succ += ind[i][k];
        const BinomialCI ci = binomial_ci(succ, n, 0.99);
        csv.cell(int64_t(d))
            .cell(int64_t(L_box))
            .cell(int64_t(L))
            .cell(h_grid[k])
            .cell(n)
            .cell(succ)
            .cell(double(succ) / double(n))
            .cell(ci.lo)
            .cell(ci.hi)
            .cell(seed);
        csv.end_row();
    }
    return {provenance_line("sweep", cfg, seed) + csv.str(), ""};
}

ExperimentOutput run_decoupling(const Config& cfg) {
    const int d = int(cfg.get_int("decoupling.d", 5));
    const int axis0 = int(cfg.get_int("decoupling.axis0", 40));
    const int N = int(cfg.get_int("decoupling.N", 3));
    const double r = cfg.get_real("decoupling.r", 4.0);
    const double eps = cfg.get_real("decoupling.eps", 0.5);
    const double h = cfg.get_real("decoupling.h", 0.0);
    const uint64_t n = cfg.get_u64("decoupling.samples", 2000);
    const uint64_t splits = cfg.get_u64("decoupling.splits", 16);
    const uint64_t seed = cfg.get_u64("seed", 1);
    const int workers = int(cfg.get_int("workers", 1));

    const DecouplingResult res =
        decoupling_experiment(d, axis0, N, r, eps, h, n, splits, seed, workers);
    CsvWriter csv({"d", "N", "r", "eps", "h", "n", "lhs", "rhs_product", "slack", "slack_ci_lo",
                   "slack_ci_hi", "p_Heps_c", "lemma33_bound"});
    csv.cell(int64_t(d))
        .cell(int64_t(N))
        .cell(r)
        .cell(eps)
        .cell(h)
        .cell(n)
        .cell(res.p_joint)
        .cell(res.p1_sprinkled * res.p2_sprinkled)
        .cell(res.slack)
        .cell(res.slack_ci_lo)
        .cell(res.slack_ci_hi)
        .cell(res.p_heps_c)
        .cell(res.lemma33_bound);
    csv.end_row();
    return {provenance_line("decoupling", cfg, seed) + csv.str(), ""};
}

ExperimentOutput run_certify(const Config& cfg) {
    const int d = int(cfg.get_int("certify.d", 5));
    const double ell0 = cfg.get_real("certify.ell0", 2.5);
    const int L1 = int(cfg.get_int("certify.L1", 100));
    const double eps = cfg.get_real("certify.eps", 0.1);
    const double h_hat = cfg.get_real("certify.h_hat", 19.0);
    const double A = cfg.get_real("certify.A", 16.6);
    const double B = cfg.get_real("certify.B", 0.5);
    const std::string mode_s = cfg.get_string("certify.mode", "conditional");
    const uint64_t seed = cfg.get_u64("seed", 1);

    InductionInputs in;
    in.schedule = build_schedule(d, ell0, L1, eps, h_hat);
    in.A = A;
    in.B = B;
    in.mode = mode_s == "empirical" ? CertMode::empirical : CertMode::conditional;
    if (in.mode == CertMode::conditional) {
        in.c6 = cfg.get_real("certify.c6", 1.0);
        in.c7 = cfg.get_real("certify.c7", 2000.0);
    } else {
        in.emp_C = cfg.get_real("certify.emp_C");
        in.emp_c3 = cfg.get_real("certify.emp_c3");
    }
    const std::string p1_src = cfg.get_string("certify.p1", "borell_tis");
    if (p1_src == "borell_tis") {
        in.p1_bound = p1_bound_borell_tis(h_hat, L1, d);
        in.p1_provenance = P1Provenance::borell_tis;
    } else {
        in.p1_bound = cfg.get_real("certify.p1_value");
        in.p1_provenance = P1Provenance::monte_carlo;
        in.p1_confidence = cfg.get_real("certify.p1_confidence", 0.99);
    }
    const CertificateReport rep = run_induction(in);
    CsvWriter csv({"mode", "d", "ell0", "L1", "eps", "h_hat", "A", "B", "p1_bound", "certified",
                   "h_inf"});
    csv.cell(std::string(mode_s))
        .cell(int64_t(d))
        .cell(ell0)
        .cell(int64_t(L1))
        .cell(eps)
        .cell(h_hat)
        .cell(A)
        .cell(B)
        .cell(in.p1_bound)
        .cell(rep.certified)
        .cell(double(rep.h_inf));
    csv.end_row();
    return {provenance_line("certify", cfg, seed) + csv.str(), rep.serialize()};
}

ExperimentOutput run_decompose(const Config& cfg) {
    std::vector<double> dd = cfg.has("decompose.d_list")
                                 ? cfg.get_real_list("decompose.d_list")
                                 : std::vector<double>{8, 12, 16, 24, 32};
    const int M = int(cfg.get_int("decompose.M", 32));
    const double tol = cfg.get_real("decompose.tol", 1e-8);
    const uint64_t seed = cfg.get_u64("seed", 1);
    CsvWriter csv({"d", "sigma2", "gamma", "rho_Gprime", "rho_B_bound", "rho_Phi_bound",
                   "d_times_rho_Phi"});
    for (double dv : dd) {
        const DecompositionReport rep = decompose(int(dv), M, tol);
        if (!rep.valid)
            throw NumericError("decompose: report invalid: " + rep.violated_clause);
        csv.cell(int64_t(rep.d))
            .cell(rep.sigma2)
            .cell(rep.gamma)
            .cell(rep.rho_Gprime)
            .cell(rep.rho_B)
            .cell(rep.rho_Phi_bound)
            .cell(rep.d_times_rho_Phi);
        csv.end_row();
    }
    return {provenance_line("decompose", cfg, seed) + csv.str(), ""};
}

ExperimentOutput run_slab(const Config& cfg) {
    const int d = int(cfg.get_int("slab.d", 9));
    const int L0 = int(cfg.get_int("slab.L0", 2));
    const int W = int(cfg.get_int("slab.W", 6));
    std::vector<double> h_grid = cfg.has("slab.h") ? cfg.get_real_list("slab.h")
                                                   : std::vector<double>{0.0, 0.1, 0.2};
    const uint64_t n = cfg.get_u64("slab.samples", 200);
    const uint64_t seed = cfg.get_u64("seed", 1);
    std::sort(h_grid.begin(), h_grid.end());
    const auto rows = slab_experiment(d, L0, W, h_grid, n, seed);
    CsvWriter csv({"d", "L0", "W", "h", "n_samples", "n_success", "p_hat", "ci_lo", "ci_hi",
                   "exploratory"});
    for (const auto& r : rows) {
        csv.cell(int64_t(d))
            .cell(int64_t(L0))
            .cell(int64_t(W))
            .cell(r.h)
            .cell(r.n_samples)
            .cell(r.n_success)
            .cell(r.p_hat)
            .cell(r.ci_lo)
            .cell(r.ci_hi)
            .cell(true);
        csv.end_row();
    }
    return {provenance_line("slab", cfg, seed) + csv.str(), ""};
}

}  // namespace membrane
