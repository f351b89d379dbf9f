#include "membrane/highdim.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <map>

#include "membrane/bessel.hpp"
#include "membrane/errors.hpp"
#include "membrane/green.hpp"
#include "membrane/noise.hpp"
#include "membrane/quadrature.hpp"
#include "membrane/stats.hpp"

namespace membrane {

namespace {

constexpr double kPi = 3.14159265358979323846;

// integrand [prod_{i<=3} e^{-(t/d)(1-cos theta_i)}] [e^{-t/d} I_0(t/d)]^{d-3},
// optionally weighted by t; every factor is in (0,1]. The Lipschitz variant
// replaces one angular factor by the bound on its theta-derivative,
// |sin th| e^{-z(1-cos th)} <= min(z, 0.6066 sqrt(z))/z * ... i.e. the factor
// z |sin th| e^{-z(1-cos th)} <= min(z, e^{-1/2} sqrt(z)).
double symbol_integrand(double t, const std::array<double, 3>& theta, int d, bool weighted,
                        bool lipschitz) {
    if (t <= 0) return 0.0;
    const double z = t / d;
    double v = std::pow(bessel_i_scaled(0, z), double(d - 3));
    if (lipschitz) {
        v *= std::min(z, 0.60653065971263342 * std::sqrt(z));
    } else {
        for (int i = 0; i < 3; ++i) v *= std::exp(-z * (1.0 - std::cos(theta[size_t(i)])));
    }
    if (weighted) v *= t;
    return v;
}

// tail of int_T^inf t^w [deriv envelope] (pi d/(8t))^{(d-3)/2} dt; the power
// of t beyond the envelope is w for symbols and w - 1/2 for the Lipschitz
// integrand (derivative envelope ~ sqrt(d/t)).
double symbol_tail(int d, double T, bool weighted, bool lipschitz) {
    const double half = 0.5 * (d - 3);
    const double w = (weighted ? 1.0 : 0.0) + (lipschitz ? -0.5 : 0.0);
    const double expo = half - 1.0 - w;  // tail ~ C T^{-expo}
    if (expo <= 0) throw PreconditionError("symbol quadrature: d too small for tail");
    double C = std::pow(kPi * d / 8.0, half);
    if (lipschitz) C *= 0.60653065971263342 * std::sqrt(double(d));
    return C * std::pow(T, -expo) / expo;
}

double symbol_eval(const std::array<double, 3>& theta, int d, double quad_tol, bool weighted,
                   bool lipschitz) {
    if (d < 8) throw PreconditionError("symbol: d >= 8 required");
    const double half = 0.5 * (d - 3);
    const double w = (weighted ? 1.0 : 0.0) + (lipschitz ? -0.5 : 0.0);
    const double expo = half - 1.0 - w;
    if (expo <= 0) throw PreconditionError("symbol: d too small for this integrand");
    double C = std::pow(kPi * d / 8.0, half) / expo;
    if (lipschitz) C *= 0.60653065971263342 * std::sqrt(double(d));
    double T = std::pow(2.0 * C / quad_tol, 1.0 / expo);
    T = std::max(T, 4.0 * double(d));
    const double tail = symbol_tail(d, T, weighted, lipschitz);
    const auto f = [&](double t) { return symbol_integrand(t, theta, d, weighted, lipschitz); };
    const QuadratureResult qr =
        integrate_adaptive(f, 0.0, T, std::max(quad_tol - tail, 0.25 * quad_tol), 6000);
    (void)qr.error;
    return qr.value;
}

SymbolGrid build_grid(int d, int M, double quad_tol, bool weighted) {
    if (M < 32 || M % 2 != 0) throw PreconditionError("symbol grid: M >= 32 and even");
    SymbolGrid g;
    g.d = d;
    g.M = M;
    g.quad_tol = quad_tol;
    const int half = M / 2;
    g.values.resize(size_t(half + 1) * size_t(half + 1) * size_t(half + 1));
    g.grid_min = 1e300;
    g.grid_max = -1e300;
    for (int k0 = 0; k0 <= half; ++k0)
        for (int k1 = 0; k1 <= half; ++k1)
            for (int k2 = 0; k2 <= half; ++k2) {
                const std::array<double, 3> theta = {2.0 * kPi * k0 / M, 2.0 * kPi * k1 / M,
                                                     2.0 * kPi * k2 / M};
                const double v = symbol_eval(theta, d, quad_tol, weighted, false);
                g.values[(size_t(k0) * size_t(half + 1) + size_t(k1)) * size_t(half + 1) +
                         size_t(k2)] = v;
                g.grid_min = std::min(g.grid_min, v);
                g.grid_max = std::max(g.grid_max, v);
            }
    // |d symbol / d theta_i| <= int w(t) min(z, 0.6066 sqrt(z)) I0bar^{d-3} dt
    g.lip_axis = symbol_eval({0, 0, 0}, d, quad_tol, weighted, true);
    g.slack = 3.0 * g.lip_axis * (kPi / M);
    return g;
}

}  // namespace

double SymbolGrid::at(int k0, int k1, int k2) const {
    const int half = M / 2;
    return values[(size_t(k0) * size_t(half + 1) + size_t(k1)) * size_t(half + 1) + size_t(k2)];
}

double symbol_g_on_K(const std::array<double, 3>& theta, int d, double quad_tol) {
    return symbol_eval(theta, d, quad_tol, false, false);
}

double symbol_G_on_K(const std::array<double, 3>& theta, int d, double quad_tol) {
    return symbol_eval(theta, d, quad_tol, true, false);
}

LatticeSumCheck symbol_g_lattice_sum(const std::array<double, 3>& theta, int d, int R,
                                     double quad_tol) {
    if (d < 8 || R < 1) throw PreconditionError("symbol_g_lattice_sum: bad arguments");
    // memoized canonical g values over the 3-d offset sub-box
    std::map<LatticeVector, double> memo;
    const QuadratureSpec spec = auto_spec_simple(d, quad_tol);
    LatticeSumCheck out;
    LatticeVector x(size_t(d), 0);
    for (int a = -R; a <= R; ++a)
        for (int b = -R; b <= R; ++b)
            for (int c = -R; c <= R; ++c) {
                x[0] = a;
                x[1] = b;
                x[2] = c;
                const LatticeVector key = canonical_offset(x);
                auto it = memo.find(key);
                if (it == memo.end()) it = memo.emplace(key, green_simple(x, spec).value).first;
                out.value += it->second *
                             std::cos(theta[0] * a + theta[1] * b + theta[2] * c);
            }
    // |g((x,0))| <= c_g / |x|^{d-2} with c_g taken from the computed shell
    // (empirical, reported through the bound's role as a cross-check only)
    double cg = 0.0;
    for (const auto& [key, val] : memo) {
        const double r = l2_norm(key);
        if (r >= R) cg = std::max(cg, val * std::pow(r, double(d - 2)));
    }
    // sum over |x| > R of c_g |x|^{2-d} in Z^3: integral comparison
    out.tail_bound = cg * 4.0 * kPi * std::pow(double(R), 5.0 - d) / (double(d) - 5.0) * 1.5;
    return out;
}

SymbolGrid build_symbol_grid_g(int d, int M, double quad_tol) {
    return build_grid(d, M, quad_tol, false);
}

SymbolGrid build_symbol_grid_G(int d, int M, double quad_tol) {
    return build_grid(d, M, quad_tol, true);
}

Sigma2Result sigma2_and_Gprime(int d, int M, double quad_tol) {
    Sigma2Result r;
    r.grid = build_symbol_grid_g(d, M, quad_tol);
    r.sigma2 = r.grid.min_certified();
    r.rho_Gprime = r.grid.max_certified() - r.sigma2;
    return r;
}

double rho_B_bound(int d, double quad_tol) {
    if (d < 8) throw PreconditionError("rho_B_bound: d >= 8 required");
    const int dm3 = d - 3;
    const LatticeVector zero(size_t(dm3), 0);
    const double G0 = green_bilaplacian(zero, quad_tol).value;
    const double g0 = green_simple(zero, quad_tol).value;
    const double ratio = double(d) / double(dm3);
    return ratio * ratio * (G0 - g0 * g0);
}

DecompositionReport decompose(int d, int M, double quad_tol) {
    DecompositionReport rep;
    rep.d = d;
    const Sigma2Result coarse = sigma2_and_Gprime(d, M, quad_tol);
    const Sigma2Result fine = sigma2_and_Gprime(d, 2 * M, quad_tol);
    rep.grid_min_M = coarse.grid.grid_min;
    rep.slack_M = coarse.grid.slack;
    rep.grid_min_2M = fine.grid.grid_min;
    rep.slack_2M = fine.grid.slack;
    rep.sigma2 = fine.sigma2;
    rep.gamma = rep.sigma2 * rep.sigma2;
    rep.rho_Gprime = fine.rho_Gprime;
    rep.rho_B = rho_B_bound(d, quad_tol);
    rep.rho_Phi_bound = 2.0 * rep.sigma2 * rep.rho_Gprime + rep.rho_Gprime * rep.rho_Gprime +
                        rep.rho_B;
    rep.d_times_rho_Phi = d * rep.rho_Phi_bound;

    const double ghat0 = fine.grid.at(0, 0, 0);
    const LatticeVector zero_dm3(size_t(d - 3), 0);
    rep.lazy_identity_residual =
        ghat0 - double(d) / double(d - 3) * green_simple(zero_dm3, quad_tol).value;

    const double Ghat0 = symbol_G_on_K({0, 0, 0}, d, quad_tol);
    rep.bhat0_lower = Ghat0 - ghat0 * ghat0;

    // Phi symbol positivity on the coarse grid (Ghat - gamma >= 0)
    const SymbolGrid Ggrid = build_symbol_grid_G(d, M, quad_tol);
    rep.phi_symbol_min = Ggrid.grid_min - rep.gamma;

    rep.valid = true;
    const auto fail = [&](const char* clause) {
        rep.valid = false;
        if (!rep.violated_clause.empty()) rep.violated_clause += ";";
        rep.violated_clause += clause;
    };
    const double tol = 64.0 * quad_tol + 1e-12;
    if (!(rep.gamma >= 0.25 - 1e-12 && rep.gamma <= 1.0 + 1e-12)) fail("gamma_range");
    if (!(rep.sigma2 >= 0.5 - 1e-12 && rep.sigma2 < 1.0)) fail("sigma2_range");
    if (!(rep.rho_Phi_bound > 0)) fail("rho_phi_positive");
    if (!(rep.bhat0_lower >= -tol && rep.bhat0_lower <= rep.rho_B + tol)) fail("bhat0_range");
    if (!(rep.phi_symbol_min >= -coarse.grid.slack - tol)) fail("phi_symbol_positivity");
    // sandwich: both certified intervals must contain the finer grid minimum
    if (!(fine.grid.grid_min >= coarse.grid.min_certified() - tol &&
          fine.grid.grid_min <= coarse.grid.grid_min + tol))
        fail("grid_sandwich");
    return rep;
}

std::vector<SlabCrossingRow> slab_experiment(int d, int L0, int W,
                                             const std::vector<double>& h_grid,
                                             uint64_t n_samples, uint64_t seed) {
    if (d < 8 || L0 < 0 || W < 2) throw PreconditionError("slab_experiment: bad arguments");
    if (!std::is_sorted(h_grid.begin(), h_grid.end()))
        throw PreconditionError("slab_experiment: h grid must be sorted");
    // slab window [-W,W]^2 x [0,L0] x {0}^{d-3}
    LatticeVector lo(size_t(d), 0), hi(size_t(d), 0);
    lo[0] = lo[1] = -W;
    hi[0] = hi[1] = W;
    hi[2] = L0;
    const Window slab(lo, hi);
    if (slab.size() > 20000) throw ResourceError("slab_experiment: window exceeds budget");

    // Gram matrix of G over the slab via memoized canonical quadrature
    std::map<LatticeVector, double> memo;
    const QuadratureSpec spec = auto_spec_bilaplacian(d, 1e-7);
    const size_t n = slab.size();
    Eigen::MatrixXd gram(n, n);
    {
        std::vector<LatticeVector> sites;
        sites.reserve(n);
        LatticeVector x = slab.lo();
        do {
            sites.push_back(x);
        } while (slab.next_site(x));
        LatticeVector delta(size_t(d), 0);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j <= i; ++j) {
                for (int a = 0; a < d; ++a) delta[size_t(a)] = sites[i][size_t(a)] - sites[j][size_t(a)];
                const LatticeVector key = canonical_offset(delta);
                auto it = memo.find(key);
                if (it == memo.end())
                    it = memo.emplace(key, green_bilaplacian(delta, spec).value).first;
                gram(Eigen::Index(i), Eigen::Index(j)) = it->second;
                gram(Eigen::Index(j), Eigen::Index(i)) = it->second;
            }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success)
        throw NumericError("slab_experiment: Gram factorization failed");

    std::vector<SlabCrossingRow> rows(h_grid.size());
    for (size_t k = 0; k < h_grid.size(); ++k) rows[k] = {h_grid[k], n_samples, 0, 0, 0, 1};
    std::vector<double> g(2 * (n / 2 + 1));
    Eigen::VectorXd z = Eigen::VectorXd(Eigen::Index(n));
    for (uint64_t s = 0; s < n_samples; ++s) {
        gaussian_blocks(seed, s, 0, n / 2 + 1, g.data());
        for (size_t i = 0; i < n; ++i) z[Eigen::Index(i)] = g[i];
        const Eigen::VectorXd phi = llt.matrixL() * z;
        // face-to-face crossing along axis 0 within the occupied slab
        bool prev = true;
        for (size_t k = 0; k < h_grid.size(); ++k) {
            const double h = h_grid[k];
            // union-find over occupied sites
            std::vector<int64_t> parent(n);
            for (size_t i = 0; i < n; ++i) parent[i] = int64_t(i);
            std::function<int64_t(int64_t)> find = [&](int64_t i) {
                while (parent[size_t(i)] != i) {
                    parent[size_t(i)] = parent[size_t(parent[size_t(i)])];
                    i = parent[size_t(i)];
                }
                return i;
            };
            LatticeVector x = slab.lo();
            LatticeVector y = LatticeVector(size_t(d));
            size_t flat = 0;
            do {
                if (phi[Eigen::Index(flat)] >= h) {
                    for (int a = 0; a < 3; ++a) {
                        y = x;
                        ++y[size_t(a)];
                        if (y[size_t(a)] <= slab.hi()[size_t(a)]) {
                            const size_t j = slab.index(y);
                            if (phi[Eigen::Index(j)] >= h) {
                                const int64_t ra = find(int64_t(flat)), rb = find(int64_t(j));
                                if (ra != rb) parent[size_t(std::max(ra, rb))] = std::min(ra, rb);
                            }
                        }
                    }
                }
                ++flat;
            } while (slab.next_site(x));
            std::map<int64_t, std::array<bool, 2>> faces;
            x = slab.lo();
            flat = 0;
            do {
                if (phi[Eigen::Index(flat)] >= h && (x[0] == -W || x[0] == W)) {
                    auto& f = faces[find(int64_t(flat))];
                    f[x[0] == -W ? 0 : 1] = true;
                }
                ++flat;
            } while (slab.next_site(x));
            bool cross = false;
            for (const auto& [root, f] : faces) cross = cross || (f[0] && f[1]);
            if (!prev && cross) throw NumericError("slab_experiment: coupled monotonicity violated");
            prev = cross;
            rows[k].n_success += cross ? 1 : 0;
        }
    }
    for (auto& r : rows) {
        r.p_hat = double(r.n_success) / double(r.n_samples);
        const BinomialCI ci = binomial_ci(r.n_success, r.n_samples, 0.99);
        r.ci_lo = ci.lo;
        r.ci_hi = ci.hi;
    }
    return rows;
}

}  // namespace membrane
