#include <doctest.h>

#include <cmath>

#include "membrane/finite_volume.hpp"
#include "membrane/green.hpp"
#include "membrane/rng.hpp"

using namespace membrane;

TEST_SUITE_BEGIN("finite_volume");

TEST_CASE("matrix route equals composed stencil route") {
    // Delta^2 restricted to the box, assembled explicitly vs applied as two
    // padded Laplacians
    const int d = 5, N = 1;
    const Eigen::SparseMatrix<double> A = bilaplacian_matrix(d, N);
    const DirichletBilaplacian op(d, N);
    const size_t n = op.size();
    RngStream rng(7, 0);
    std::vector<double> v(n), out;
    for (double& x : v) x = rng.gaussian();
    op.apply(v, out);
    Eigen::Map<const Eigen::VectorXd> vm(v.data(), Eigen::Index(n));
    const Eigen::VectorXd ref = A * vm;
    for (size_t i = 0; i < n; ++i)
        CHECK(out[i] == doctest::Approx(ref[Eigen::Index(i)]).epsilon(1e-13));
}

TEST_CASE("interior row of the stencil sums to zero") {
    // Delta^2 of a constant vanishes where the stencil does not see the boundary
    const int d = 5, N = 3;
    const DirichletBilaplacian op(d, N);
    std::vector<double> ones(op.size(), 1.0), out;
    op.apply(ones, out);
    CHECK(std::abs(out[op.box().index(LatticeVector(5, 0))]) < 1e-14);
    CHECK(std::abs(out[op.box().index(LatticeVector{1, 0, -1, 0, 0})]) < 1e-14);
}

TEST_CASE("G_N is symmetric and below G") {
    const int d = 5, N = 2;
    FiniteVolumeBox fv(d, N);
    const LatticeVector x{1, 0, 0, 0, 0}, y{0, -1, 1, 0, 0};
    CHECK(fv.dirichlet_value(x, y) == doctest::Approx(fv.dirichlet_value(y, x)).epsilon(1e-10));
    const double G0 = green_bilaplacian(LatticeVector(5, 0), 1e-9).value;
    CHECK(fv.dirichlet_value(LatticeVector(5, 0), LatticeVector(5, 0)) <= G0);
}

TEST_CASE("direct and iterative solvers agree") {
    const int d = 5, N = 1;
    FiniteVolumeBox fv(d, N);  // n = 243: direct
    CHECK(fv.uses_direct_solver());
    const std::vector<double> direct = fv.dirichlet_column(LatticeVector(5, 0));
    // same system through the DST-preconditioned CG
    const DirichletBilaplacian A(d, N);
    const DstBilaplacianInverse M(A.box());
    std::vector<double> rhs(A.size(), 0.0), pcg;
    rhs[A.box().index(LatticeVector(5, 0))] = 1.0;
    const CgResult cg = solve_dirichlet_bilaplacian(A, M, rhs, pcg, 1e-13, 1000);
    CHECK(cg.converged);
    for (size_t i = 0; i < direct.size(); ++i) CHECK(std::abs(direct[i] - pcg[i]) < 1e-9);
}

TEST_CASE("killed walk is dominated by the free walk") {
    const int d = 5, N = 2;
    FiniteVolumeBox fv(d, N);
    const GreenTable g_free = build_green_table(GreenKind::simple, d, 2 * N, 1e-9);
    const std::vector<double> col = fv.killed_column(LatticeVector(5, 0));
    LatticeVector y = fv.box().lo();
    size_t i = 0;
    do {
        CHECK(col[i] <= g_free.at(y) + 1e-9);
        CHECK(col[i] >= -1e-12);
        ++i;
    } while (fv.box().next_site(y));
}

TEST_CASE("bar G_N dominates the diagonal square term") {
    const int d = 5, N = 2;
    FiniteVolumeBox fv(d, N);
    for (const auto& x : canonical_offsets_upto(d, 1)) {
        const std::vector<double> col = fv.killed_column(x);
        const double gxx = col[fv.box().index(x)];
        CHECK(fv.bar_value(x, x) >= gxx * gxx);
    }
}

TEST_CASE("variance_xi is nonnegative and boundary-dominated") {
    const int d = 5, N = 2;
    const double G0 = green_bilaplacian(LatticeVector(5, 0), 1e-9).value;
    const double center = variance_xi(N, LatticeVector(5, 0), d);
    CHECK(center >= -1e-9);
    CHECK(center < 0.5 * G0);
    // corner of the box: psi mostly pinned, xi carries the bulk of the variance
    const double corner = variance_xi(N, LatticeVector(5, N), d);
    CHECK(corner > 3.0 * center);
    CHECK(corner > 0.4 * G0);
}

TEST_CASE("probe tables store full columns") {
    const int d = 5, N = 1;
    const std::vector<LatticeVector> probes = {LatticeVector(5, 0)};
    const GreenTable t = green_dirichlet_GN(N, d, probes);
    CHECK(t.pairs.size() == Window::box(d, N).size());
    const GreenTable tb = bar_GN(N, d, probes);
    CHECK(tb.at_pair(probes[0], probes[0]) > 0.0);
}

TEST_SUITE_END();
