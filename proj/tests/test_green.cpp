#include <doctest.h>

#include <cmath>

#include "membrane/errors.hpp"
#include "membrane/green.hpp"
#include "membrane/green_table.hpp"
#include "membrane/pathsum.hpp"

using namespace membrane;

TEST_SUITE_BEGIN("green");

namespace {
LatticeVector vec5(int a, int b, int c, int d_, int e) { return {a, b, c, d_, e}; }
}  // namespace

TEST_CASE("symmetry under signed permutations") {
    const QuadratureSpec spec = auto_spec_bilaplacian(5, 1e-9);
    const double v1 = green_bilaplacian(vec5(1, 1, 0, 0, 0), spec).value;
    const double v2 = green_bilaplacian(vec5(0, 1, 1, 0, 0), spec).value;
    const double v3 = green_bilaplacian(vec5(0, -1, 0, 0, 1), spec).value;
    CHECK(v1 == doctest::Approx(v2).epsilon(1e-12));
    CHECK(v1 == doctest::Approx(v3).epsilon(1e-12));
    const double g1 = green_simple(vec5(2, 0, -1, 0, 0), spec).value;
    const double g2 = green_simple(vec5(0, 0, 1, -2, 0), spec).value;
    CHECK(g1 == doctest::Approx(g2).epsilon(1e-12));
}

TEST_CASE("G(0) > g(0) > 1") {
    for (int d : {5, 7, 12}) {
        const LatticeVector zero(size_t(d), 0);
        const double g0 = green_simple(zero, 1e-9).value;
        const double G0 = green_bilaplacian(zero, 1e-9).value;
        CHECK(g0 > 1.0);
        CHECK(G0 > g0);
    }
}

TEST_CASE("high-dimension expansions") {
    // g(0) = 1 + 1/(2d) + O(1/d^2): at d = 100 the residual is ~0.0075
    {
        const LatticeVector zero(size_t(100), 0);
        const double g0 = green_simple(zero, 1e-10).value;
        CHECK(std::abs(100.0 * (g0 - 1.0) - 0.5) < 0.5);
    }
    // G(0) = 1 + 3/(2d) + o(1/d)
    {
        const LatticeVector zero(size_t(100), 0);
        const double G0 = green_bilaplacian(zero, 1e-10).value;
        CHECK(std::abs(100.0 * (G0 - 1.0) - 1.5) < 0.25);
    }
}

TEST_CASE("quadrature error bound brackets the oracle") {
    // d = 5 origin: partial sum <= G <= partial + tail
    const LatticeVector zero(size_t(5), 0);
    const GreenValue G = green_bilaplacian(zero, 1e-7);
    const PathsumResult ps = green_oracle_pathsum(zero, 3000, PathWeight::bilaplacian);
    CHECK(G.value >= ps.partial_sum - G.error);
    CHECK(G.value <= ps.partial_sum + ps.tail_bound + G.error);
    const GreenValue g = green_simple(zero, 1e-7);
    const PathsumResult psg = green_oracle_pathsum(zero, 3000, PathWeight::simple);
    CHECK(g.value >= psg.partial_sum - g.error);
    CHECK(g.value <= psg.partial_sum + psg.tail_bound + g.error);
}

TEST_CASE("convolution identity: partial sums increase to G") {
    // sum_{|z|inf <= R} g(x-z) g(z) converges upward to G(x)
    const int d = 5;
    const LatticeVector x = vec5(1, 0, 0, 0, 0);
    const GreenTable g_table = build_green_table(GreenKind::simple, d, 4, 1e-9);
    const double Gx = green_bilaplacian(x, 1e-9).value;
    double prev = 0.0;
    for (int R : {1, 2, 3}) {
        const Window win = Window::box(d, R);
        double sum = 0.0;
        LatticeVector z = win.lo();
        LatticeVector xz = LatticeVector(size_t(d));
        do {
            for (int a = 0; a < d; ++a) xz[size_t(a)] = x[size_t(a)] - z[size_t(a)];
            sum += g_table.at(xz) * g_table.at(z);
        } while (win.next_site(z));
        CHECK(sum > prev);
        CHECK(sum <= Gx + 1e-6);
        prev = sum;
    }
    CHECK(prev > 0.8 * Gx);  // bulk of the mass is local in d = 5
}

TEST_CASE("decay: G(x) |x|^{d-4} bounded on the window") {
    const GreenTable t = build_green_table(GreenKind::bilaplacian, 5, 4, 1e-8);
    double ratio_max = 0.0, value_at_origin = t.at(LatticeVector(5, 0));
    for (const auto& [off, e] : t.offsets) {
        const double r = l2_norm(off);
        ratio_max = std::max(ratio_max, e.value * std::max(1.0, r));
    }
    CHECK(ratio_max < 10.0 * value_at_origin);  // c_1 exists at this window scale
}

TEST_CASE("table cache round-trip") {
    const GreenTable t = build_green_table(GreenKind::bilaplacian, 5, 2, 1e-7);
    const std::string path = "/tmp/test_green_cache.mpgt";
    t.save(path);
    const GreenTable r = GreenTable::load(path);
    CHECK(r.kind == t.kind);
    CHECK(r.d == t.d);
    CHECK(r.radius == t.radius);
    CHECK(r.offsets.size() == t.offsets.size());
    for (const auto& [off, e] : t.offsets) {
        CHECK(r.at(off) == e.value);
        CHECK(r.entry(off).error == e.error);
    }
}

TEST_CASE("accuracy error carries the achieved bound") {
    // a highly oscillatory integrand cannot reach 1e-12 with 3 panel splits
    bool threw = false;
    try {
        integrate_adaptive([](double t) { return std::sin(4000.0 * t * t); }, 0.0, 40.0, 1e-12, 3);
    } catch (const AccuracyError& e) {
        threw = true;
        CHECK(e.achieved_bound > 1e-12);
    }
    CHECK(threw);
}

TEST_SUITE_END();
