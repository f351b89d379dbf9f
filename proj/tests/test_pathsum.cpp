#include <doctest.h>

#include <cmath>
#include <vector>

#include "membrane/errors.hpp"
#include "membrane/pathsum.hpp"

using namespace membrane;

TEST_SUITE_BEGIN("pathsum");

namespace {

// Reference: literal window DP convolving the uniform step law on Z^d.
// Exact for n <= radius of the window; only feasible for small n.
std::vector<double> window_dp(const LatticeVector& x, int d, int n_max) {
    const Window win = Window::box(d, n_max);
    std::vector<double> cur(win.size(), 0.0), next(win.size());
    cur[win.index(LatticeVector(size_t(d), 0))] = 1.0;
    std::vector<double> out(size_t(n_max) + 1, 0.0);
    out[0] = x == LatticeVector(size_t(d), 0) ? 1.0 : 0.0;
    const double p = 1.0 / (2.0 * d);
    for (int n = 1; n <= n_max; ++n) {
        std::fill(next.begin(), next.end(), 0.0);
        LatticeVector y = win.lo();
        LatticeVector z = LatticeVector(size_t(d));
        size_t i = 0;
        do {
            if (cur[i] != 0.0) {
                for (int a = 0; a < d; ++a)
                    for (int s : {-1, 1}) {
                        z = y;
                        z[size_t(a)] += s;
                        if (win.contains(z)) next[win.index(z)] += p * cur[i];
                    }
            }
            ++i;
        } while (win.next_site(y));
        cur.swap(next);
        if (win.contains(x)) out[size_t(n)] = cur[win.index(x)];
    }
    return out;
}

}  // namespace

TEST_CASE("trivial end points") {
    const LatticeVector zero(5, 0);
    const PathsumResult r0 = green_oracle_pathsum(zero, 0, PathWeight::bilaplacian);
    CHECK(r0.partial_sum == 1.0);

    LatticeVector e1(5, 0);
    e1[0] = 1;
    const PathsumResult r1 = green_oracle_pathsum(e1, 1, PathWeight::bilaplacian);
    CHECK(r1.partial_sum == doctest::Approx(0.2).epsilon(1e-15));  // 2 * 1/(2d), d = 5
}

TEST_CASE("matches the literal window DP") {
    const int d = 5, n_ref = 9;
    const PathsumOracle oracle(d, n_ref);
    for (const auto& x : std::vector<LatticeVector>{
             {0, 0, 0, 0, 0}, {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {2, 0, 0, 0, 0}, {2, 1, 1, 0, 0}}) {
        const std::vector<double> ref = window_dp(x, d, n_ref);
        const std::vector<double> got = oracle.occupation_sequence(x);
        for (int n = 0; n <= n_ref; ++n)
            CHECK(got[size_t(n)] == doctest::Approx(ref[size_t(n)]).epsilon(1e-12));
    }
}

TEST_CASE("partial sums nondecreasing in n_max") {
    LatticeVector x(5, 0);
    x[0] = 1;
    double prev = -1.0;
    for (int n : {1, 4, 16, 64}) {
        const PathsumResult r = green_oracle_pathsum(x, n, PathWeight::bilaplacian);
        CHECK(r.partial_sum >= prev);
        prev = r.partial_sum;
    }
}

TEST_CASE("tail bound decreases and the CLT constant stabilizes") {
    const LatticeVector zero(5, 0);
    const PathsumResult a = green_oracle_pathsum(zero, 500, PathWeight::bilaplacian);
    const PathsumResult b = green_oracle_pathsum(zero, 4000, PathWeight::bilaplacian);
    CHECK(b.tail_bound < a.tail_bound);
    CHECK(a.clt_constant > 0.5);
    CHECK(a.clt_constant < 2.0);  // d = 5: limit is 2 (5/(2 pi))^{5/2} ~ 1.13
    CHECK(b.clt_constant == doctest::Approx(a.clt_constant).epsilon(0.05));
}

TEST_CASE("memory budget is enforced") {
    CHECK_THROWS_AS(green_oracle_pathsum(LatticeVector(5, 0), 100000000, PathWeight::simple,
                                         uint64_t(1) << 20),
                    ResourceError);
}

TEST_SUITE_END();
