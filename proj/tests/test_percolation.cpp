#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include "membrane/percolation.hpp"
#include "membrane/rng.hpp"

using namespace membrane;

TEST_SUITE_BEGIN("percolation");

namespace {

FieldSample make_sample(const Window& win, const std::vector<double>& values) {
    FieldSample s;
    s.geometry = GeometrySpec{GeometrySpec::Kind::exact_window, 5, 0};
    s.window = win;
    s.values = values;
    return s;
}

// BFS reference labeling: partition of occupied sites into components.
std::vector<int64_t> bfs_labels(const OccupancyGrid& g, Adjacency adj) {
    const Window& win = g.window;
    const int d = win.dim();
    std::vector<LatticeVector> steps;
    if (adj == Adjacency::nearest_neighbor) {
        for (int a = 0; a < d; ++a)
            for (int s : {-1, 1}) {
                LatticeVector e(size_t(d), 0);
                e[size_t(a)] = s;
                steps.push_back(e);
            }
    } else {
        LatticeVector e(size_t(d), -1);
        for (;;) {
            if (std::any_of(e.begin(), e.end(), [](int c) { return c != 0; })) steps.push_back(e);
            int a = d - 1;
            for (; a >= 0; --a) {
                if (++e[size_t(a)] <= 1) break;
                e[size_t(a)] = -1;
            }
            if (a < 0) break;
        }
    }
    std::vector<int64_t> label(win.size(), -1);
    for (size_t start = 0; start < win.size(); ++start) {
        if (!g.occupied[start] || label[start] >= 0) continue;
        label[start] = int64_t(start);
        std::deque<size_t> q{start};
        while (!q.empty()) {
            const size_t i = q.front();
            q.pop_front();
            const LatticeVector x = win.site(i);
            for (const auto& e : steps) {
                LatticeVector y = LatticeVector(size_t(d));
                bool ok = true;
                for (int a = 0; a < d && ok; ++a) {
                    y[size_t(a)] = x[size_t(a)] + e[size_t(a)];
                    if (y[size_t(a)] < win.lo()[size_t(a)] || y[size_t(a)] > win.hi()[size_t(a)]) {
                        if (g.periodic) {
                            const int ext = win.extent(a);
                            y[size_t(a)] =
                                win.lo()[size_t(a)] +
                                ((y[size_t(a)] - win.lo()[size_t(a)]) % ext + ext) % ext;
                        } else
                            ok = false;
                    }
                }
                if (!ok) continue;
                const size_t j = win.index(y);
                if (g.occupied[j] && label[j] < 0) {
                    label[j] = int64_t(start);
                    q.push_back(j);
                }
            }
        }
    }
    return label;
}

bool same_partition(const std::vector<int64_t>& a, const std::vector<int64_t>& b) {
    std::map<int64_t, int64_t> fwd, bwd;
    for (size_t i = 0; i < a.size(); ++i) {
        if ((a[i] < 0) != (b[i] < 0)) return false;
        if (a[i] < 0) continue;
        const auto f = fwd.emplace(a[i], b[i]);
        if (!f.second && f.first->second != b[i]) return false;
        const auto g = bwd.emplace(b[i], a[i]);
        if (!g.second && g.first->second != a[i]) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("thresholding: ties are occupied and level sets nest") {
    const Window win = Window::box(5, 0);
    const FieldSample s = make_sample(win, {1.5});
    CHECK(threshold(s, 1.5).at(LatticeVector(5, 0)));       // closed threshold
    CHECK_FALSE(threshold(s, 1.5000001).at(LatticeVector(5, 0)));
    CHECK(threshold(s, -1e30).at(LatticeVector(5, 0)));     // h below min: all occupied
    // nesting on a random grid
    const Window w2(LatticeVector{0, 0, 0, 0, 0}, LatticeVector{3, 3, 0, 0, 0});
    std::vector<double> vals(w2.size());
    RngStream rng(4, 0);
    for (double& v : vals) v = rng.gaussian();
    const FieldSample s2 = make_sample(w2, vals);
    const OccupancyGrid lo = threshold(s2, -0.3), hi = threshold(s2, 0.4);
    for (size_t i = 0; i < w2.size(); ++i)
        if (hi.occupied[i]) CHECK(lo.occupied[i]);
}

TEST_CASE("full box is one cluster; nn checkerboard is singletons") {
    const Window win(LatticeVector{0, 0, 0, 0, 0}, LatticeVector{2, 2, 2, 0, 0});
    std::vector<double> ones(win.size(), 1.0);
    const OccupancyGrid g = threshold(make_sample(win, ones), 0.0);
    CHECK(label_clusters(g, Adjacency::nearest_neighbor).count() == 1);

    std::vector<double> checker(win.size());
    LatticeVector x = win.lo();
    size_t i = 0;
    do {
        long parity = 0;
        for (int c : x) parity += c;
        checker[i++] = parity % 2 == 0 ? 1.0 : -1.0;
    } while (win.next_site(x));
    const OccupancyGrid cg = threshold(make_sample(win, checker), 0.0);
    const ClusterLabeling lab = label_clusters(cg, Adjacency::nearest_neighbor);
    CHECK(lab.count() == cg.count());
    for (const auto& c : lab.clusters) CHECK(c.size == 1);
}

TEST_CASE("union-find equals BFS: exhaustive 3x3x1 slabs in d=5") {
    const Window win(LatticeVector{0, 0, 0, 0, 0}, LatticeVector{2, 2, 0, 0, 0});
    REQUIRE(win.size() == 9);
    for (int mask = 0; mask < 512; ++mask) {
        std::vector<double> vals(9);
        for (int b = 0; b < 9; ++b) vals[size_t(b)] = (mask >> b) & 1 ? 1.0 : -1.0;
        const OccupancyGrid g = threshold(make_sample(win, vals), 0.0);
        for (Adjacency adj : {Adjacency::nearest_neighbor, Adjacency::star}) {
            const ClusterLabeling lab = label_clusters(g, adj);
            CHECK(same_partition(lab.label, bfs_labels(g, adj)));
        }
    }
}

TEST_CASE("union-find equals BFS: random 8^3 grids") {
    const Window win(LatticeVector{0, 0, 0, 0, 0}, LatticeVector{7, 7, 7, 0, 0});
    for (int rep = 0; rep < 200; ++rep) {
        RngStream rng(1234, uint64_t(rep));
        std::vector<double> vals(win.size());
        for (double& v : vals) v = rng.uniform() < 0.4 ? 1.0 : -1.0;
        const OccupancyGrid g = threshold(make_sample(win, vals), 0.0);
        const ClusterLabeling lab = label_clusters(g, Adjacency::nearest_neighbor);
        CHECK(same_partition(lab.label, bfs_labels(g, Adjacency::nearest_neighbor)));
        // size accounting
        size_t total = 0;
        for (const auto& c : lab.clusters) total += c.size;
        CHECK(total == g.count());
    }
}

TEST_CASE("exact l1 diameters match brute force") {
    const Window win(LatticeVector{0, 0, 0, 0, 0}, LatticeVector{4, 4, 4, 0, 0});
    for (int rep = 0; rep < 20; ++rep) {
        RngStream rng(77, uint64_t(rep));
        std::vector<double> vals(win.size());
        for (double& v : vals) v = rng.uniform() < 0.5 ? 1.0 : -1.0;
        const OccupancyGrid g = threshold(make_sample(win, vals), 0.0);
        const ClusterLabeling lab = label_clusters(g, Adjacency::nearest_neighbor);
        // collect members per cluster
        std::map<int64_t, std::vector<LatticeVector>> members;
        LatticeVector x = win.lo();
        size_t i = 0;
        do {
            if (lab.label[i] >= 0) members[lab.label[i]].push_back(x);
            ++i;
        } while (win.next_site(x));
        for (const auto& [root, pts] : members) {
            long best_l1 = 0;
            int best_linf = 0;
            for (size_t a = 0; a < pts.size(); ++a)
                for (size_t b = a; b < pts.size(); ++b) {
                    long l1 = 0;
                    int linf = 0;
                    for (int c = 0; c < 5; ++c) {
                        const int diff = std::abs(pts[a][size_t(c)] - pts[b][size_t(c)]);
                        l1 += diff;
                        linf = std::max(linf, diff);
                    }
                    best_l1 = std::max(best_l1, l1);
                    best_linf = std::max(best_linf, linf);
                }
            const ClusterStats& cs = lab.clusters[size_t(lab.cluster_of_label[size_t(root)])];
            CHECK(cs.diameter_l1 == best_l1);
            CHECK(cs.diameter_linf == best_linf);
        }
    }
}

TEST_CASE("crossing indicator basics") {
    const int L = 1;
    const Window win = Window::box(5, 2 * L + 1);
    std::vector<double> ones(win.size(), 1.0);
    const OccupancyGrid all = threshold(make_sample(win, ones), 0.0);
    CHECK(crossing_indicator(label_clusters(all, Adjacency::nearest_neighbor), L));
    // empty annulus blocks the crossing
    std::vector<double> blocked(win.size(), 1.0);
    LatticeVector x = win.lo();
    size_t i = 0;
    do {
        if (linf_norm(x) == L + 1) blocked[i] = -1.0;
        ++i;
    } while (win.next_site(x));
    const OccupancyGrid ann = threshold(make_sample(win, blocked), 0.0);
    CHECK_FALSE(crossing_indicator(label_clusters(ann, Adjacency::nearest_neighbor), L));
    CHECK_THROWS_AS(crossing_indicator(label_clusters(ann, Adjacency::nearest_neighbor), 5),
                    PreconditionError);
}

TEST_CASE("strong events") {
    const int L = 4;
    const Window win = Window::box(5, 2 * L);
    std::vector<double> ones(win.size(), 1.0);
    const OccupancyGrid all = threshold(make_sample(win, ones), 0.0);
    const StrongEvents e_all = strong_percolation_events(label_clusters(all, Adjacency::nearest_neighbor), L);
    CHECK(e_all.existence);
    CHECK(e_all.uniqueness);

    std::vector<double> empty(win.size(), -1.0);
    const OccupancyGrid none = threshold(make_sample(win, empty), 0.0);
    const StrongEvents e_none = strong_percolation_events(label_clusters(none, Adjacency::nearest_neighbor), L);
    CHECK_FALSE(e_none.existence);
    CHECK(e_none.uniqueness);  // vacuous

    // two occupied parallel lines through B(0,L), separated, not joined in B(0,2L)
    std::vector<double> lines(win.size(), -1.0);
    LatticeVector x = win.lo();
    size_t i = 0;
    do {
        const bool on_axis0 = std::abs(x[0]) <= L;
        const bool line1 = on_axis0 && x[1] == 0 && x[2] == 0 && x[3] == 0 && x[4] == 0;
        const bool line2 = on_axis0 && x[1] == 3 && x[2] == 0 && x[3] == 0 && x[4] == 0;
        if (line1 || line2) lines[i] = 1.0;
        ++i;
    } while (win.next_site(x));
    const OccupancyGrid two = threshold(make_sample(win, lines), 0.0);
    const StrongEvents e_two = strong_percolation_events(label_clusters(two, Adjacency::nearest_neighbor), L);
    CHECK(e_two.existence);       // each line has l1-diameter 2L >= L
    CHECK_FALSE(e_two.uniqueness);
}

TEST_CASE("connectivity and chemical distance") {
    const Window win(LatticeVector{0, 0, 0, 0, 0}, LatticeVector{4, 4, 0, 0, 0});
    std::vector<double> ones(win.size(), 1.0);
    const OccupancyGrid g = threshold(make_sample(win, ones), 0.0);
    const LatticeVector a{0, 0, 0, 0, 0}, b{3, 2, 0, 0, 0};
    const Connectivity same = connectivity_and_chemical(g, a, a, Adjacency::nearest_neighbor);
    CHECK(same.connected);
    CHECK(*same.distance == 0);
    const Connectivity nb =
        connectivity_and_chemical(g, a, LatticeVector{1, 0, 0, 0, 0}, Adjacency::nearest_neighbor);
    CHECK(*nb.distance == 1);
    const Connectivity far = connectivity_and_chemical(g, a, b, Adjacency::nearest_neighbor);
    CHECK(*far.distance == l1_norm(b));  // full occupancy: graph distance = l1
    // random grids: distance >= l1 whenever connected
    for (int rep = 0; rep < 30; ++rep) {
        RngStream rng(9, uint64_t(rep));
        std::vector<double> vals(win.size());
        for (double& v : vals) v = rng.uniform() < 0.6 ? 1.0 : -1.0;
        const OccupancyGrid rg = threshold(make_sample(win, vals), 0.0);
        const Connectivity c = connectivity_and_chemical(rg, a, b, Adjacency::nearest_neighbor);
        if (c.connected) CHECK(*c.distance >= l1_norm(b));
    }
}

TEST_CASE("translation covariance on the torus") {
    const TorusSampler ts(5, 6, 31);
    const FieldSample s = ts.sample(2);
    const OccupancyGrid g = threshold(s, 0.2);
    CHECK(g.periodic);
    const ClusterLabeling lab = label_clusters(g, Adjacency::nearest_neighbor);
    // shift the sample by one along axis 0
    FieldSample shifted = s;
    LatticeVector x = s.window.lo();
    size_t i = 0;
    do {
        LatticeVector y = x;
        y[0] = (y[0] + 1) % 6;
        shifted.values[s.window.index(y)] = s.values[i++];
    } while (s.window.next_site(x));
    const ClusterLabeling lab2 = label_clusters(threshold(shifted, 0.2), Adjacency::nearest_neighbor);
    std::vector<size_t> sizes1, sizes2;
    for (const auto& c : lab.clusters) sizes1.push_back(c.size);
    for (const auto& c : lab2.clusters) sizes2.push_back(c.size);
    std::sort(sizes1.begin(), sizes1.end());
    std::sort(sizes2.begin(), sizes2.end());
    CHECK(sizes1 == sizes2);
}

TEST_CASE("coupled sweep on shared torus samples") {
    const TorusSampler ts(5, 8, 11);
    const auto sample_fn = [&](uint64_t i) { return torus_window_view(ts.sample(i), 3); };
    const std::vector<double> grid = {-30.0, 0.0, 0.7, 30.0};
    const auto est = sweep_crossing(sample_fn, 1, grid, 60);
    CHECK(est[0].p_hat == 1.0);  // h far below the field minimum
    CHECK(est[3].p_hat == 0.0);
    for (size_t k = 1; k < est.size(); ++k) CHECK(est[k].n_success <= est[k - 1].n_success);
    for (const auto& e : est) {
        CHECK(e.ci.lo <= e.p_hat);
        CHECK(e.ci.hi >= e.p_hat);
    }
}

TEST_SUITE_END();
