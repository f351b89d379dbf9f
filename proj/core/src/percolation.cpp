#include "membrane/percolation.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "membrane/errors.hpp"

namespace membrane {

namespace {

// Neighbor offsets for the declared adjacency: 2d axis steps, or the full
// l_inf-1 shell (3^d - 1 "star" steps).
std::vector<LatticeVector> neighbor_steps(int d, Adjacency adj) {
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
    return steps;
}

struct UnionFind {
    std::vector<int64_t> parent;
    explicit UnionFind(size_t n) : parent(n, -1) {}
    int64_t find(int64_t i) {
        int64_t root = i;
        while (parent[size_t(root)] != root) root = parent[size_t(root)];
        while (parent[size_t(i)] != root) {  // path compression
            const int64_t next = parent[size_t(i)];
            parent[size_t(i)] = root;
            i = next;
        }
        return root;
    }
    void unite(int64_t a, int64_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        // canonical: smaller flat index wins
        if (a < b)
            parent[size_t(b)] = a;
        else
            parent[size_t(a)] = b;
    }
};

bool step_site(const Window& win, bool periodic, const LatticeVector& x, const LatticeVector& e,
               LatticeVector& out) {
    const int d = win.dim();
    for (int a = 0; a < d; ++a) {
        int v = x[size_t(a)] + e[size_t(a)];
        if (v < win.lo()[size_t(a)] || v > win.hi()[size_t(a)]) {
            if (!periodic) return false;
            const int extent = win.extent(a);
            v = win.lo()[size_t(a)] + ((v - win.lo()[size_t(a)]) % extent + extent) % extent;
        }
        out[size_t(a)] = v;
    }
    return true;
}

}  // namespace

size_t OccupancyGrid::count() const {
    size_t c = 0;
    for (uint8_t o : occupied) c += o;
    return c;
}

OccupancyGrid threshold(const FieldSample& sample, double h) {
    OccupancyGrid g;
    g.window = sample.window;
    g.level = h;
    g.periodic = sample.geometry.kind == GeometrySpec::Kind::torus &&
                 sample.window.size() == sample.geometry.window().size();
    g.occupied.resize(sample.values.size());
    for (size_t i = 0; i < sample.values.size(); ++i)
        g.occupied[i] = sample.values[i] >= h ? 1 : 0;
    return g;
}

ClusterLabeling label_clusters(const OccupancyGrid& grid, Adjacency adjacency) {
    const Window& win = grid.window;
    const int d = win.dim();
    const size_t n = win.size();
    UnionFind uf(n);
    for (size_t i = 0; i < n; ++i) uf.parent[i] = int64_t(i);
    const auto steps = neighbor_steps(d, adjacency);
    LatticeVector x = win.lo();
    LatticeVector y = LatticeVector(size_t(d));
    size_t flat = 0;
    do {
        if (grid.occupied[flat]) {
            for (const auto& e : steps) {
                if (!step_site(win, grid.periodic, x, e, y)) continue;
                const size_t j = win.index(y);
                if (j > flat && grid.occupied[j]) uf.unite(int64_t(flat), int64_t(j));
            }
        }
        ++flat;
    } while (win.next_site(x));

    ClusterLabeling out;
    out.window = win;
    out.adjacency = adjacency;
    out.label.assign(n, -1);
    out.cluster_of_label.assign(n, -1);
    // first pass: canonical roots
    for (size_t i = 0; i < n; ++i)
        if (grid.occupied[i]) out.label[i] = uf.find(int64_t(i));
    // second pass: per-cluster stats (size, exact l1/linf diameters)
    const int n_sign = 1 << d;
    std::vector<std::vector<long>> smax;  // per cluster, per sign pattern: max <s, x>
    std::vector<LatticeVector> mins, maxs;
    x = win.lo();
    flat = 0;
    do {
        const int64_t lb = out.label[flat];
        if (lb >= 0) {
            int64_t ci = out.cluster_of_label[size_t(lb)];
            if (ci < 0) {
                ci = int64_t(out.clusters.size());
                out.cluster_of_label[size_t(lb)] = ci;
                out.clusters.push_back({size_t(lb), 0, 0, 0});
                smax.emplace_back(size_t(n_sign), std::numeric_limits<long>::min());
                mins.push_back(x);
                maxs.push_back(x);
            }
            ClusterStats& cs = out.clusters[size_t(ci)];
            cs.size += 1;
            for (int a = 0; a < d; ++a) {
                mins[size_t(ci)][size_t(a)] = std::min(mins[size_t(ci)][size_t(a)], x[size_t(a)]);
                maxs[size_t(ci)][size_t(a)] = std::max(maxs[size_t(ci)][size_t(a)], x[size_t(a)]);
            }
            for (int s = 0; s < n_sign; ++s) {
                long dot = 0;
                for (int a = 0; a < d; ++a) dot += ((s >> a) & 1 ? 1L : -1L) * long(x[size_t(a)]);
                smax[size_t(ci)][size_t(s)] = std::max(smax[size_t(ci)][size_t(s)], dot);
            }
        }
        ++flat;
    } while (win.next_site(x));
    for (size_t ci = 0; ci < out.clusters.size(); ++ci) {
        int linf = 0;
        for (int a = 0; a < d; ++a)
            linf = std::max(linf, maxs[ci][size_t(a)] - mins[ci][size_t(a)]);
        out.clusters[ci].diameter_linf = linf;
        // max_{u,v in C} |u - v|_1 = max_s (max <s,u> + max <-s,v>)
        long l1 = 0;
        for (int s = 0; s < n_sign; ++s)
            l1 = std::max(l1, smax[ci][size_t(s)] + smax[ci][size_t(n_sign - 1 - s)]);
        out.clusters[ci].diameter_l1 = l1;
    }
    return out;
}

bool crossing_indicator(const ClusterLabeling& labeling, int L) {
    const Window& win = labeling.window;
    const int d = win.dim();
    for (int a = 0; a < d; ++a)
        if (win.lo()[size_t(a)] > -(2 * L + 1) || win.hi()[size_t(a)] < 2 * L + 1)
            throw PreconditionError("crossing_indicator: window must contain B(0,2L+1)");
    const size_t nc = labeling.count();
    std::vector<uint8_t> hits_inner(nc, 0), hits_outer(nc, 0);
    LatticeVector x = win.lo();
    size_t flat = 0;
    do {
        const int64_t ci = labeling.cluster_index(flat);
        if (ci >= 0) {
            const int r = linf_norm(x);
            if (r <= L) hits_inner[size_t(ci)] = 1;
            if (r == 2 * L + 1) {
                // outer boundary of B(0,2L): exactly one coordinate sticks out
                int out_cnt = 0;
                for (int a = 0; a < d; ++a)
                    if (std::abs(x[size_t(a)]) == 2 * L + 1) ++out_cnt;
                if (out_cnt == 1) hits_outer[size_t(ci)] = 1;
            }
        }
        ++flat;
    } while (win.next_site(x));
    for (size_t c = 0; c < nc; ++c)
        if (hits_inner[c] && hits_outer[c]) return true;
    return false;
}

StrongEvents strong_percolation_events(const ClusterLabeling& labeling, int L) {
    const Window& win = labeling.window;
    const int d = win.dim();
    for (int a = 0; a < d; ++a)
        if (win.lo()[size_t(a)] > -2 * L || win.hi()[size_t(a)] < 2 * L)
            throw PreconditionError("strong_percolation_events: window must contain B(0,2L)");
    const size_t nc = labeling.count();
    std::vector<uint8_t> meets_inner(nc, 0);
    LatticeVector x = win.lo();
    size_t flat = 0;
    do {
        const int64_t ci = labeling.cluster_index(flat);
        if (ci >= 0 && linf_norm(x) <= L) meets_inner[size_t(ci)] = 1;
        ++flat;
    } while (win.next_site(x));
    StrongEvents ev;
    ev.uniqueness = true;
    int64_t big_label = -1;
    for (size_t c = 0; c < nc; ++c) {
        if (!meets_inner[c]) continue;
        const ClusterStats& cs = labeling.clusters[c];
        if (cs.diameter_l1 >= L) ev.existence = true;
        if (10 * cs.diameter_l1 >= L) {  // diameter >= L/10
            if (big_label < 0)
                big_label = int64_t(cs.root);
            else if (big_label != int64_t(cs.root))
                ev.uniqueness = false;
        }
    }
    return ev;
}

Connectivity connectivity_and_chemical(const OccupancyGrid& grid, const LatticeVector& x,
                                       const LatticeVector& y, Adjacency adjacency) {
    const Window& win = grid.window;
    if (!win.contains(x) || !win.contains(y))
        throw PreconditionError("connectivity: endpoint outside window");
    Connectivity out;
    if (!grid.at(x) || !grid.at(y)) return out;
    const size_t start = win.index(x), goal = win.index(y);
    if (start == goal) return {true, 0};
    const auto steps = neighbor_steps(win.dim(), adjacency);
    std::vector<long> dist(win.size(), -1);
    dist[start] = 0;
    std::deque<size_t> queue{start};
    LatticeVector cur = LatticeVector(size_t(win.dim())), nb(size_t(win.dim()));
    while (!queue.empty()) {
        const size_t i = queue.front();
        queue.pop_front();
        cur = win.site(i);
        for (const auto& e : steps) {
            if (!step_site(win, grid.periodic, cur, e, nb)) continue;
            const size_t j = win.index(nb);
            if (dist[j] >= 0 || !grid.occupied[j]) continue;
            dist[j] = dist[i] + 1;
            if (j == goal) return {true, dist[j]};
            queue.push_back(j);
        }
    }
    return out;
}

std::vector<CrossingEstimate> sweep_crossing(
    const std::function<FieldSample(uint64_t)>& sample_fn, int L,
    const std::vector<double>& h_grid, uint64_t n_samples) {
    if (!std::is_sorted(h_grid.begin(), h_grid.end()))
        throw PreconditionError("sweep_crossing: h_grid must be sorted");
    std::vector<CrossingEstimate> out(h_grid.size());
    for (size_t k = 0; k < h_grid.size(); ++k) {
        out[k].L = L;
        out[k].h = h_grid[k];
        out[k].n_samples = n_samples;
    }
    for (uint64_t i = 0; i < n_samples; ++i) {
        const FieldSample s = sample_fn(i);
        bool prev = true;
        for (size_t k = 0; k < h_grid.size(); ++k) {
            const OccupancyGrid grid = threshold(s, h_grid[k]);
            const bool ind = crossing_indicator(label_clusters(grid, Adjacency::nearest_neighbor), L);
            if (!prev && ind)
                throw NumericError("sweep_crossing: coupled monotonicity violated");
            prev = ind;
            out[k].n_success += ind ? 1 : 0;
        }
    }
    for (auto& est : out) {
        est.p_hat = double(est.n_success) / double(est.n_samples);
        est.ci = binomial_ci(est.n_success, est.n_samples, 0.99);
    }
    return out;
}

}  // namespace membrane
