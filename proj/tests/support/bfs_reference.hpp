#pragma once

// Test-only reference implementations, kept independent of the library's
// union-find path: BFS component labeling used to cross-check cluster
// labelings.

#include <algorithm>
#include <deque>
#include <map>
#include <vector>

#include "membrane/percolation.hpp"

namespace membrane_test {

inline std::vector<membrane::LatticeVector> reference_steps(int d, membrane::Adjacency adj) {
    using membrane::LatticeVector;
    std::vector<LatticeVector> steps;
    if (adj == membrane::Adjacency::nearest_neighbor) {
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

inline std::vector<int64_t> bfs_labels(const membrane::OccupancyGrid& g, membrane::Adjacency adj) {
    using membrane::LatticeVector;
    const membrane::Window& win = g.window;
    const int d = win.dim();
    const auto steps = reference_steps(d, adj);
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
                            y[size_t(a)] = win.lo()[size_t(a)] +
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

inline bool same_partition(const std::vector<int64_t>& a, const std::vector<int64_t>& b) {
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

}  // namespace membrane_test
