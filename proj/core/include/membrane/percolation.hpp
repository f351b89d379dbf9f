#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "membrane/lattice.hpp"
#include "membrane/sampler.hpp"
#include "membrane/stats.hpp"

namespace membrane {

enum class Adjacency { nearest_neighbor, star };

// Thresholded field: occupancy(x) = (phi_x >= h), ties occupied.
struct OccupancyGrid {
    Window window;
    std::vector<uint8_t> occupied;
    double level = 0.0;
    bool periodic = false;  // wrap adjacency through opposite faces

    bool at(const LatticeVector& x) const { return occupied[window.index(x)] != 0; }
    size_t count() const;
};

OccupancyGrid threshold(const FieldSample& sample, double h);

struct ClusterStats {
    size_t root = 0;   // canonical label: smallest flat site index in the cluster
    size_t size = 0;
    long diameter_l1 = 0;    // exact (via the 2^d support functionals)
    int diameter_linf = 0;   // exact (max coordinate range)
};

struct ClusterLabeling {
    Window window;
    Adjacency adjacency = Adjacency::nearest_neighbor;
    std::vector<int64_t> label;  // per site: canonical label, -1 if vacant
    std::vector<ClusterStats> clusters;
    std::vector<int64_t> cluster_of_label;  // dense map label -> cluster idx (-1 elsewhere)

    int64_t cluster_index(size_t flat) const {
        const int64_t lb = label[flat];
        return lb < 0 ? -1 : cluster_of_label[size_t(lb)];
    }
    size_t count() const { return clusters.size(); }
};

// Union-find with path compression; labels are deterministic (smallest flat
// index per component).
ClusterLabeling label_clusters(const OccupancyGrid& grid, Adjacency adjacency);

// Existence of an occupied nearest-neighbor path joining B(0,L) to the outer
// boundary of B(0,2L) (sites at distance one outside). The grid window must
// contain B(0,2L+1).
bool crossing_indicator(const ClusterLabeling& labeling, int L);

// Strong-percolation events on the window B(0,2L):
//   existence   = some cluster of l1-diameter >= L meets B(0,L)
//   uniqueness  = all clusters of l1-diameter >= L/10 meeting B(0,L) carry one label
struct StrongEvents {
    bool existence = false;
    bool uniqueness = false;
};
StrongEvents strong_percolation_events(const ClusterLabeling& labeling, int L);

// Connectivity and graph distance inside the occupied set (BFS); nullopt
// encodes infinite distance.
struct Connectivity {
    bool connected = false;
    std::optional<long> distance;
};
Connectivity connectivity_and_chemical(const OccupancyGrid& grid, const LatticeVector& x,
                                       const LatticeVector& y, Adjacency adjacency);

struct CrossingEstimate {
    int L = 0;
    double h = 0.0;
    uint64_t n_samples = 0;
    uint64_t n_success = 0;
    double p_hat = 0.0;
    BinomialCI ci;  // exact binomial at level 0.99
};

// Coupled sweep: the SAME samples are thresholded at every level of the
// sorted h_grid, and per-sample monotonicity of the indicator along the grid
// is asserted (not just expected). sample_fn(i) must return sample i of the
// shared family.
std::vector<CrossingEstimate> sweep_crossing(
    const std::function<FieldSample(uint64_t)>& sample_fn, int L,
    const std::vector<double>& h_grid, uint64_t n_samples);

}  // namespace membrane
