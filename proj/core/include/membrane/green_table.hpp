#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "membrane/lattice.hpp"

namespace membrane {

enum class GreenKind : uint8_t {
    simple = 0,        // g
    bilaplacian = 1,   // G
    dirichlet_GN = 2,  // G_N, double-layer Dirichlet box
    killed_gN = 3,     // g_N, walk killed on exiting the box
    bar_GN = 4,        // bar G_N = g_N * g_N
};

const char* green_kind_name(GreenKind k);

struct GreenEntry {
    double value = 0.0;
    double error = 0.0;
};

// Precomputed Green-function values with per-entry accuracy metadata; the
// single source of covariance truth for samplers and experiments. Immutable
// once built, safe to share across threads.
class GreenTable {
public:
    GreenKind kind = GreenKind::simple;
    int d = 0;
    int radius = 0;  // window radius for g/G; box radius N for finite-volume kinds
    double tol = 0.0;

    // Translation-invariant kinds: canonical offsets (|coords| sorted desc).
    std::map<LatticeVector, GreenEntry> offsets;
    // Finite-volume kinds: (x, y) site pairs, symmetric in x <-> y.
    std::map<std::pair<LatticeVector, LatticeVector>, GreenEntry> pairs;

    bool translation_invariant() const {
        return kind == GreenKind::simple || kind == GreenKind::bilaplacian;
    }

    const GreenEntry& entry(const LatticeVector& x) const;
    double at(const LatticeVector& x) const { return entry(x).value; }

    const GreenEntry& entry_pair(const LatticeVector& x, const LatticeVector& y) const;
    double at_pair(const LatticeVector& x, const LatticeVector& y) const {
        return entry_pair(x, y).value;
    }

    // Binary cache ("MPGT"). Keyed by (kind, d, radius, tol).
    void save(const std::string& path) const;
    static GreenTable load(const std::string& path);
    static std::string cache_name(GreenKind kind, int d, int radius, double tol);
};

// Quadrature-built tables for g and G on the window |x|_inf <= radius.
GreenTable build_green_table(GreenKind kind, int d, int radius, double tol);

}  // namespace membrane
