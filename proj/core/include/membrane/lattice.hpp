#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "membrane/errors.hpp"

namespace membrane {

// A point of Z^d. d is a runtime quantity throughout the library (the model
// lives in d >= 5, but several helpers are dimension-agnostic).
using LatticeVector = std::vector<int>;

inline int linf_norm(const LatticeVector& x) {
    int m = 0;
    for (int c : x) m = std::max(m, std::abs(c));
    return m;
}

inline long l1_norm(const LatticeVector& x) {
    long s = 0;
    for (int c : x) s += std::abs(c);
    return s;
}

inline double l2_norm(const LatticeVector& x) {
    double s = 0;
    for (int c : x) s += double(c) * double(c);
    return std::sqrt(s);
}

// Canonical representative of x under the symmetry group of the lattice
// (coordinate permutations and sign flips): absolute values sorted
// descending. g and G are invariant under this group.
inline LatticeVector canonical_offset(const LatticeVector& x) {
    LatticeVector c(x.size());
    for (size_t i = 0; i < x.size(); ++i) c[i] = std::abs(x[i]);
    std::sort(c.begin(), c.end(), std::greater<int>());
    return c;
}

// All canonical offsets with |x|_inf <= radius in dimension d
// (nonincreasing sequences over {0..radius}^d).
std::vector<LatticeVector> canonical_offsets_upto(int d, int radius);

// Rectangular window of Z^d: the sites lo[i] <= x_i <= hi[i], with row-major
// linear indexing (last coordinate fastest). Used for boxes B(0,N), slabs,
// and torus fundamental domains alike.
class Window {
public:
    Window() = default;
    Window(LatticeVector lo, LatticeVector hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        if (lo_.size() != hi_.size()) throw PreconditionError("window: lo/hi dimension mismatch");
        strides_.assign(lo_.size(), 1);
        size_ = 1;
        for (int i = int(lo_.size()) - 1; i >= 0; --i) {
            if (hi_[i] < lo_[i]) throw PreconditionError("window: empty axis");
            strides_[i] = size_;
            size_ *= size_t(hi_[i] - lo_[i] + 1);
        }
    }

    // Centered cube B(0,N).
    static Window box(int d, int radius) {
        return Window(LatticeVector(d, -radius), LatticeVector(d, radius));
    }

    int dim() const { return int(lo_.size()); }
    size_t size() const { return size_; }
    const LatticeVector& lo() const { return lo_; }
    const LatticeVector& hi() const { return hi_; }
    int extent(int axis) const { return hi_[axis] - lo_[axis] + 1; }

    bool contains(const LatticeVector& x) const {
        for (int i = 0; i < dim(); ++i)
            if (x[i] < lo_[i] || x[i] > hi_[i]) return false;
        return true;
    }

    size_t index(const LatticeVector& x) const {
        size_t idx = 0;
        for (int i = 0; i < dim(); ++i) idx += strides_[i] * size_t(x[i] - lo_[i]);
        return idx;
    }

    LatticeVector site(size_t idx) const {
        LatticeVector x(dim());
        for (int i = 0; i < dim(); ++i) {
            x[i] = lo_[i] + int(idx / strides_[i]);
            idx %= strides_[i];
        }
        return x;
    }

    // In-place site iteration without allocation; returns false after the
    // last site. Start from x = lo().
    bool next_site(LatticeVector& x) const {
        for (int i = dim() - 1; i >= 0; --i) {
            if (x[i] < hi_[i]) {
                ++x[i];
                return true;
            }
            x[i] = lo_[i];
        }
        return false;
    }

private:
    LatticeVector lo_, hi_;
    std::vector<size_t> strides_;
    size_t size_ = 0;
};

}  // namespace membrane
