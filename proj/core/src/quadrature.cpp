#include "membrane/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "membrane/errors.hpp"

namespace membrane {

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1] (QUADPACK values).
constexpr double kXgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                            0.741531185599394, 0.586087235467691, 0.405845151377397,
                            0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                            0.140653259715525, 0.169004726639267, 0.190350578064785,
                            0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                           0.417959183673469};

struct Panel {
    double a, b;
    double value;
    double err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kXgk[i]);
        fv[14 - i] = f(c + h * kXgk[i]);
    }
    fv[7] = f(c);
    double kronrod = kWgk[7] * fv[7];
    double gauss = kWg[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        kronrod += kWgk[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) gauss += kWg[i / 2] * (fv[i] + fv[14 - i]);
    }
    kronrod *= h;
    gauss *= h;
    // QUADPACK-style error damping of |K15 - G7|.
    const double diff = std::abs(kronrod - gauss);
    double err = diff;
    if (diff > 0) err = diff * std::min(1.0, std::pow(200.0 * diff / (std::abs(kronrod) + 1e-300), 1.5));
    return {a, b, kronrod, err};
}

}  // namespace

void QuadratureSpec::validate() const {
    if (upper_cutoff <= 0) throw PreconditionError("quadrature: upper_cutoff must be > 0");
    if (abs_tol <= 0) throw PreconditionError("quadrature: abs_tol must be > 0");
    if (max_refinements <= 0) throw PreconditionError("quadrature: max_refinements must be > 0");
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, int max_refinements) {
    if (!(b > a)) throw PreconditionError("integrate_adaptive: empty interval");
    std::priority_queue<Panel> heap;
    double total = 0, total_err = 0;
    int n_panels = 0;
    auto push = [&](double lo, double hi) {
        const Panel p = evaluate_panel(f, lo, hi);
        total += p.value;
        total_err += p.err;
        heap.push(p);
        ++n_panels;
    };
    // Dyadic initial grid: [a, a+1], then doubling spans up to b.
    double lo = a;
    double step = 1.0;
    while (lo < b) {
        const double hi = std::min(b, lo + step);
        push(lo, hi);
        lo = hi;
        step *= 2;
    }
    int refinements = 0;
    while (total_err > abs_tol && refinements < max_refinements) {
        const Panel worst = heap.top();
        heap.pop();
        total -= worst.value;
        total_err -= worst.err;
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {  // interval exhausted at double precision
            total += worst.value;
            total_err += worst.err;
            break;
        }
        push(worst.a, mid);
        push(mid, worst.b);
        ++refinements;
    }
    if (total_err > abs_tol)
        throw AccuracyError("integrate_adaptive: tolerance not reached within refinement budget",
                            total_err);
    return {total, total_err, n_panels};
}

}  // namespace membrane
