#pragma once

#include <functional>

namespace membrane {

// Controls for the half-line Bessel-integral evaluations. upper_cutoff is the
// truncation point T; the evaluators report a certified analytic bound on the
// discarded tail in addition to the panel error estimates on [0, T].
struct QuadratureSpec {
    double upper_cutoff = 0.0;   // > 0
    double abs_tol = 1e-8;       // > 0, total error target
    int max_refinements = 4000;  // panel-split budget

    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  // panel error estimate (excludes any truncation tail)
    int panels = 0;
};

// Adaptive Gauss-Kronrod 7-15 on [a, b]: dyadic initial panels (the
// integrands decay polynomially over many decades) followed by
// largest-error-first bisection until the summed estimate is below abs_tol
// or the refinement budget is exhausted (AccuracyError, carrying the
// achieved bound).
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, int max_refinements);

}  // namespace membrane
