#pragma once

#include <functional>

namespace onebit {

// Adaptive Gauss-Kronrod (G7,K15) integration over [a, b].
// Subdivides until the local error estimate meets abs_tol spread over the
// interval; throws std::runtime_error if the subdivision depth is exhausted.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12);

// Integral of f over [a, +inf) for integrands that decay at least
// exponentially past `a`. Splits into geometrically growing segments of
// initial width `step0` and stops once a segment contributes less than
// abs_tol relative to the running total.
double integrate_right_tail(const std::function<double(double)>& f, double a,
                            double step0, double abs_tol = 1e-14);

} // namespace onebit
