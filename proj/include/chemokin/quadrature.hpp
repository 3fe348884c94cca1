#pragma once

#include <functional>

namespace chemokin {

/// Adaptive Simpson integration of f over [a,b].
/// Recursion refines until the Richardson error estimate meets
/// max(rel_tol * |I|, abs_tol) on each subinterval.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-10, double abs_tol = 0.0, int max_depth = 48);

} // namespace chemokin
