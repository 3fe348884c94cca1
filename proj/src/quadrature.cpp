#include "chemokin/quadrature.hpp"

#include <cmath>

namespace chemokin {

namespace {

double simpson(double fa, double fm, double fb, double h) {
    return h * (fa + 4.0 * fm + fb) / 6.0;
}

double recurse(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double err = left + right - whole;
    if (depth <= 0 || std::abs(err) <= 15.0 * tol)
        return left + right + err / 15.0;
    return recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = simpson(fa, fm, fb, b - a);
    // First pass with a scale guess, second pass tightens against the result.
    double tol = std::max(abs_tol, rel_tol * std::abs(whole));
    if (tol == 0.0) tol = 1e-300;
    double result = recurse(f, a, b, fa, fm, fb, whole, tol, max_depth);
    double tol2 = std::max(abs_tol, rel_tol * std::abs(result));
    if (tol2 > 0.0 && tol2 < tol) {
        result = recurse(f, a, b, fa, fm, fb, whole, tol2, max_depth);
    }
    return result;
}

} // namespace chemokin
