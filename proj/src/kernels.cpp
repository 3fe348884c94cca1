#include "chemokin/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "chemokin/quadrature.hpp"

namespace chemokin::kernels {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kQuadTol = 1e-11;

double radius(int dim, const Vec2& x) {
    return dim == 2 ? std::hypot(x[0], x[1]) : std::abs(x[0]);
}

void check_dim(int dim) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("kernel dim must be 1 or 2");
}

// The d=2 kernels are s-integrals with exponent a e^{-u} + e^u/(4 pi) after
// the substitution s = e^u. That exponent equals (r/2) cosh(u - u*) with
// u* = ln sqrt(4 pi a), so a window of half-width acosh(1 + drop/(r/2))
// around u* captures everything above exp(-drop) of the saddle value.
struct Window {
    double lo, hi;
};

Window saddle_window(double a, double r, double extra) {
    const double u_star = 0.5 * std::log(4.0 * kPi * a);
    const double w = std::acosh(1.0 + 100.0 / std::max(r, 1e-300)) + extra;
    return {u_star - w, u_star + w};
}

// d=2 Bessel potential, radial part, from the defining s-integral.
double bessel_G2(double r) {
    if (r <= 0.0)
        throw std::domain_error("G in d=2 has a logarithmic singularity at x = 0");
    const double a = kPi * r * r / 4.0;
    const Window win = saddle_window(a, r, 1.0);
    auto integrand = [a](double u) {
        return std::exp(-a * std::exp(-u) - std::exp(u) / (4.0 * kPi));
    };
    return adaptive_simpson(integrand, win.lo, win.hi, kQuadTol) / (4.0 * kPi);
}

// Radial factor of grad G in d=2: grad G = -x * g2(r) with
// g2(r) = (1/8) int_0^inf exp(-pi r^2/(4s) - s/(4 pi)) s^{-2} ds.
double bessel_grad_G2_radial(double r) {
    if (r <= 0.0) throw std::domain_error("grad G in d=2 is singular at x = 0");
    const double a = kPi * r * r / 4.0;
    const Window win = saddle_window(a, r, 3.0);
    auto integrand = [a](double u) {
        return std::exp(-a * std::exp(-u) - std::exp(u) / (4.0 * kPi) - u);
    };
    return adaptive_simpson(integrand, win.lo, win.hi, kQuadTol) / 8.0;
}

// Same integral without the exponential substitution, on decade panels in s.
// Used only as the independent cross-check route for the norm table.
double bessel_G2_direct(double r) {
    const double a = kPi * r * r / 4.0;
    auto f = [a](double s) { return std::exp(-a / s - s / (4.0 * kPi)) / s; };
    const double s_lo = a / 120.0;
    const double s_hi = 4.0 * kPi * 120.0;
    double total = 0.0;
    double left = s_lo;
    while (left < s_hi) {
        double right = std::min(s_hi, left * 10.0);
        total += adaptive_simpson(f, left, right, 1e-12);
        left = right;
    }
    return total / (4.0 * kPi);
}

// int_{R^d} |profile(r)|^p dx by adaptive quadrature. In d=2 the substitution
// r = y^2 absorbs the integrable singularities of G (log) and grad G (r^{1-p},
// p < 2) at the origin.
double radial_power_integral(int dim, const std::function<double(double)>& profile, double p,
                             double r_cut) {
    if (dim == 1) {
        auto f = [&](double r) { return std::pow(profile(r), p); };
        return 2.0 * adaptive_simpson(f, 0.0, r_cut, kQuadTol);
    }
    auto f = [&](double y) {
        if (y == 0.0) return 0.0;
        return 2.0 * std::pow(profile(y * y), p) * y * y * y;
    };
    return 2.0 * kPi * adaptive_simpson(f, 0.0, std::sqrt(r_cut), kQuadTol);
}

// int_0^t h(s) ds for h ~ s^gamma (gamma > -1) near zero: s = u^2 regularizes
// the endpoint; the first 1e-12 of the u-range is dropped to avoid evaluating
// h at s = 0 (an O(1e-12) perturbation of an O(1) integrand).
double time_integral(const std::function<double(double)>& h, double t, double rel_tol) {
    auto f = [&h](double u) { return 2.0 * u * h(u * u); };
    const double u_hi = std::sqrt(t);
    return adaptive_simpson(f, 1e-12 * u_hi, u_hi, rel_tol);
}

} // namespace

double eval_G(int dim, const Vec2& x) {
    check_dim(dim);
    const double r = radius(dim, x);
    if (dim == 1) return 0.5 * std::exp(-r);
    return bessel_G2(r);
}

Vec2 eval_grad_G(int dim, const Vec2& x) {
    check_dim(dim);
    if (dim == 1) {
        double s = x[0] > 0.0 ? 1.0 : (x[0] < 0.0 ? -1.0 : 0.0);
        return {-0.5 * s * std::exp(-std::abs(x[0])), 0.0};
    }
    const double g = bessel_grad_G2_radial(radius(dim, x));
    return {-x[0] * g, -x[1] * g};
}

double eval_K(int dim, const Vec2& x, double t) {
    check_dim(dim);
    if (!(t > 0.0)) throw std::invalid_argument("K(x,t) requires t > 0");
    const double r = radius(dim, x);
    return std::pow(4.0 * kPi * t, -0.5 * dim) * std::exp(-r * r / (4.0 * t) - t);
}

Vec2 eval_grad_K(int dim, const Vec2& x, double t) {
    const double k = eval_K(dim, x, t);
    return {-x[0] / (2.0 * t) * k, dim == 2 ? -x[1] / (2.0 * t) * k : 0.0};
}

double norm_G(int dim, double p) {
    check_dim(dim);
    if (dim == 1) {
        auto profile = [](double r) { return 0.5 * std::exp(-r); };
        return std::pow(radial_power_integral(1, profile, p, 64.0 / p + 8.0), 1.0 / p);
    }
    // G ~ e^{-r/2} at large r (saddle of the s-integral).
    auto profile = [](double r) { return bessel_G2(r); };
    return std::pow(radial_power_integral(2, profile, p, 120.0 / p + 20.0), 1.0 / p);
}

double norm_grad_G(int dim, double p) {
    check_dim(dim);
    if (dim == 1) {
        auto profile = [](double r) { return 0.5 * std::exp(-r); };  // |grad G| a.e.
        return std::pow(radial_power_integral(1, profile, p, 64.0 / p + 8.0), 1.0 / p);
    }
    auto profile = [](double r) { return r * bessel_grad_G2_radial(r); };
    return std::pow(radial_power_integral(2, profile, p, 120.0 / p + 20.0), 1.0 / p);
}

double norm_K(int dim, double p, double t) {
    check_dim(dim);
    const double cut = std::sqrt(4.0 * t) * (10.0 / std::sqrt(p) + 2.0);
    auto profile = [dim, t](double r) { return eval_K(dim, {r, 0.0}, t); };
    return std::pow(radial_power_integral(dim, profile, p, cut), 1.0 / p);
}

double norm_grad_K(int dim, double p, double t) {
    check_dim(dim);
    const double cut = std::sqrt(4.0 * t) * (11.0 / std::sqrt(p) + 2.0);
    auto profile = [dim, t](double r) { return r / (2.0 * t) * eval_K(dim, {r, 0.0}, t); };
    return std::pow(radial_power_integral(dim, profile, p, cut), 1.0 / p);
}

double time_integral_norm_K(int dim, double p, double t) {
    return time_integral([dim, p](double s) { return norm_K(dim, p, s); }, t, 1e-9);
}

double time_integral_norm_grad_K(int dim, double p, double t) {
    return time_integral([dim, p](double s) { return norm_grad_K(dim, p, s); }, t, 1e-9);
}

double ref_norm_G_1d(double p) { return std::pow(std::pow(2.0, 1.0 - p) / p, 1.0 / p); }

double ref_norm_K(int dim, double p, double t) {
    return std::pow(4.0 * kPi * t, -0.5 * dim * (1.0 - 1.0 / p)) * std::pow(p, -0.5 * dim / p) *
           std::exp(-t);
}

double ref_norm_grad_K(int dim, double p, double t) {
    // ||grad K||_p^p = (4 pi t)^{-dp/2} (2t)^{-p} e^{-pt} S_d(p,t), with the
    // Gaussian radial moments
    //   S_1 = Gamma((p+1)/2) (4t/p)^{(p+1)/2},
    //   S_2 = pi Gamma(p/2 + 1) (4t/p)^{p/2+1}.
    double s;
    if (dim == 1)
        s = std::tgamma(0.5 * (p + 1.0)) * std::pow(4.0 * t / p, 0.5 * (p + 1.0));
    else
        s = kPi * std::tgamma(0.5 * p + 1.0) * std::pow(4.0 * t / p, 0.5 * p + 1.0);
    const double vp =
        std::pow(4.0 * kPi * t, -0.5 * dim * p) * std::pow(2.0 * t, -p) * std::exp(-p * t) * s;
    return std::pow(vp, 1.0 / p);
}

double ref_time_integral_norm_K(int dim, double p, double t) {
    if (dim == 1 && p == 1.0) return 1.0 - std::exp(-t);  // ||K(.,s)||_1 = e^{-s}
    return time_integral([dim, p](double s) { return ref_norm_K(dim, p, s); }, t, 1e-12);
}

double ref_time_integral_norm_grad_K(int dim, double p, double t) {
    if (dim == 1 && p == 1.0)
        return std::erf(std::sqrt(t));  // ||grad K(.,s)||_1 = e^{-s}/sqrt(pi s)
    return time_integral([dim, p](double s) { return ref_norm_grad_K(dim, p, s); }, t, 1e-12);
}

double lemma_exponent_K(int dim, double p) { return 0.5 * dim * (1.0 - p) / p + 1.0; }

double lemma_exponent_grad_K(int dim, double p) { return 0.5 * (dim * (1.0 - p) + p) / p; }

std::vector<NormCheck> verify_norm_table(int dim, double p, double t) {
    check_dim(dim);
    if (!(p >= 1.0)) throw std::domain_error("norm table requires p >= 1");
    if (!(t > 0.0)) throw std::domain_error("norm table requires t > 0");
    if (dim == 2 && !(p < 2.0))
        throw std::domain_error(
            "gradient-kernel norms require p < d/(d-1) = 2 in d=2; got p = " + std::to_string(p));

    const double tol_val = dim == 1 ? 1e-8 : 1e-6;
    const double tol_exp = 0.05;
    std::vector<NormCheck> rows;

    auto add = [&](const std::string& q, double tt, double computed, double reference,
                   double tol) {
        NormCheck c{q, dim, p, tt, computed, reference, tol, false};
        c.pass = std::isfinite(computed) &&
                 std::abs(computed - reference) <=
                     tol * std::max(1.0, std::max(std::abs(computed), std::abs(reference)));
        rows.push_back(c);
    };

    if (dim == 1) {
        add("G_Lp", 0.0, norm_G(1, p), ref_norm_G_1d(p), tol_val);
        add("gradG_Lp", 0.0, norm_grad_G(1, p), ref_norm_G_1d(p), tol_val);
    } else {
        // No elementary closed form for the d=2 Bessel potential: cross-check
        // the substituted quadrature against direct decade-panel integration
        // at |x| = 1, and record the norms as finiteness rows (the lemma only
        // bounds them by unspecified constants).
        add("G_at_r1_crosscheck", 0.0, bessel_G2(1.0), bessel_G2_direct(1.0), 1e-8);
        const double gn = norm_G(2, p);
        add("G_Lp_finite", 0.0, gn, gn, tol_val);
        const double gg = norm_grad_G(2, p);
        add("gradG_Lp_finite", 0.0, gg, gg, tol_val);
    }

    add("K_Lp", t, norm_K(dim, p, t), ref_norm_K(dim, p, t), tol_val);
    add("int0t_K_Lp", t, time_integral_norm_K(dim, p, t), ref_time_integral_norm_K(dim, p, t),
        tol_val);
    add("int0t_gradK_Lp", t, time_integral_norm_grad_K(dim, p, t),
        ref_time_integral_norm_grad_K(dim, p, t), tol_val);

    // Fitted small-t exponents of the time integrals against the lemma power
    // laws; the fit is meaningful for t well below 1, where e^{-s} is flat.
    const double i_t = time_integral_norm_K(dim, p, t);
    const double i_t4 = time_integral_norm_K(dim, p, 0.25 * t);
    add("K_t_exponent", t, std::log(i_t / i_t4) / std::log(4.0), lemma_exponent_K(dim, p),
        tol_exp);
    const double g_t = time_integral_norm_grad_K(dim, p, t);
    const double g_t4 = time_integral_norm_grad_K(dim, p, 0.25 * t);
    add("gradK_t_exponent", t, std::log(g_t / g_t4) / std::log(4.0),
        lemma_exponent_grad_K(dim, p), tol_exp);

    return rows;
}

} // namespace chemokin::kernels
