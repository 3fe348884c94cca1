#pragma once

#include <string>
#include <vector>

#include "chemokin/geometry.hpp"

namespace chemokin::kernels {

/// Free-space Bessel potential of -Laplace + 1.
/// d=1 is closed form; d=2 is evaluated from its s-integral representation by
/// adaptive quadrature (relative tolerance 1e-10) and rejects x = 0, where the
/// kernel has a logarithmic singularity.
double eval_G(int dim, const Vec2& x);
Vec2 eval_grad_G(int dim, const Vec2& x);

/// Damped heat kernel (4 pi t)^{-d/2} exp(-|x|^2/(4t) - t), t > 0.
double eval_K(int dim, const Vec2& x, double t);
Vec2 eval_grad_K(int dim, const Vec2& x, double t);

// L^p(R^d) norms computed by adaptive quadrature; these are the verification
// path, kept independent of the closed-form references below.
double norm_G(int dim, double p);
double norm_grad_G(int dim, double p);
double norm_K(int dim, double p, double t);
double norm_grad_K(int dim, double p, double t);
double time_integral_norm_K(int dim, double p, double t);       // int_0^t ||K(.,s)||_p ds
double time_integral_norm_grad_K(int dim, double p, double t);  // int_0^t ||grad K(.,s)||_p ds

// Closed-form references (exact where stated).
double ref_norm_G_1d(double p);                      // (2^{1-p}/p)^{1/p}
double ref_norm_K(int dim, double p, double t);      // (4 pi t)^{-(d/2)(1-1/p)} p^{-d/(2p)} e^{-t}
double ref_norm_grad_K(int dim, double p, double t);
double ref_time_integral_norm_K(int dim, double p, double t);
double ref_time_integral_norm_grad_K(int dim, double p, double t);

/// Lemma exponents of the small-t power laws of the time-integrated norms.
double lemma_exponent_K(int dim, double p);       // d(1-p)/(2p) + 1
double lemma_exponent_grad_K(int dim, double p);  // (d(1-p)+p)/(2p)

struct NormCheck {
    std::string quantity;
    int dim = 1;
    double p = 1.0;
    double t = 0.0;  // 0 marks t-independent rows
    double computed = 0.0;
    double reference = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Checks every entry of the kernel-estimate lemma at one (dim, p, t):
/// equalities for d=1, closed forms and fitted t-exponents for d=2.
/// Throws std::domain_error when (dim, p) leaves the lemma's validity range
/// (p >= 1 everywhere; p < d/(d-1) for the gradient rows).
std::vector<NormCheck> verify_norm_table(int dim, double p, double t);

} // namespace chemokin::kernels
