#pragma once

#include <Eigen/Dense>
#include <span>

#include "chemokin/geometry.hpp"

namespace chemokin {

/// Nonincreasing bounded response of the tumbling rate to the chemoattractant
/// signal. Two parametric families:
///   tanh:           theta(z) = -amp * tanh(z / sigma)      (smooth)
///   clamped-linear: theta(z) = -clamp(z / sigma, -amp, amp) (Lipschitz only)
/// Both satisfy |theta| <= amp < 1.
struct ResponseFunction {
    enum class Kind { Tanh, ClampedLinear };
    Kind kind = Kind::Tanh;
    double amp = 0.5;
    double sigma = 1.0;

    static ResponseFunction make(Kind kind, double amp, double sigma);

    double operator()(double z) const;
    bool smooth() const { return kind == Kind::Tanh; }
};

struct SpeciesParams {
    double psi = 1.0;  // base tumbling intensity, 1/time
    ResponseFunction theta;

    static SpeciesParams make(double psi, const ResponseFunction& theta);
};

/// phi^eps(z) = psi (1 + eps theta(z)); positive for eps in (0,1].
double tumbling_rate(const SpeciesParams& sp, double eps, double argument);

struct PhiParts {
    double phi_s;  // symmetric part
    double phi_a;  // anti-symmetric part
};

/// Symmetric/anti-symmetric split of the rate pair between two velocities
/// whose tumbling arguments are arg_v and arg_vprime:
///   phi_s = psi (1 + (eps/2)(theta(arg_vprime) + theta(arg_v)))
///   phi_a = psi (eps/2)(theta(arg_vprime) - theta(arg_v))
PhiParts decompose(const SpeciesParams& sp, double eps, double arg_v, double arg_vprime);

/// Dense collision operator at one spatial cell. args[k] is the tumbling
/// argument eps*dtS + v_k . gradS at that cell, and
///   (M f)_k = sum_k' w_k' [ phi(args_k) f_k - phi(args_k') f_k' ],
/// so weighted column sums vanish (per-cell mass conservation) and
/// I + lambda M is an M-matrix for lambda > 0.
Eigen::MatrixXd collision_matrix(const SpeciesParams& sp, const VelocitySet& vs, double eps,
                                 std::span<const double> args);

/// Leading part M^0 (theta == 0): M^0 f = psi (|V| f - rho).
Eigen::MatrixXd collision_matrix_zero(const SpeciesParams& sp, const VelocitySet& vs);

/// First-order part M^1, so that M(eps) = M^0 + eps M^1 entrywise.
Eigen::MatrixXd collision_matrix_first_order(const SpeciesParams& sp, const VelocitySet& vs,
                                             std::span<const double> args);

} // namespace chemokin
