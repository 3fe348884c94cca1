#include "chemokin/tumbling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace chemokin {

ResponseFunction ResponseFunction::make(Kind kind, double amp, double sigma) {
    if (!(amp > 0.0 && amp < 1.0))
        throw std::invalid_argument("response amplitude must lie in (0,1): ||theta||_inf < 1, got " +
                                    std::to_string(amp));
    if (!(sigma > 0.0)) throw std::invalid_argument("response sigma must be positive");
    return ResponseFunction{kind, amp, sigma};
}

double ResponseFunction::operator()(double z) const {
    if (kind == Kind::Tanh) return -amp * std::tanh(z / sigma);
    return -std::clamp(z / sigma, -amp, amp);
}

SpeciesParams SpeciesParams::make(double psi, const ResponseFunction& theta) {
    if (!(psi > 0.0)) throw std::invalid_argument("psi must be positive");
    return SpeciesParams{psi, theta};
}

namespace {
void check_eps(double eps) {
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::invalid_argument(
            "eps must lie in (0,1]; rate positivity is only guaranteed there");
}
} // namespace

double tumbling_rate(const SpeciesParams& sp, double eps, double argument) {
    check_eps(eps);
    return sp.psi * (1.0 + eps * sp.theta(argument));
}

PhiParts decompose(const SpeciesParams& sp, double eps, double arg_v, double arg_vprime) {
    check_eps(eps);
    const double tv = sp.theta(arg_v);
    const double tvp = sp.theta(arg_vprime);
    return {sp.psi * (1.0 + 0.5 * eps * (tvp + tv)), sp.psi * 0.5 * eps * (tvp - tv)};
}

Eigen::MatrixXd collision_matrix(const SpeciesParams& sp, const VelocitySet& vs, double eps,
                                 std::span<const double> args) {
    check_eps(eps);
    const int n = vs.count();
    if (static_cast<int>(args.size()) != n)
        throw std::invalid_argument("collision_matrix: one argument per velocity node expected");

    Eigen::MatrixXd m(n, n);
    for (int kp = 0; kp < n; ++kp) {
        const double col = -vs.weights[kp] * (sp.psi * (1.0 + eps * sp.theta(args[kp])));
        for (int k = 0; k < n; ++k) m(k, kp) = col;
    }
    for (int k = 0; k < n; ++k)
        m(k, k) += vs.measure * sp.psi * (1.0 + eps * sp.theta(args[k]));
    return m;
}

Eigen::MatrixXd collision_matrix_zero(const SpeciesParams& sp, const VelocitySet& vs) {
    const int n = vs.count();
    Eigen::MatrixXd m(n, n);
    for (int kp = 0; kp < n; ++kp) {
        const double col = -vs.weights[kp] * sp.psi;
        for (int k = 0; k < n; ++k) m(k, kp) = col;
    }
    for (int k = 0; k < n; ++k) m(k, k) += vs.measure * sp.psi;
    return m;
}

Eigen::MatrixXd collision_matrix_first_order(const SpeciesParams& sp, const VelocitySet& vs,
                                             std::span<const double> args) {
    const int n = vs.count();
    if (static_cast<int>(args.size()) != n)
        throw std::invalid_argument("collision_matrix_first_order: argument count mismatch");
    Eigen::MatrixXd m(n, n);
    for (int kp = 0; kp < n; ++kp) {
        const double col = -vs.weights[kp] * sp.psi * sp.theta(args[kp]);
        for (int k = 0; k < n; ++k) m(k, kp) = col;
    }
    for (int k = 0; k < n; ++k) m(k, k) += vs.measure * sp.psi * sp.theta(args[k]);
    return m;
}

} // namespace chemokin
