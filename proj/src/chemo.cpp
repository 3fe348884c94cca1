#include "chemokin/chemo.hpp"

#include <stdexcept>

namespace chemokin {

ChemSolver::ChemSolver(const SpatialGrid& grid, int delta)
    : grid_(grid), delta_(delta), spec_(grid) {
    if (delta != 0 && delta != 1) throw std::invalid_argument("delta must be 0 or 1");
}

ChemField ChemSolver::initial_field() const {
    ChemField f;
    f.delta = delta_;
    f.S.assign(grid_.num_cells(), 0.0);
    f.dtS.assign(grid_.num_cells(), 0.0);
    for (int a = 0; a < grid_.dim; ++a) f.gradS[a].assign(grid_.num_cells(), 0.0);
    return f;
}

void ChemSolver::fill_gradient(const std::vector<std::complex<double>>& s_hat,
                               ChemField& out) const {
    for (int a = 0; a < grid_.dim; ++a) {
        const auto& kd = spec_.k_deriv(a);
        hat_b_.resize(s_hat.size());
        for (std::size_t m = 0; m < s_hat.size(); ++m)
            hat_b_[m] = std::complex<double>(0.0, kd[m]) * s_hat[m];
        spec_.backward(hat_b_, out.gradS[a]);
    }
}

ChemField ChemSolver::solve_elliptic(const Field& rho_total) const {
    ChemField out;
    out.delta = delta_;
    spec_.forward(rho_total, hat_a_);
    const auto& k2 = spec_.k_squared();
    for (std::size_t m = 0; m < hat_a_.size(); ++m) hat_a_[m] /= 1.0 + k2[m];
    spec_.backward(hat_a_, out.S);
    fill_gradient(hat_a_, out);
    out.dtS.assign(grid_.num_cells(), 0.0);
    return out;
}

ChemField ChemSolver::step_parabolic(const ChemField& prev, const Field& rho_total,
                                     double dt) const {
    if (!(dt > 0.0)) throw std::invalid_argument("step_parabolic requires dt > 0");
    ChemField out;
    out.delta = delta_;
    std::vector<std::complex<double>> rho_hat;
    spec_.forward(rho_total, rho_hat);
    spec_.forward(prev.S, hat_a_);
    const auto& k2 = spec_.k_squared();
    hat_b_.resize(hat_a_.size());
    for (std::size_t m = 0; m < hat_a_.size(); ++m) {
        const std::complex<double> s_new = (hat_a_[m] + dt * rho_hat[m]) / (1.0 + dt * (1.0 + k2[m]));
        hat_a_[m] = s_new;
        hat_b_[m] = rho_hat[m] - (1.0 + k2[m]) * s_new;  // lap S - S + rho
    }
    spec_.backward(hat_a_, out.S);
    spec_.backward(hat_b_, out.dtS);
    fill_gradient(hat_a_, out);
    return out;
}

void ChemSolver::set_dt_from_flux(ChemField& field, const std::array<Field, 2>& J_total) const {
    hat_b_.assign(spec_.num_modes(), std::complex<double>(0.0, 0.0));
    for (int a = 0; a < grid_.dim; ++a) {
        spec_.forward(J_total[a], hat_a_);
        const auto& kd = spec_.k_deriv(a);
        for (std::size_t m = 0; m < hat_a_.size(); ++m)
            hat_b_[m] -= std::complex<double>(0.0, kd[m]) * hat_a_[m];  // -div J
    }
    const auto& k2 = spec_.k_squared();
    for (std::size_t m = 0; m < hat_b_.size(); ++m) hat_b_[m] /= 1.0 + k2[m];
    spec_.backward(hat_b_, field.dtS);
}

Field tumble_argument(const ChemField& field, const Vec2& v, double eps, int dim) {
    Field out(field.S.size());
    const Field& gx = field.gradS[0];
    if (dim == 1) {
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = eps * field.dtS[j] + v[0] * gx[j];
    } else {
        const Field& gy = field.gradS[1];
        for (std::size_t j = 0; j < out.size(); ++j)
            out[j] = eps * field.dtS[j] + v[0] * gx[j] + v[1] * gy[j];
    }
    return out;
}

} // namespace chemokin
