#include "chemokin/macro.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace chemokin {

SymMat2 diffusion_coefficient(const SpeciesParams& sp, const VelocitySet& vs) {
    SymMat2 m = second_moment_tensor(vs);
    const double s = 1.0 / (vs.measure * vs.measure * sp.psi);
    return {m.xx * s, m.xy * s, m.yy * s};
}

Vec2 chemotactic_velocity(const SpeciesParams& sp, const VelocitySet& vs, const Vec2& grad_s) {
    Vec2 chi{0.0, 0.0};
    for (int k = 0; k < vs.count(); ++k) {
        const double arg = vs.nodes[k][0] * grad_s[0] + vs.nodes[k][1] * grad_s[1];
        const double t = sp.theta(arg);
        chi[0] -= vs.weights[k] * vs.nodes[k][0] * t;
        chi[1] -= vs.weights[k] * vs.nodes[k][1] * t;
    }
    chi[0] /= vs.measure;
    chi[1] /= vs.measure;
    return chi;
}

MacroSolver::MacroSolver(const SpatialGrid& grid, const VelocitySet& vel,
                         const std::array<SpeciesParams, 2>& species, int delta, ThreadPool* pool)
    : grid_(grid), vel_(vel), species_(species), chem_(grid, delta), spec_(grid),
      pool_(pool), serial_pool_(1) {
    if (grid.dim != vel.dim) throw std::invalid_argument("grid/velocity dimension mismatch");
    diff_[0] = diffusion_coefficient(species[0], vel);
    diff_[1] = diffusion_coefficient(species[1], vel);
    if (!pool_) pool_ = &serial_pool_;
}

MacroState MacroSolver::make_state(const Field& rho1, const Field& rho2) const {
    const std::int64_t nc = grid_.num_cells();
    if (static_cast<std::int64_t>(rho1.size()) != nc ||
        static_cast<std::int64_t>(rho2.size()) != nc)
        throw std::invalid_argument("initial density size mismatch");
    MacroState st;
    st.grid = grid_;
    st.rho1 = rho1;
    st.rho2 = rho2;
    st.time = 0.0;
    Field rho_total(nc);
    for (std::int64_t c = 0; c < nc; ++c) rho_total[c] = rho1[c] + rho2[c];
    if (chem_.delta() == 0) {
        st.chem = chem_.solve_elliptic(rho_total);
    } else {
        st.chem = chem_.initial_field();
        st.chem.dtS = rho_total;
    }
    return st;
}

double MacroSolver::cfl_limit(const MacroState& st) const {
    double chi_max = 0.0;
    const std::int64_t nc = grid_.num_cells();
    for (int s = 0; s < 2; ++s) {
        for (std::int64_t c = 0; c < nc; ++c) {
            Vec2 g{st.chem.gradS[0][c], grid_.dim == 2 ? st.chem.gradS[1][c] : 0.0};
            Vec2 chi = chemotactic_velocity(species_[s], vel_, g);
            chi_max = std::max(chi_max, std::max(std::abs(chi[0]), std::abs(chi[1])));
        }
    }
    const double dx = grid_.dim == 2 ? std::min(grid_.spacing(0), grid_.spacing(1))
                                     : grid_.spacing(0);
    return chi_max > 0.0 ? 0.9 * dx / chi_max : std::numeric_limits<double>::infinity();
}

void MacroSolver::diffuse(Field& rho, const SymMat2& d, double dt) {
    spec_.forward(rho, hat_);
    const auto& kd0 = spec_.k_deriv(0);
    const auto& kd1 = spec_.k_deriv(1);
    const auto& k2 = spec_.k_squared();
    for (std::size_t m = 0; m < hat_.size(); ++m) {
        // Diagonal tensor: the off-diagonal moment vanishes for tensor-grid
        // velocity sets. k_deriv carries the zeroed Nyquist, so use k2 in 1d.
        double q;
        if (grid_.dim == 1)
            q = d.xx * k2[m];
        else
            q = d.xx * kd0[m] * kd0[m] + d.yy * kd1[m] * kd1[m];
        hat_[m] /= 1.0 + dt * q;
    }
    spec_.backward(hat_, rho);
}

void MacroSolver::drift(Field& rho, const SpeciesParams& sp, const ChemField& chem, double dt) {
    const std::int64_t nc = grid_.num_cells();
    Field out = rho;
    if (grid_.dim == 1) {
        const int n = grid_.cells[0];
        const double dx = grid_.spacing(0);
        // Face fluxes F_{j+1/2} with chi from the face-averaged gradient.
        Field flux(n);
        for (int j = 0; j < n; ++j) {
            const int jp = j + 1 == n ? 0 : j + 1;
            const Vec2 g{0.5 * (chem.gradS[0][j] + chem.gradS[0][jp]), 0.0};
            const double chi = chemotactic_velocity(sp, vel_, g)[0];
            flux[j] = chi > 0.0 ? chi * rho[j] : chi * rho[jp];
        }
        for (int j = 0; j < n; ++j) {
            const int jm = j == 0 ? n - 1 : j - 1;
            out[j] = rho[j] - dt / dx * (flux[j] - flux[jm]);
        }
    } else {
        const int n0 = grid_.cells[0], n1 = grid_.cells[1];
        const double dx0 = grid_.spacing(0), dx1 = grid_.spacing(1);
        Field flux0(nc), flux1(nc);
        for (int ix = 0; ix < n0; ++ix) {
            for (int iy = 0; iy < n1; ++iy) {
                const std::int64_t c = grid_.index(ix, iy);
                const std::int64_t cx = grid_.index(ix + 1 == n0 ? 0 : ix + 1, iy);
                const std::int64_t cy = grid_.index(ix, iy + 1 == n1 ? 0 : iy + 1);
                Vec2 gx{0.5 * (chem.gradS[0][c] + chem.gradS[0][cx]),
                        0.5 * (chem.gradS[1][c] + chem.gradS[1][cx])};
                Vec2 gy{0.5 * (chem.gradS[0][c] + chem.gradS[0][cy]),
                        0.5 * (chem.gradS[1][c] + chem.gradS[1][cy])};
                const double chix = chemotactic_velocity(sp, vel_, gx)[0];
                const double chiy = chemotactic_velocity(sp, vel_, gy)[1];
                flux0[c] = chix > 0.0 ? chix * rho[c] : chix * rho[cx];
                flux1[c] = chiy > 0.0 ? chiy * rho[c] : chiy * rho[cy];
            }
        }
        for (int ix = 0; ix < n0; ++ix) {
            for (int iy = 0; iy < n1; ++iy) {
                const std::int64_t c = grid_.index(ix, iy);
                const std::int64_t mx = grid_.index(ix == 0 ? n0 - 1 : ix - 1, iy);
                const std::int64_t my = grid_.index(ix, iy == 0 ? n1 - 1 : iy - 1);
                out[c] = rho[c] - dt / dx0 * (flux0[c] - flux0[mx]) -
                         dt / dx1 * (flux1[c] - flux1[my]);
            }
        }
    }
    rho.swap(out);
}

void MacroSolver::update_chem(MacroState& st, double dt) {
    const std::int64_t nc = grid_.num_cells();
    Field rho_total(nc);
    for (std::int64_t c = 0; c < nc; ++c) rho_total[c] = st.rho1[c] + st.rho2[c];
    if (chem_.delta() == 0)
        st.chem = chem_.solve_elliptic(rho_total);
    else
        st.chem = chem_.step_parabolic(st.chem, rho_total, dt);
}

void MacroSolver::step(MacroState& st, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step requires dt > 0");
    const double admissible = cfl_limit(st);
    if (dt > admissible)
        throw std::invalid_argument("macro step rejected: dt = " + std::to_string(dt) +
                                    " exceeds the advective CFL limit " +
                                    std::to_string(admissible));
    diffuse(st.rho1, diff_[0], dt);
    diffuse(st.rho2, diff_[1], dt);
    drift(st.rho1, species_[0], st.chem, dt);
    drift(st.rho2, species_[1], st.chem, dt);
    update_chem(st, dt);
    st.time += dt;
}

std::vector<MacroRecord> MacroSolver::run(MacroState& st, double dt, double t_end,
                                          int sample_stride, const SampleFn& on_sample) {
    if (!(t_end > st.time)) throw std::invalid_argument("t_end must exceed the state time");
    if (sample_stride < 1) throw std::invalid_argument("sample stride must be >= 1");
    const long long nsteps = std::llround((t_end - st.time) / dt);
    if (nsteps < 1) throw std::invalid_argument("no steps between state time and t_end");

    const double cellvol = grid_.cell_volume();
    std::array<double, 2> running_min{0.0, 0.0};
    std::vector<MacroRecord> records;

    auto emit = [&]() {
        MacroRecord rec;
        rec.time = st.time;
        for (int s = 0; s < 2; ++s) {
            const Field& rho = s == 0 ? st.rho1 : st.rho2;
            double mass = 0.0, l2 = 0.0, l4 = 0.0, linf = 0.0, mn = running_min[s];
            for (double v : rho) {
                mass += cellvol * v;
                l2 += cellvol * v * v;
                l4 += cellvol * v * v * v * v;
                linf = std::max(linf, std::abs(v));
                mn = std::min(mn, v);
            }
            running_min[s] = mn;
            rec.mass[s] = mass;
            rec.l2[s] = std::sqrt(l2);
            rec.l4[s] = std::pow(l4, 0.25);
            rec.linf[s] = linf;
            rec.min_value[s] = mn;
        }
        records.push_back(rec);
        if (on_sample) on_sample(st, rec);
    };
    emit();

    for (long long n = 1; n <= nsteps; ++n) {
        step(st, dt);
        for (int s = 0; s < 2; ++s) {
            const Field& rho = s == 0 ? st.rho1 : st.rho2;
            double mx = 0.0, mn = running_min[s];
            for (double v : rho) {
                mn = std::min(mn, v);
                mx = std::max(mx, std::abs(v));
            }
            running_min[s] = mn;
            if (mn < -1e-12 * std::max(mx, 1e-300))
                throw std::runtime_error("positivity lost in macro species " +
                                         std::to_string(s + 1) + " at t = " +
                                         std::to_string(st.time));
        }
        if (n % sample_stride == 0 || n == nsteps) emit();
    }
    return records;
}

} // namespace chemokin
