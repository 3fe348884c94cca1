#include "chemokin/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "chemokin/spectral.hpp"

namespace chemokin {

namespace {

void check_q(double q) {
    if (!(q >= 1.0) && !std::isinf(q)) throw std::invalid_argument("lq_norm requires q >= 1");
}

} // namespace

double lq_norm(std::span<const double> values, double q, double measure) {
    check_q(q);
    if (std::isinf(q)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (double v : values) s += measure * std::pow(std::abs(v), q);
    return std::pow(s, 1.0 / q);
}

double lq_norm(std::span<const double> values, double q, std::span<const double> measures) {
    check_q(q);
    if (values.size() != measures.size())
        throw std::invalid_argument("lq_norm: measure size mismatch");
    if (std::isinf(q)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        s += measures[i] * std::pow(std::abs(values[i]), q);
    return std::pow(s, 1.0 / q);
}

double corrector_residual(const KineticState& st, const SpeciesParams& sp, int species) {
    if (species != 0 && species != 1) throw std::invalid_argument("species must be 0 or 1");
    if (!sp.theta.smooth())
        std::cerr << "corrector_residual: clamped-linear response has no derivative at the "
                     "kinks; corrector comparison computed anyway\n";

    const SpatialGrid& grid = st.grid;
    const VelocitySet& vel = st.vel;
    const int nv = vel.count();
    const std::int64_t nc = grid.num_cells();
    const double cellvol = grid.cell_volume();
    const double vol = vel.measure;

    // rho and its spectral gradient.
    Field rho(nc);
    const Field& f = species == 0 ? st.f1 : st.f2;
    for (std::int64_t c = 0; c < nc; ++c) {
        double s = 0.0;
        for (int k = 0; k < nv; ++k) s += vel.weights[k] * f[c * nv + k];
        rho[c] = s;
    }
    SpectralWorkspace spec(grid);
    std::vector<std::complex<double>> hat;
    std::array<Field, 2> grad_rho;
    spec.forward(rho, hat);
    std::vector<std::complex<double>> tmp(hat.size());
    for (int a = 0; a < grid.dim; ++a) {
        const auto& kd = spec.k_deriv(a);
        for (std::size_t m = 0; m < hat.size(); ++m)
            tmp[m] = std::complex<double>(0.0, kd[m]) * hat[m];
        spec.backward(tmp, grad_rho[a]);
    }

    double num = 0.0, den = 0.0;
    std::vector<double> theta_k(nv);
    for (std::int64_t c = 0; c < nc; ++c) {
        const Vec2 g{st.chem.gradS[0][c], grid.dim == 2 ? st.chem.gradS[1][c] : 0.0};
        double theta_avg = 0.0;
        for (int k = 0; k < nv; ++k) {
            theta_k[k] = sp.theta(vel.nodes[k][0] * g[0] + vel.nodes[k][1] * g[1]);
            theta_avg += vel.weights[k] * theta_k[k];
        }
        theta_avg /= vol;
        const double gr0 = grad_rho[0][c];
        const double gr1 = grid.dim == 2 ? grad_rho[1][c] : 0.0;
        for (int k = 0; k < nv; ++k) {
            const double v_dot_grad = vel.nodes[k][0] * gr0 + vel.nodes[k][1] * gr1;
            const double r0 = -v_dot_grad / (sp.psi * vol * vol) +
                              rho[c] / vol * (theta_avg - theta_k[k]);
            const double r_eps = (f[c * nv + k] - rho[c] / vol) / st.eps;
            const double w = cellvol * vel.weights[k];
            num += w * (r_eps - r0) * (r_eps - r0);
            den += w * r0 * r0;
        }
    }
    if (den == 0.0) return std::sqrt(num);
    return std::sqrt(num / den);
}

double fit_order(std::span<const double> eps, std::span<const double> err, int use_smallest) {
    if (eps.size() != err.size() || eps.size() < 2)
        throw std::invalid_argument("fit_order needs matching eps/err with at least 2 points");
    const int n = std::min<int>(use_smallest, static_cast<int>(eps.size()));
    // eps is sorted decreasing; take the last n entries.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const std::size_t start = eps.size() - n;
    for (std::size_t i = start; i < eps.size(); ++i) {
        const double x = std::log(eps[i]);
        const double y = std::log(std::max(err[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SweepReport eps_sweep(const SweepScenario& sc, std::span<const double> eps_values,
                      ThreadPool* pool) {
    if (eps_values.empty()) throw std::invalid_argument("eps_sweep: empty eps list");
    for (std::size_t i = 0; i < eps_values.size(); ++i) {
        if (!(eps_values[i] > 0.0 && eps_values[i] <= 1.0))
            throw std::invalid_argument("eps values must lie in (0,1]");
        if (i > 0 && !(eps_values[i] < eps_values[i - 1]))
            throw std::invalid_argument("eps values must be strictly decreasing");
    }
    if (static_cast<std::int64_t>(sc.rho1_init.size()) != sc.grid.num_cells() ||
        static_cast<std::int64_t>(sc.rho2_init.size()) != sc.grid.num_cells())
        throw std::invalid_argument("eps_sweep: initial density grid mismatch");

    const double cellvol = sc.grid.cell_volume();

    // Macro reference, once, on the same grid/dt/initial moments.
    MacroSolver macro(sc.grid, sc.vel, sc.species, sc.delta, pool);
    MacroState mstate = macro.make_state(sc.rho1_init, sc.rho2_init);
    macro.run(mstate, sc.dt, sc.t_end, 1 << 30);

    SweepReport report;
    for (double eps : eps_values) {
        KineticSolver kin(sc.grid, sc.vel, sc.species, sc.delta, pool);
        KineticState kstate = kin.make_state(sc.rho1_init, sc.rho2_init, eps, sc.velocity_tilt);
        auto records = kin.run(kstate, sc.dt, sc.t_end, 1 << 30);
        const Moments mom = kin.moments(kstate);

        SweepEntry e;
        e.eps = eps;
        for (int s = 0; s < 2; ++s) {
            const Field& rk = s == 0 ? mom.rho1 : mom.rho2;
            const Field& rm = s == 0 ? mstate.rho1 : mstate.rho2;
            double l1 = 0.0, l2 = 0.0;
            for (std::int64_t c = 0; c < sc.grid.num_cells(); ++c) {
                const double d = rk[c] - rm[c];
                l1 += cellvol * std::abs(d);
                l2 += cellvol * d * d;
            }
            e.err_l1[s] = l1;
            e.err_l2[s] = std::sqrt(l2);
            e.r_l2[s] = std::sqrt(records.back().r_l2_sq_acc[s]);
            e.corrector[s] = corrector_residual(kstate, sc.species[s], s);
        }
        report.entries.push_back(e);
    }

    std::vector<double> eps_v(eps_values.begin(), eps_values.end());
    for (int s = 0; s < 2; ++s) {
        std::vector<double> err;
        for (const auto& e : report.entries) err.push_back(e.err_l1[s]);
        report.fitted_order_species[s] = fit_order(eps_v, err, 3);
    }
    report.fitted_order =
        std::min(report.fitted_order_species[0], report.fitted_order_species[1]);
    return report;
}

namespace {

double max_log_slope(const std::vector<double>& times, const std::vector<double>& values) {
    double slope = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double dt = times[i] - times[i - 1];
        if (dt <= 0.0) continue;
        const double a = std::max(values[i - 1], 1e-300);
        const double b = std::max(values[i], 1e-300);
        slope = std::max(slope, (std::log(b) - std::log(a)) / dt);
    }
    return slope;
}

} // namespace

std::vector<BoundCheck> kinetic_bound_checks(const std::vector<KineticRecord>& records,
                                             const std::array<SpeciesParams, 2>& species,
                                             const VelocitySet& vel, double eps) {
    std::vector<BoundCheck> out;
    if (records.empty()) return out;
    // Frozen Gronwall constants c_q in the L^q growth bound
    // d/dt log ||f||_q <= (c_q/2) psi |V| amp^2: c_2 = 2 and c_4 = 6 are the
    // suprema of the convexity factor (1+a)^2 (1-a^{q-1}) / ((1-a)(1+a^q)).
    const double c2_half = 1.0, c4_half = 3.0;

    std::vector<double> times;
    for (const auto& r : records) times.push_back(r.time);

    for (int s = 0; s < 2; ++s) {
        const std::string tag = "species" + std::to_string(s + 1);
        const double psi = species[s].psi;
        const double amp = species[s].theta.amp;
        const double phi_max = psi * (1.0 + eps * amp);

        double drift = 0.0;
        const double m0 = records.front().mass[s];
        for (const auto& r : records)
            drift = std::max(drift, std::abs(r.mass[s] - m0) / std::max(std::abs(m0), 1e-300));
        out.push_back({"l1_constancy_" + tag, drift, 1e-12, drift <= 1e-12});

        double env_excess = 0.0;
        const double linf0 = records.front().linf[s];
        for (const auto& r : records) {
            const double envelope =
                1.05 * linf0 * std::exp(vel.measure * phi_max * (r.time - records.front().time));
            env_excess = std::max(env_excess, r.linf[s] / std::max(envelope, 1e-300));
        }
        out.push_back({"linf_envelope_" + tag, env_excess, 1.0, env_excess <= 1.0});

        std::vector<double> l2s, l4s;
        for (const auto& r : records) {
            l2s.push_back(r.l2[s]);
            l4s.push_back(r.l4[s]);
        }
        const double lim2 = c2_half * psi * vel.measure * amp * amp;
        const double lim4 = c4_half * psi * vel.measure * amp * amp;
        const double s2 = max_log_slope(times, l2s);
        const double s4 = max_log_slope(times, l4s);
        const double slack = 1e-9;
        out.push_back({"l2_growth_slope_" + tag, s2, lim2, s2 <= lim2 + slack});
        out.push_back({"l4_growth_slope_" + tag, s4, lim4, s4 <= lim4 + slack});

        const double racc = records.back().r_l2_sq_acc[s];
        out.push_back({"r_l2_finite_" + tag, racc, std::numeric_limits<double>::infinity(),
                       std::isfinite(racc)});
    }
    return out;
}

std::vector<BoundCheck> macro_bound_checks(const std::vector<MacroRecord>& records,
                                           const std::array<SpeciesParams, 2>& species,
                                           const VelocitySet& vel) {
    std::vector<BoundCheck> out;
    if (records.empty()) return out;
    std::vector<double> times;
    for (const auto& r : records) times.push_back(r.time);

    for (int s = 0; s < 2; ++s) {
        const std::string tag = "species" + std::to_string(s + 1);
        const SymMat2 d = diffusion_coefficient(species[s], vel);
        const double d_min = vel.dim == 2 ? std::min(d.xx, d.yy) : d.xx;
        const double chi_inf = species[s].theta.amp * vel.vmax;

        double drift = 0.0;
        const double m0 = records.front().mass[s];
        for (const auto& r : records)
            drift = std::max(drift, std::abs(r.mass[s] - m0) / std::max(std::abs(m0), 1e-300));
        out.push_back({"l1_constancy_" + tag, drift, 1e-12, drift <= 1e-12});

        std::vector<double> l2s, l4s;
        for (const auto& r : records) {
            l2s.push_back(r.l2[s]);
            l4s.push_back(r.l4[s]);
        }
        // slope(log ||rho||_q) <= (q-1) (chi_inf)^2 / (2 D_min), 10% slack.
        const double base = chi_inf * chi_inf / (2.0 * d_min);
        const double s2 = max_log_slope(times, l2s);
        const double s4 = max_log_slope(times, l4s);
        out.push_back({"l2_growth_slope_" + tag, s2, 1.1 * base, s2 <= 1.1 * base});
        out.push_back({"l4_growth_slope_" + tag, s4, 1.1 * 3.0 * base, s4 <= 1.1 * 3.0 * base});
    }
    return out;
}

} // namespace chemokin
