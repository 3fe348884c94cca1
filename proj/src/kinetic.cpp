#include "chemokin/kinetic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace chemokin {

namespace {

// Periodic semi-Lagrangian shift by `shift` cells with linear interpolation.
// The fractional part is uniform over the slice, so the update is a convex
// combination with fixed weights: convexity preserves nonnegativity and the
// weights summing to one preserves the slice mass.
void sl_shift_1d(const double* src, double* dst, std::int64_t stride, int n, double shift) {
    const double fl = std::floor(shift);
    const long long m = static_cast<long long>(fl);
    const double phi = shift - fl;  // in [0,1)
    auto wrap = [n](long long i) {
        long long r = i % n;
        return static_cast<int>(r < 0 ? r + n : r);
    };
    if (phi == 0.0) {
        for (int j = 0; j < n; ++j) dst[j * stride] = src[wrap(j - m)];
        return;
    }
    const double w0 = phi;        // weight of src[j - m - 1]
    const double w1 = 1.0 - phi;  // weight of src[j - m]
    int i1 = wrap(-m);
    int i0 = i1 == 0 ? n - 1 : i1 - 1;
    for (int j = 0; j < n; ++j) {
        dst[j * stride] = w0 * src[i0] + w1 * src[i1];
        i0 = i1;
        i1 = i1 + 1 == n ? 0 : i1 + 1;
    }
}

void sl_shift_2d(const double* src, double* dst, std::int64_t stride, int n0, int n1,
                 double shift0, double shift1) {
    const double fl0 = std::floor(shift0), fl1 = std::floor(shift1);
    const long long m0 = static_cast<long long>(fl0), m1 = static_cast<long long>(fl1);
    const double p0 = shift0 - fl0, p1 = shift1 - fl1;
    auto wrap = [](long long i, int n) {
        long long r = i % n;
        return static_cast<int>(r < 0 ? r + n : r);
    };
    const double w00 = p0 * p1, w01 = p0 * (1.0 - p1);
    const double w10 = (1.0 - p0) * p1, w11 = (1.0 - p0) * (1.0 - p1);
    for (int ix = 0; ix < n0; ++ix) {
        const int a1 = wrap(ix - m0, n0);
        const int a0 = a1 == 0 ? n0 - 1 : a1 - 1;
        const double* row0 = src + static_cast<std::int64_t>(a0) * n1;
        const double* row1 = src + static_cast<std::int64_t>(a1) * n1;
        double* out = dst + static_cast<std::int64_t>(ix) * n1 * stride;
        int b1 = wrap(-m1, n1);
        int b0 = b1 == 0 ? n1 - 1 : b1 - 1;
        for (int iy = 0; iy < n1; ++iy) {
            out[iy * stride] = w00 * row0[b0] + w01 * row0[b1] + w10 * row1[b0] + w11 * row1[b1];
            b0 = b1;
            b1 = b1 + 1 == n1 ? 0 : b1 + 1;
        }
    }
}

struct CollideScratch {
    Eigen::MatrixXd a;
    Eigen::VectorXd fold, fnew;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    std::vector<double> args;
};

} // namespace

KineticSolver::KineticSolver(const SpatialGrid& grid, const VelocitySet& vel,
                             const std::array<SpeciesParams, 2>& species, int delta,
                             ThreadPool* pool)
    : grid_(grid), vel_(vel), species_(species), chem_(grid, delta),
      pool_(pool), serial_pool_(1) {
    if (grid.dim != vel.dim) throw std::invalid_argument("grid/velocity dimension mismatch");
    if (!pool_) pool_ = &serial_pool_;
}

KineticState KineticSolver::make_state(const Field& rho1, const Field& rho2, double eps,
                                       double velocity_tilt) const {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in (0,1]");
    const std::int64_t nc = grid_.num_cells();
    if (static_cast<std::int64_t>(rho1.size()) != nc ||
        static_cast<std::int64_t>(rho2.size()) != nc)
        throw std::invalid_argument("initial density size mismatch");
    if (std::abs(velocity_tilt) > 1.0)
        throw std::invalid_argument("velocity tilt must lie in [-1,1] to keep f nonnegative");

    KineticState st;
    st.grid = grid_;
    st.vel = vel_;
    st.eps = eps;
    st.time = 0.0;
    const int nv = vel_.count();
    const double F = vel_.equilibrium();
    st.f1.resize(nc * nv);
    st.f2.resize(nc * nv);
    for (std::int64_t c = 0; c < nc; ++c) {
        for (int k = 0; k < nv; ++k) {
            const double shape = F * (1.0 + velocity_tilt * vel_.nodes[k][0] / vel_.vmax);
            st.f1[c * nv + k] = rho1[c] * shape;
            st.f2[c * nv + k] = rho2[c] * shape;
        }
    }

    Field rho_total(nc);
    for (std::int64_t c = 0; c < nc; ++c) rho_total[c] = rho1[c] + rho2[c];
    if (chem_.delta() == 0) {
        st.chem = chem_.solve_elliptic(rho_total);
        Moments mom = moments(st);
        std::array<Field, 2> j_total;
        for (int a = 0; a < grid_.dim; ++a) {
            j_total[a].resize(nc);
            for (std::int64_t c = 0; c < nc; ++c) j_total[a][c] = mom.J1[a][c] + mom.J2[a][c];
        }
        chem_.set_dt_from_flux(st.chem, j_total);
    } else {
        // S(x,0) = 0; the equation then gives dtS = rho at t = 0.
        st.chem = chem_.initial_field();
        st.chem.dtS = rho_total;
    }
    return st;
}

Moments KineticSolver::moments(const KineticState& st) const {
    const std::int64_t nc = grid_.num_cells();
    const int nv = vel_.count();
    const double F = vel_.equilibrium();
    Moments m;
    m.rho1.resize(nc);
    m.rho2.resize(nc);
    m.r1.resize(nc * nv);
    m.r2.resize(nc * nv);
    for (int a = 0; a < grid_.dim; ++a) {
        m.J1[a].assign(nc, 0.0);
        m.J2[a].assign(nc, 0.0);
    }
    for (std::int64_t c = 0; c < nc; ++c) {
        double rho_a = 0.0, rho_b = 0.0;
        Vec2 ja{0.0, 0.0}, jb{0.0, 0.0};
        for (int k = 0; k < nv; ++k) {
            const double w = vel_.weights[k];
            const double fa = st.f1[c * nv + k];
            const double fb = st.f2[c * nv + k];
            rho_a += w * fa;
            rho_b += w * fb;
            ja[0] += w * vel_.nodes[k][0] * fa;
            jb[0] += w * vel_.nodes[k][0] * fb;
            if (grid_.dim == 2) {
                ja[1] += w * vel_.nodes[k][1] * fa;
                jb[1] += w * vel_.nodes[k][1] * fb;
            }
        }
        m.rho1[c] = rho_a;
        m.rho2[c] = rho_b;
        for (int a = 0; a < grid_.dim; ++a) {
            m.J1[a][c] = ja[a] / st.eps;
            m.J2[a][c] = jb[a] / st.eps;
        }
        for (int k = 0; k < nv; ++k) {
            m.r1[c * nv + k] = (st.f1[c * nv + k] - rho_a * F) / st.eps;
            m.r2[c * nv + k] = (st.f2[c * nv + k] - rho_b * F) / st.eps;
        }
    }
    return m;
}

void KineticSolver::transport(KineticState& st, double dt) {
    const int nv = vel_.count();
    const std::int64_t nc = grid_.num_cells();
    const int nworkers = pool_->size();
    // One gather buffer per worker; tasks are (species, node) slices.
    std::vector<std::vector<double>> scratch(nworkers, std::vector<double>(nc));

    pool_->parallel_for(2 * nv, [&](std::int64_t task, int worker) {
        const int k = static_cast<int>(task % nv);
        Field& f = task < nv ? st.f1 : st.f2;
        std::vector<double>& buf = scratch[worker];
        for (std::int64_t c = 0; c < nc; ++c) buf[c] = f[c * nv + k];
        if (grid_.dim == 1) {
            const double shift = vel_.nodes[k][0] * dt / (st.eps * grid_.spacing(0));
            sl_shift_1d(buf.data(), f.data() + k, nv, grid_.cells[0], shift);
        } else {
            const double s0 = vel_.nodes[k][0] * dt / (st.eps * grid_.spacing(0));
            const double s1 = vel_.nodes[k][1] * dt / (st.eps * grid_.spacing(1));
            sl_shift_2d(buf.data(), f.data() + k, nv, grid_.cells[0], grid_.cells[1], s0, s1);
        }
    });
}

void KineticSolver::update_chem(KineticState& st, double dt) {
    const std::int64_t nc = grid_.num_cells();
    const int nv = vel_.count();
    Field rho_total(nc);
    std::array<Field, 2> j_total;
    for (int a = 0; a < grid_.dim; ++a) j_total[a].assign(nc, 0.0);
    for (std::int64_t c = 0; c < nc; ++c) {
        double rho = 0.0;
        Vec2 j{0.0, 0.0};
        for (int k = 0; k < nv; ++k) {
            const double w = vel_.weights[k];
            const double f = st.f1[c * nv + k] + st.f2[c * nv + k];
            rho += w * f;
            j[0] += w * vel_.nodes[k][0] * f;
            if (grid_.dim == 2) j[1] += w * vel_.nodes[k][1] * f;
        }
        rho_total[c] = rho;
        for (int a = 0; a < grid_.dim; ++a) j_total[a][c] = j[a] / st.eps;
    }
    if (chem_.delta() == 0) {
        st.chem = chem_.solve_elliptic(rho_total);
        chem_.set_dt_from_flux(st.chem, j_total);
    } else {
        st.chem = chem_.step_parabolic(st.chem, rho_total, dt);
    }
}

void KineticSolver::collide(KineticState& st, double dt) {
    const std::int64_t nc = grid_.num_cells();
    const int nv = vel_.count();
    const double lambda = dt / (st.eps * st.eps);
    const int nworkers = pool_->size();
    std::vector<CollideScratch> scratch(nworkers);
    for (auto& s : scratch) {
        s.a.resize(nv, nv);
        s.fold.resize(nv);
        s.fnew.resize(nv);
        s.args.resize(nv);
    }

    pool_->parallel_for(nc, [&](std::int64_t c, int worker) {
        CollideScratch& ws = scratch[worker];
        const double dts = st.chem.dtS[c];
        const double gx = st.chem.gradS[0][c];
        const double gy = grid_.dim == 2 ? st.chem.gradS[1][c] : 0.0;
        for (int k = 0; k < nv; ++k)
            ws.args[k] = st.eps * dts + vel_.nodes[k][0] * gx + vel_.nodes[k][1] * gy;

        for (int s = 0; s < 2; ++s) {
            Field& f = s == 0 ? st.f1 : st.f2;
            ws.a = collision_matrix(species_[s], vel_, st.eps, ws.args);
            ws.a *= lambda;
            ws.a.diagonal().array() += 1.0;
            for (int k = 0; k < nv; ++k) ws.fold[k] = f[c * nv + k];
            ws.lu.compute(ws.a);
            ws.fnew = ws.lu.solve(ws.fold);
            if (!ws.fnew.allFinite())
                throw std::runtime_error("implicit collision solve failed at cell " +
                                         std::to_string(c));
            for (int k = 0; k < nv; ++k) f[c * nv + k] = ws.fnew[k];
        }
    });
}

void KineticSolver::step(KineticState& st, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step requires dt > 0");
    if (!(st.eps > 0.0 && st.eps <= 1.0)) throw std::invalid_argument("eps must lie in (0,1]");
    transport(st, dt);
    update_chem(st, dt);
    collide(st, dt);
    st.time += dt;
}

void KineticSolver::accumulate_sample(const KineticState& st, KineticRecord& rec) const {
    const double cellvol = grid_.cell_volume();
    const int nv = vel_.count();
    const std::int64_t nc = grid_.num_cells();
    for (int s = 0; s < 2; ++s) {
        const Field& f = s == 0 ? st.f1 : st.f2;
        double mass = 0.0, l2 = 0.0, l4 = 0.0, linf = 0.0;
        for (std::int64_t c = 0; c < nc; ++c) {
            for (int k = 0; k < nv; ++k) {
                const double w = cellvol * vel_.weights[k];
                const double v = f[c * nv + k];
                mass += w * v;
                const double v2 = v * v;
                l2 += w * v2;
                l4 += w * v2 * v2;
                linf = std::max(linf, std::abs(v));
            }
        }
        rec.mass[s] = mass;
        rec.l2[s] = std::sqrt(l2);
        rec.l4[s] = std::pow(l4, 0.25);
        rec.linf[s] = linf;
    }
    rec.time = st.time;
}

std::vector<KineticRecord> KineticSolver::run(KineticState& st, double dt, double t_end,
                                              int sample_stride, const SampleFn& on_sample) {
    if (!(t_end > st.time)) throw std::invalid_argument("t_end must exceed the state time");
    if (sample_stride < 1) throw std::invalid_argument("sample stride must be >= 1");
    const long long nsteps = std::llround((t_end - st.time) / dt);
    if (nsteps < 1) throw std::invalid_argument("no steps between state time and t_end");

    const double cellvol = grid_.cell_volume();
    const int nv = vel_.count();
    const std::int64_t nc = grid_.num_cells();
    std::array<double, 2> running_min{0.0, 0.0};
    std::array<double, 2> r_acc{0.0, 0.0};
    for (int s = 0; s < 2; ++s) {
        const Field& f = s == 0 ? st.f1 : st.f2;
        for (double v : f) running_min[s] = std::min(running_min[s], v);
    }

    std::vector<KineticRecord> records;
    auto emit = [&]() {
        KineticRecord rec;
        accumulate_sample(st, rec);
        rec.min_value = running_min;
        rec.r_l2_sq_acc = r_acc;
        records.push_back(rec);
        if (on_sample) on_sample(st, moments(st), rec);
    };
    emit();

    for (long long n = 1; n <= nsteps; ++n) {
        step(st, dt);
        // Per-step accounting: positivity watermark and the fluctuation
        // accumulator int ||r||_2^2 dt, both in fixed serial order.
        const double F = vel_.equilibrium();
        for (int s = 0; s < 2; ++s) {
            const Field& f = s == 0 ? st.f1 : st.f2;
            double acc = 0.0;
            double mn = running_min[s];
            double mx = 0.0;
            for (std::int64_t c = 0; c < nc; ++c) {
                double rho = 0.0;
                for (int k = 0; k < nv; ++k) rho += vel_.weights[k] * f[c * nv + k];
                for (int k = 0; k < nv; ++k) {
                    const double v = f[c * nv + k];
                    mn = std::min(mn, v);
                    mx = std::max(mx, std::abs(v));
                    const double r = (v - rho * F) / st.eps;
                    acc += cellvol * vel_.weights[k] * r * r;
                }
            }
            running_min[s] = mn;
            r_acc[s] += dt * acc;
            if (mn < -1e-12 * std::max(mx, 1e-300))
                throw std::runtime_error("positivity lost in species " + std::to_string(s + 1) +
                                         " at t = " + std::to_string(st.time));
        }
        if (n % sample_stride == 0 || n == nsteps) emit();
    }
    return records;
}

} // namespace chemokin
