#pragma once

#include <functional>

#include "chemokin/chemo.hpp"
#include "chemokin/geometry.hpp"
#include "chemokin/parallel.hpp"
#include "chemokin/tumbling.hpp"

namespace chemokin {

/// Distributions of both species on (space cells x velocity nodes),
/// cell-major with the velocity index fastest, plus the chemoattractant
/// snapshot they were last coupled to.
struct KineticState {
    SpatialGrid grid;
    VelocitySet vel;
    Field f1, f2;
    ChemField chem;
    double eps = 1.0;
    double time = 0.0;
};

struct Moments {
    Field rho1, rho2;                  // per cell
    std::array<Field, 2> J1, J2;       // per cell, per axis
    Field r1, r2;                      // fluctuations (f - rho F)/eps, cell x node
};

/// One observer sample of a run.
struct KineticRecord {
    double time = 0.0;
    std::array<double, 2> mass{};        // cellvol sum_k w_k f
    std::array<double, 2> linf{};
    std::array<double, 2> l2{};
    std::array<double, 2> l4{};
    std::array<double, 2> min_value{};   // running minimum over all steps so far
    std::array<double, 2> r_l2_sq_acc{}; // running int_0^t ||r_i||_2^2 dt
};

/// Asymptotic-preserving integrator for the scaled two-species kinetic
/// system. One step is a Lie splitting:
///   (1) semi-Lagrangian transport of every f(.,v_k) by (v_k/eps) dt,
///       conservative linear interpolation on the periodic grid,
///   (2) chemoattractant update from the transported densities,
///   (3) implicit collision per cell: (I + dt/eps^2 M) f_new = f_old.
class KineticSolver {
public:
    KineticSolver(const SpatialGrid& grid, const VelocitySet& vel,
                  const std::array<SpeciesParams, 2>& species, int delta,
                  ThreadPool* pool = nullptr);

    /// Well-prepared state f_i = rho_i F, optionally tilted by
    /// (1 + tilt v_x/vmax) to leave the local-equilibrium manifold.
    KineticState make_state(const Field& rho1, const Field& rho2, double eps,
                            double velocity_tilt = 0.0) const;

    void step(KineticState& state, double dt);

    Moments moments(const KineticState& state) const;

    using SampleFn =
        std::function<void(const KineticState&, const Moments&, const KineticRecord&)>;

    /// Repeated stepping to t_end; samples every sample_stride steps (plus the
    /// initial and final states). Returns the sampled records.
    std::vector<KineticRecord> run(KineticState& state, double dt, double t_end,
                                   int sample_stride, const SampleFn& on_sample = nullptr);

    const std::array<SpeciesParams, 2>& species() const { return species_; }
    const ChemSolver& chem_solver() const { return chem_; }
    int delta() const { return chem_.delta(); }

private:
    void transport(KineticState& state, double dt);
    void update_chem(KineticState& state, double dt);
    void collide(KineticState& state, double dt);
    void accumulate_sample(const KineticState& state, KineticRecord& rec) const;

    SpatialGrid grid_;
    VelocitySet vel_;
    std::array<SpeciesParams, 2> species_;
    ChemSolver chem_;
    ThreadPool* pool_;
    ThreadPool serial_pool_;
};

} // namespace chemokin
