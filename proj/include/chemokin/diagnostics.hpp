#pragma once

#include <span>
#include <string>
#include <vector>

#include "chemokin/kinetic.hpp"
#include "chemokin/macro.hpp"

namespace chemokin {

/// Discrete L^q norm (sum measure |v|^q)^{1/q}; q = inf gives max |v|.
/// measure is the quadrature weight of one element (uniform overload) or one
/// weight per element. q < 1 is rejected.
double lq_norm(std::span<const double> values, double q, double measure);
double lq_norm(std::span<const double> values, double q, std::span<const double> measures);

/// Relative L^2 distance between the measured fluctuation r^eps and the
/// leading-order corrector
///   r0(v) = -v . grad rho/(psi |V|^2)
///           + (rho/|V|) (sum_k' w_k' theta(v_k' . grad S)/|V| - theta(v . grad S))
/// evaluated on the state's own moments and chemoattractant gradient.
/// species selects f1 (0) or f2 (1). The closed form assumes a smooth
/// response; a clamped-linear theta triggers a warning on stderr but is
/// evaluated anyway.
double corrector_residual(const KineticState& state, const SpeciesParams& sp, int species);

struct SweepScenario {
    SpatialGrid grid;
    VelocitySet vel;
    std::array<SpeciesParams, 2> species;
    int delta = 0;
    double dt = 1e-3;
    double t_end = 0.1;
    Field rho1_init, rho2_init;
    double velocity_tilt = 0.0;
};

struct SweepEntry {
    double eps = 0.0;
    std::array<double, 2> err_l1{};   // L1 distance of rho_i^eps(T) to macro rho_i(T)
    std::array<double, 2> err_l2{};
    std::array<double, 2> r_l2{};     // sqrt of int_0^T ||r_i||_2^2 dt
    std::array<double, 2> corrector{};
};

struct SweepReport {
    std::vector<SweepEntry> entries;       // one per eps, in the given order
    std::array<double, 2> fitted_order_species{};
    double fitted_order = 0.0;             // min over species
};

/// Least-squares slope of log(err) against log(eps) over the `use_smallest`
/// smallest eps values.
double fit_order(std::span<const double> eps, std::span<const double> err, int use_smallest);

/// Runs the macro reference once and the kinetic solver per eps on identical
/// grids and initial moments, then compares densities at the final time.
/// eps values must be strictly decreasing in (0,1].
SweepReport eps_sweep(const SweepScenario& scenario, std::span<const double> eps_values,
                      ThreadPool* pool = nullptr);

struct BoundCheck {
    std::string name;
    double observed = 0.0;
    double limit = 0.0;
    bool pass = false;
};

/// A-priori bound surrogates over a recorded kinetic trajectory:
/// L1 constancy, the L-infinity exponential envelope, L^q log-slope bounds
/// (q = 2, 4), and finiteness of the fluctuation accumulator. One-sided:
/// each check fails only by exceeding its envelope.
std::vector<BoundCheck> kinetic_bound_checks(const std::vector<KineticRecord>& records,
                                             const std::array<SpeciesParams, 2>& species,
                                             const VelocitySet& vel, double eps);

/// Macro counterparts: L1 constancy and the Gronwall log-slope bounds
/// slope(log ||rho||_q) <= (q-1) (chi_inf)^2 / (2 D_min), q = 2, 4.
std::vector<BoundCheck> macro_bound_checks(const std::vector<MacroRecord>& records,
                                           const std::array<SpeciesParams, 2>& species,
                                           const VelocitySet& vel);

} // namespace chemokin
