#pragma once

#include <functional>

#include "chemokin/chemo.hpp"
#include "chemokin/geometry.hpp"
#include "chemokin/parallel.hpp"
#include "chemokin/tumbling.hpp"

namespace chemokin {

struct MacroState {
    SpatialGrid grid;
    Field rho1, rho2;
    ChemField chem;
    double time = 0.0;
};

struct MacroRecord {
    double time = 0.0;
    std::array<double, 2> mass{};
    std::array<double, 2> linf{};
    std::array<double, 2> l2{};
    std::array<double, 2> l4{};
    std::array<double, 2> min_value{};
};

/// D_i = (1/(|V|^2 psi_i)) int_V v (x) v dv, from the discrete velocity set.
SymMat2 diffusion_coefficient(const SpeciesParams& sp, const VelocitySet& vs);

/// chi_i[S] = -int_V v theta_i(v . grad S) dv / |V|; bounded by amp * vmax.
Vec2 chemotactic_velocity(const SpeciesParams& sp, const VelocitySet& vs, const Vec2& grad_s);

/// Solver for the limiting two-species drift-diffusion system. One step:
/// implicit spectral diffusion per species, explicit conservative upwind
/// drift with chi evaluated per cell face, then the chemoattractant update.
class MacroSolver {
public:
    MacroSolver(const SpatialGrid& grid, const VelocitySet& vel,
                const std::array<SpeciesParams, 2>& species, int delta,
                ThreadPool* pool = nullptr);

    MacroState make_state(const Field& rho1, const Field& rho2) const;

    /// Largest dt admitted by the advective CFL 0.9 dx / max|chi|
    /// (diffusion is implicit and imposes no restriction).
    double cfl_limit(const MacroState& state) const;

    void step(MacroState& state, double dt);

    using SampleFn = std::function<void(const MacroState&, const MacroRecord&)>;
    std::vector<MacroRecord> run(MacroState& state, double dt, double t_end, int sample_stride,
                                 const SampleFn& on_sample = nullptr);

    const std::array<SymMat2, 2>& diffusion() const { return diff_; }
    const std::array<SpeciesParams, 2>& species() const { return species_; }

private:
    void diffuse(Field& rho, const SymMat2& d, double dt);
    void drift(Field& rho, const SpeciesParams& sp, const ChemField& chem, double dt);
    void update_chem(MacroState& state, double dt);

    SpatialGrid grid_;
    VelocitySet vel_;
    std::array<SpeciesParams, 2> species_;
    std::array<SymMat2, 2> diff_;
    ChemSolver chem_;
    SpectralWorkspace spec_;
    ThreadPool* pool_;
    ThreadPool serial_pool_;
    mutable std::vector<std::complex<double>> hat_;
};

} // namespace chemokin
