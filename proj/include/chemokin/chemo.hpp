#pragma once

#include <complex>

#include "chemokin/geometry.hpp"
#include "chemokin/spectral.hpp"

namespace chemokin {

/// Chemoattractant snapshot: S, its spectral gradient, and the time
/// derivative needed by the tumbling argument. Immutable once produced.
struct ChemField {
    Field S;
    std::array<Field, 2> gradS;
    Field dtS;
    int delta = 0;
};

/// Spectral solver for the chemoattractant equation on the periodic grid:
/// elliptic -lap S + S = rho (delta=0) or damped heat
/// dt S = lap S - S + rho stepped by backward Euler (delta=1).
class ChemSolver {
public:
    ChemSolver(const SpatialGrid& grid, int delta);

    const SpatialGrid& grid() const { return grid_; }
    int delta() const { return delta_; }

    ChemField initial_field() const;  // S = 0 (parabolic initial condition)

    /// Exact solve in the discrete Fourier basis: S^hat = rho^hat/(1+|k|^2).
    /// Fills S and gradS; dtS is left zero (see set_dt_from_flux).
    ChemField solve_elliptic(const Field& rho_total) const;

    /// One backward-Euler step:
    ///   S_new^hat = (S_prev^hat + dt rho^hat) / (1 + dt (1+|k|^2)),
    /// with dtS evaluated from the PDE right-hand side lap S_new - S_new + rho
    /// (spectrally), not by time differencing.
    ChemField step_parabolic(const ChemField& prev, const Field& rho_total, double dt) const;

    /// delta=0 companion for dtS: differentiating the elliptic equation in
    /// time and using mass conservation gives -lap u + u = -div(J_total),
    /// u = dt S.
    void set_dt_from_flux(ChemField& field, const std::array<Field, 2>& J_total) const;

private:
    void fill_gradient(const std::vector<std::complex<double>>& s_hat, ChemField& out) const;

    SpatialGrid grid_;
    int delta_;
    SpectralWorkspace spec_;
    mutable std::vector<std::complex<double>> hat_a_, hat_b_;
};

/// eps * dtS + v . gradS at every cell center.
Field tumble_argument(const ChemField& field, const Vec2& v, double eps, int dim);

} // namespace chemokin
