#pragma once

#include <complex>
#include <vector>

#include "chemokin/geometry.hpp"

namespace chemokin {

/// Real-to-complex FFT workspace for one grid (FFTW, serial plans).
/// Not thread-safe; each solver owns its own instance and transforms are
/// always executed from a single thread, which keeps results bit-reproducible
/// for any worker-pool size.
class SpectralWorkspace {
public:
    explicit SpectralWorkspace(const SpatialGrid& grid);
    ~SpectralWorkspace();
    SpectralWorkspace(const SpectralWorkspace&) = delete;
    SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

    const SpatialGrid& grid() const { return grid_; }
    std::int64_t num_modes() const { return num_modes_; }

    void forward(const Field& in, std::vector<std::complex<double>>& out) const;
    /// Inverse transform, normalized so backward(forward(f)) == f to round-off.
    void backward(const std::vector<std::complex<double>>& in, Field& out) const;

    /// |k|^2 per r2c mode, torus wavenumbers k = 2 pi m / L.
    const std::vector<double>& k_squared() const { return k2_; }
    /// k per mode for spectral differentiation; the Nyquist mode is zeroed so
    /// that derivatives of real fields stay real and odd.
    const std::vector<double>& k_deriv(int axis) const { return kd_[axis]; }

private:
    SpatialGrid grid_;
    std::int64_t num_modes_ = 0;
    void* plan_fwd_ = nullptr;
    void* plan_bwd_ = nullptr;
    double* real_buf_ = nullptr;
    void* cplx_buf_ = nullptr;
    std::vector<double> k2_;
    std::array<std::vector<double>, 2> kd_;
};

} // namespace chemokin
