#include "chemokin/spectral.hpp"

#include <fftw3.h>

#include <cstring>
#include <stdexcept>

namespace chemokin {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

SpectralWorkspace::SpectralWorkspace(const SpatialGrid& grid) : grid_(grid) {
    const int n0 = grid.cells[0];
    const int n1 = grid.dim == 2 ? grid.cells[1] : 1;

    if (grid.dim == 1)
        num_modes_ = n0 / 2 + 1;
    else
        num_modes_ = static_cast<std::int64_t>(n0) * (n1 / 2 + 1);

    real_buf_ = fftw_alloc_real(grid.num_cells());
    auto* cbuf = fftw_alloc_complex(num_modes_);
    cplx_buf_ = cbuf;
    if (!real_buf_ || !cbuf) throw std::runtime_error("fftw allocation failed");

    if (grid.dim == 1) {
        plan_fwd_ = fftw_plan_dft_r2c_1d(n0, real_buf_, cbuf, FFTW_ESTIMATE);
        plan_bwd_ = fftw_plan_dft_c2r_1d(n0, cbuf, real_buf_, FFTW_ESTIMATE);
    } else {
        plan_fwd_ = fftw_plan_dft_r2c_2d(n0, n1, real_buf_, cbuf, FFTW_ESTIMATE);
        plan_bwd_ = fftw_plan_dft_c2r_2d(n0, n1, cbuf, real_buf_, FFTW_ESTIMATE);
    }
    if (!plan_fwd_ || !plan_bwd_) throw std::runtime_error("fftw planning failed");

    // Mode tables. r2c layout: axis 0 runs over the full signed range, the
    // last axis is halved. Nyquist derivative is zeroed by convention.
    k2_.resize(num_modes_);
    kd_[0].assign(num_modes_, 0.0);
    kd_[1].assign(num_modes_, 0.0);
    auto signed_mode = [](int m, int n) { return m <= n / 2 ? m : m - n; };
    auto deriv_k = [&](int m, int n, double L) {
        if (n % 2 == 0 && m == n / 2) return 0.0;
        return kTwoPi * signed_mode(m, n) / L;
    };
    if (grid.dim == 1) {
        for (int m = 0; m < num_modes_; ++m) {
            const double k = kTwoPi * m / grid.extent[0];
            k2_[m] = k * k;
            kd_[0][m] = deriv_k(m, n0, grid.extent[0]);
        }
    } else {
        const int m1max = n1 / 2 + 1;
        for (int m0 = 0; m0 < n0; ++m0) {
            const double k0 = kTwoPi * signed_mode(m0, n0) / grid.extent[0];
            for (int m1 = 0; m1 < m1max; ++m1) {
                const double k1 = kTwoPi * m1 / grid.extent[1];
                const std::int64_t idx = static_cast<std::int64_t>(m0) * m1max + m1;
                k2_[idx] = k0 * k0 + k1 * k1;
                kd_[0][idx] = deriv_k(m0, n0, grid.extent[0]);
                kd_[1][idx] = deriv_k(m1, n1, grid.extent[1]);
            }
        }
    }
}

SpectralWorkspace::~SpectralWorkspace() {
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    fftw_free(real_buf_);
    fftw_free(cplx_buf_);
}

void SpectralWorkspace::forward(const Field& in, std::vector<std::complex<double>>& out) const {
    if (static_cast<std::int64_t>(in.size()) != grid_.num_cells())
        throw std::invalid_argument("forward: field size mismatch");
    std::memcpy(real_buf_, in.data(), in.size() * sizeof(double));
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    out.resize(num_modes_);
    std::memcpy(out.data(), cplx_buf_, num_modes_ * sizeof(fftw_complex));
}

void SpectralWorkspace::backward(const std::vector<std::complex<double>>& in, Field& out) const {
    if (static_cast<std::int64_t>(in.size()) != num_modes_)
        throw std::invalid_argument("backward: mode count mismatch");
    std::memcpy(cplx_buf_, in.data(), num_modes_ * sizeof(fftw_complex));
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    out.resize(grid_.num_cells());
    const double scale = 1.0 / static_cast<double>(grid_.num_cells());
    for (std::int64_t i = 0; i < grid_.num_cells(); ++i) out[i] = real_buf_[i] * scale;
}

} // namespace chemokin
