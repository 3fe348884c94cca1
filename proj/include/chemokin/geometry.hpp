#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace chemokin {

using Field = std::vector<double>;     // one value per spatial cell, axis-0 major
using Vec2 = std::array<double, 2>;    // point/vector; component 1 unused in 1d

/// Uniform periodic grid on the torus [0,L0) x [0,L1).
/// Cell centers sit at (j + 1/2) * spacing; all indexing wraps.
struct SpatialGrid {
    int dim = 1;
    std::array<double, 2> extent{1.0, 1.0};
    std::array<int, 2> cells{4, 1};

    static SpatialGrid make(int dim, const std::array<double, 2>& extent,
                            const std::array<int, 2>& cells);

    std::int64_t num_cells() const {
        return static_cast<std::int64_t>(cells[0]) * (dim == 2 ? cells[1] : 1);
    }
    double spacing(int axis) const { return extent[axis] / cells[axis]; }
    double cell_volume() const {
        return dim == 2 ? spacing(0) * spacing(1) : spacing(0);
    }
    double domain_volume() const { return dim == 2 ? extent[0] * extent[1] : extent[0]; }

    std::int64_t index(int ix, int iy = 0) const {
        return dim == 2 ? static_cast<std::int64_t>(ix) * cells[1] + iy : ix;
    }
    int wrap(int i, int axis) const {
        int n = cells[axis];
        int m = i % n;
        return m < 0 ? m + n : m;
    }
    Vec2 center(std::int64_t idx) const {
        if (dim == 1) return {(idx + 0.5) * spacing(0), 0.0};
        int iy = static_cast<int>(idx % cells[1]);
        int ix = static_cast<int>(idx / cells[1]);
        return {(ix + 0.5) * spacing(0), (iy + 0.5) * spacing(1)};
    }
};

/// Midpoint quadrature of the cube [-vmax, vmax]^dim with an even number of
/// nodes per axis, so every node has an exact mirror and none sits at v = 0.
/// measure is (2 vmax)^dim by construction, not a floating-point sum.
struct VelocitySet {
    int dim = 1;
    double vmax = 1.0;
    double measure = 2.0;              // |V|
    std::vector<Vec2> nodes;
    std::vector<double> weights;
    std::vector<int> mirror;           // mirror[k] indexes -nodes[k]

    int count() const { return static_cast<int>(nodes.size()); }
    double equilibrium() const { return 1.0 / measure; }  // F = 1/|V| on V

    /// Sum of w_k v_k over mirrored pairs; zero by construction in each term.
    Vec2 first_moment() const;
    /// Quadrature weight sum, for diagnostics (equals measure to round-off).
    double weight_sum() const;
};

struct SymMat2 {
    double xx = 0.0, xy = 0.0, yy = 0.0;
};

VelocitySet build_velocity_set(int dim, double vmax, int nodes_per_axis);

/// Sum_k w_k v_k (x) v_k. Diagonal for the tensor-grid construction.
SymMat2 second_moment_tensor(const VelocitySet& vs);

} // namespace chemokin
