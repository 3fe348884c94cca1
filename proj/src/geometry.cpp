#include "chemokin/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace chemokin {

SpatialGrid SpatialGrid::make(int dim, const std::array<double, 2>& extent,
                              const std::array<int, 2>& cells) {
    if (dim != 1 && dim != 2)
        throw std::invalid_argument("grid dim must be 1 or 2, got " + std::to_string(dim));
    SpatialGrid g;
    g.dim = dim;
    g.extent = extent;
    g.cells = cells;
    if (dim == 1) {
        g.extent[1] = 1.0;
        g.cells[1] = 1;
    }
    for (int a = 0; a < dim; ++a) {
        if (!(g.extent[a] > 0.0))
            throw std::invalid_argument("grid extent must be positive on axis " + std::to_string(a));
        if (g.cells[a] < 4)
            throw std::invalid_argument("grid needs at least 4 cells per axis, got " +
                                        std::to_string(g.cells[a]));
    }
    return g;
}

VelocitySet build_velocity_set(int dim, double vmax, int nodes_per_axis) {
    if (dim != 1 && dim != 2)
        throw std::invalid_argument("velocity dim must be 1 or 2");
    if (!(vmax > 0.0))
        throw std::invalid_argument("vmax must be positive");
    if (nodes_per_axis < 2 || nodes_per_axis % 2 != 0)
        throw std::invalid_argument(
            "nodes_per_axis must be even and >= 2 (odd counts break node-mirror symmetry), got " +
            std::to_string(nodes_per_axis));

    const int n = nodes_per_axis;
    const double h = 2.0 * vmax / n;

    VelocitySet vs;
    vs.dim = dim;
    vs.vmax = 0.0;
    vs.measure = dim == 2 ? (2.0 * vmax) * (2.0 * vmax) : 2.0 * vmax;

    auto node_1d = [&](int m) { return -vmax + (m + 0.5) * h; };

    if (dim == 1) {
        const double w = vs.measure / n;
        vs.nodes.reserve(n);
        for (int m = 0; m < n; ++m) {
            vs.nodes.push_back({node_1d(m), 0.0});
            vs.weights.push_back(w);
            vs.mirror.push_back(n - 1 - m);
        }
    } else {
        const double w = vs.measure / (static_cast<double>(n) * n);
        vs.nodes.reserve(static_cast<std::size_t>(n) * n);
        for (int mx = 0; mx < n; ++mx) {
            for (int my = 0; my < n; ++my) {
                vs.nodes.push_back({node_1d(mx), node_1d(my)});
                vs.weights.push_back(w);
                vs.mirror.push_back((n - 1 - mx) * n + (n - 1 - my));
            }
        }
    }
    for (const auto& v : vs.nodes)
        vs.vmax = std::max(vs.vmax, std::hypot(v[0], dim == 2 ? v[1] : 0.0));
    return vs;
}

Vec2 VelocitySet::first_moment() const {
    // Pairwise-mirrored summation: each pair contributes w*(v + (-v)) = 0
    // exactly, so the total is exactly zero rather than round-off small.
    Vec2 m{0.0, 0.0};
    for (int k = 0; k < count(); ++k) {
        int km = mirror[k];
        if (k > km) continue;
        m[0] += weights[k] * nodes[k][0] + weights[km] * nodes[km][0];
        m[1] += weights[k] * nodes[k][1] + weights[km] * nodes[km][1];
    }
    return m;
}

double VelocitySet::weight_sum() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

SymMat2 second_moment_tensor(const VelocitySet& vs) {
    SymMat2 t;
    for (int k = 0; k < vs.count(); ++k) {
        t.xx += vs.weights[k] * vs.nodes[k][0] * vs.nodes[k][0];
        t.xy += vs.weights[k] * vs.nodes[k][0] * vs.nodes[k][1];
        t.yy += vs.weights[k] * vs.nodes[k][1] * vs.nodes[k][1];
    }
    return t;
}

} // namespace chemokin
