#pragma once

#include <string>
#include <vector>

#include "chemokin/geometry.hpp"

namespace chemokin {

/// Binary field snapshot. Layout, all little-endian:
///   magic "CKIN1\0" (6 bytes)
///   u32 dim
///   u32 cells per axis (dim entries)
///   u32 velocity node count (0 for density fields)
///   f64 extent per axis (dim entries)
///   f64 time
///   f64 eps
///   payload: the fields back to back, each num_cells * max(nv,1) f64 values,
///   axis-0 major in space with the velocity index fastest.
/// Round trips are bit-exact.
struct SnapshotHeader {
    int dim = 1;
    std::array<int, 2> cells{0, 0};
    int velocity_nodes = 0;
    std::array<double, 2> extent{0.0, 0.0};
    double time = 0.0;
    double eps = 0.0;

    std::int64_t values_per_field() const {
        std::int64_t n = cells[0];
        if (dim == 2) n *= cells[1];
        return n * std::max(velocity_nodes, 1);
    }
};

struct Snapshot {
    SnapshotHeader header;
    std::vector<Field> fields;
};

void write_snapshot(const std::string& path, const SnapshotHeader& header,
                    const std::vector<const Field*>& fields);

Snapshot read_snapshot(const std::string& path);

} // namespace chemokin
