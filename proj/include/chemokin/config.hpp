#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "chemokin/geometry.hpp"
#include "chemokin/tumbling.hpp"

namespace chemokin {

class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ThetaSpec {
    std::string kind = "tanh";  // or "clamped-linear"
    double amp = 0.5;
    double sigma = 1.0;
};

struct SpeciesSpec {
    double psi = 1.0;
    ThetaSpec theta;
};

struct InitSpec {
    enum class Kind { GaussianBump, Uniform, File };
    Kind kind = Kind::Uniform;
    std::array<double, 2> center{0.0, 0.0};
    double width = 0.1;
    std::array<double, 2> mass{1.0, 1.0};  // per species
    double level = 1.0;
    std::string path;
    double tilt = 0.0;  // odd velocity perturbation; 0 = well-prepared
};

struct OutputSpec {
    std::string directory = "out";
    int snapshot_stride = 10;
};

/// Validated run configuration. Parsing is strict: unknown keys are rejected
/// with the JSON pointer of the offending entry.
struct RunConfig {
    enum class Solver { Kinetic, Macro, Sweep, Kernels };
    Solver solver = Solver::Kinetic;

    int dim = 1;
    std::array<double, 2> extent{1.0, 1.0};
    std::array<int, 2> cells{64, 64};

    double vmax = 1.0;
    int nodes_per_axis = 16;

    std::array<SpeciesSpec, 2> species;
    int delta = 0;
    double eps = 0.0;  // kinetic solver scaling
    std::vector<double> eps_list;
    double dt = 0.0;
    double t_end = 0.0;

    InitSpec init;
    OutputSpec output;

    SpatialGrid make_grid() const;
    VelocitySet make_velocity() const;
    std::array<SpeciesParams, 2> make_species() const;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);

/// Initial density of one species on the grid per the init block; for
/// gaussian-bump the discrete normalization makes the cell sum match the
/// requested mass exactly.
Field build_density(const SpatialGrid& grid, const InitSpec& init, int species);

} // namespace chemokin
