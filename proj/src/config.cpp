#include "chemokin/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "chemokin/snapshot.hpp"

namespace chemokin {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& pointer, const std::string& message) {
    throw ConfigError(pointer + ": " + message);
}

void require_keys(const json& obj, const std::string& pointer,
                  const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            fail(pointer + "/" + it.key(), "unknown key (strict schema)");
    }
}

double get_number(const json& obj, const std::string& pointer, const std::string& key,
                  bool required, double fallback = 0.0) {
    if (!obj.contains(key)) {
        if (required) fail(pointer + "/" + key, "required key missing");
        return fallback;
    }
    if (!obj[key].is_number()) fail(pointer + "/" + key, "expected a number");
    return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& pointer, const std::string& key, bool required,
            int fallback = 0) {
    if (!obj.contains(key)) {
        if (required) fail(pointer + "/" + key, "required key missing");
        return fallback;
    }
    if (!obj[key].is_number_integer()) fail(pointer + "/" + key, "expected an integer");
    return obj[key].get<int>();
}

std::string get_string(const json& obj, const std::string& pointer, const std::string& key,
                       bool required, const std::string& fallback = "") {
    if (!obj.contains(key)) {
        if (required) fail(pointer + "/" + key, "required key missing");
        return fallback;
    }
    if (!obj[key].is_string()) fail(pointer + "/" + key, "expected a string");
    return obj[key].get<std::string>();
}

// Axis-valued entry: a number applies to every axis, an array gives one value
// per axis.
template <typename T>
std::array<T, 2> get_per_axis(const json& obj, const std::string& pointer, const std::string& key,
                              int dim) {
    std::array<T, 2> out{};
    const json& v = obj[key];
    if (v.is_array()) {
        if (static_cast<int>(v.size()) != dim)
            fail(pointer + "/" + key, "expected " + std::to_string(dim) + " entries");
        for (int a = 0; a < dim; ++a) {
            if (!v[a].is_number()) fail(pointer + "/" + key, "expected numbers");
            out[a] = v[a].get<T>();
        }
    } else if (v.is_number()) {
        for (int a = 0; a < dim; ++a) out[a] = v.get<T>();
    } else {
        fail(pointer + "/" + key, "expected a number or per-axis array");
    }
    return out;
}

SpeciesSpec parse_species(const json& obj, const std::string& pointer) {
    require_keys(obj, pointer, {"psi", "theta"});
    SpeciesSpec sp;
    sp.psi = get_number(obj, pointer, "psi", false, 1.0);
    if (!(sp.psi > 0.0)) fail(pointer + "/psi", "must be positive");
    if (obj.contains("theta")) {
        const json& th = obj["theta"];
        const std::string tp = pointer + "/theta";
        if (!th.is_object()) fail(tp, "expected an object");
        require_keys(th, tp, {"kind", "amp", "sigma"});
        sp.theta.kind = get_string(th, tp, "kind", false, "tanh");
        if (sp.theta.kind != "tanh" && sp.theta.kind != "clamped-linear")
            fail(tp + "/kind", "expected \"tanh\" or \"clamped-linear\"");
        sp.theta.amp = get_number(th, tp, "amp", false, 0.5);
        sp.theta.sigma = get_number(th, tp, "sigma", false, 1.0);
        if (!(sp.theta.amp > 0.0 && sp.theta.amp < 1.0))
            fail(tp + "/amp", "response amplitude " + std::to_string(sp.theta.amp) +
                                  " violates the bound ||theta||_inf < 1 required of the "
                                  "tumbling response");
        if (!(sp.theta.sigma > 0.0)) fail(tp + "/sigma", "must be positive");
    }
    return sp;
}

InitSpec parse_init(const json& obj, const std::string& pointer, int dim) {
    require_keys(obj, pointer, {"kind", "center", "width", "mass", "level", "path", "tilt"});
    InitSpec init;
    const std::string kind = get_string(obj, pointer, "kind", true);
    if (kind == "gaussian-bump") {
        init.kind = InitSpec::Kind::GaussianBump;
        if (!obj.contains("center")) fail(pointer + "/center", "required for gaussian-bump");
        init.center = get_per_axis<double>(obj, pointer, "center", dim);
        init.width = get_number(obj, pointer, "width", true);
        if (!(init.width > 0.0)) fail(pointer + "/width", "must be positive");
        if (!obj.contains("mass")) fail(pointer + "/mass", "required for gaussian-bump");
        const json& m = obj["mass"];
        if (!m.is_array() || m.size() != 2 || !m[0].is_number() || !m[1].is_number())
            fail(pointer + "/mass", "expected [mass_species1, mass_species2]");
        init.mass = {m[0].get<double>(), m[1].get<double>()};
        if (init.mass[0] < 0.0 || init.mass[1] < 0.0) fail(pointer + "/mass", "must be >= 0");
    } else if (kind == "uniform") {
        init.kind = InitSpec::Kind::Uniform;
        init.level = get_number(obj, pointer, "level", false, 1.0);
        if (init.level < 0.0) fail(pointer + "/level", "must be >= 0");
    } else if (kind == "file") {
        init.kind = InitSpec::Kind::File;
        init.path = get_string(obj, pointer, "path", true);
    } else {
        fail(pointer + "/kind", "expected gaussian-bump, uniform, or file");
    }
    init.tilt = get_number(obj, pointer, "tilt", false, 0.0);
    if (std::abs(init.tilt) > 1.0) fail(pointer + "/tilt", "must lie in [-1,1]");
    return init;
}

} // namespace

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("/: invalid JSON: ") + e.what());
    }
    if (!root.is_object()) fail("/", "top level must be an object");
    require_keys(root, "", {"solver", "grid", "velocity", "species", "delta", "eps", "eps_list",
                            "dt", "t_end", "init", "output"});

    RunConfig cfg;
    const std::string solver = get_string(root, "", "solver", true);
    if (solver == "kinetic")
        cfg.solver = RunConfig::Solver::Kinetic;
    else if (solver == "macro")
        cfg.solver = RunConfig::Solver::Macro;
    else if (solver == "sweep")
        cfg.solver = RunConfig::Solver::Sweep;
    else if (solver == "kernels")
        cfg.solver = RunConfig::Solver::Kernels;
    else
        fail("/solver", "expected kinetic, macro, sweep, or kernels");

    const bool needs_run_block = cfg.solver != RunConfig::Solver::Kernels;

    if (root.contains("grid")) {
        const json& g = root["grid"];
        if (!g.is_object()) fail("/grid", "expected an object");
        require_keys(g, "/grid", {"dim", "extent", "cells"});
        cfg.dim = get_int(g, "/grid", "dim", true);
        if (cfg.dim != 1 && cfg.dim != 2) fail("/grid/dim", "must be 1 or 2");
        if (!g.contains("extent")) fail("/grid/extent", "required key missing");
        cfg.extent = get_per_axis<double>(g, "/grid", "extent", cfg.dim);
        for (int a = 0; a < cfg.dim; ++a)
            if (!(cfg.extent[a] > 0.0)) fail("/grid/extent", "must be positive");
        if (!g.contains("cells")) fail("/grid/cells", "required key missing");
        cfg.cells = get_per_axis<int>(g, "/grid", "cells", cfg.dim);
        for (int a = 0; a < cfg.dim; ++a)
            if (cfg.cells[a] < 4) fail("/grid/cells", "needs at least 4 cells per axis");
    } else if (needs_run_block) {
        fail("/grid", "required key missing");
    }

    if (root.contains("velocity")) {
        const json& v = root["velocity"];
        if (!v.is_object()) fail("/velocity", "expected an object");
        require_keys(v, "/velocity", {"vmax", "nodes_per_axis"});
        cfg.vmax = get_number(v, "/velocity", "vmax", false, 1.0);
        if (!(cfg.vmax > 0.0)) fail("/velocity/vmax", "must be positive");
        cfg.nodes_per_axis = get_int(v, "/velocity", "nodes_per_axis", false, 16);
        if (cfg.nodes_per_axis < 2 || cfg.nodes_per_axis % 2 != 0)
            fail("/velocity/nodes_per_axis",
                 "must be even and >= 2 so every node has a mirror");
    }

    if (root.contains("species")) {
        const json& sp = root["species"];
        if (!sp.is_array() || sp.size() != 2)
            fail("/species", "expected an array of exactly 2 species");
        for (int i = 0; i < 2; ++i) {
            if (!sp[i].is_object()) fail("/species/" + std::to_string(i), "expected an object");
            cfg.species[i] = parse_species(sp[i], "/species/" + std::to_string(i));
        }
    }

    cfg.delta = get_int(root, "", "delta", false, 0);
    if (cfg.delta != 0 && cfg.delta != 1) fail("/delta", "must be 0 or 1");

    if (root.contains("eps")) {
        cfg.eps = get_number(root, "", "eps", false, 0.0);
    }
    if (root.contains("eps_list")) {
        const json& el = root["eps_list"];
        if (!el.is_array() || el.size() < 2) fail("/eps_list", "expected an array of >= 2 values");
        for (const auto& e : el) {
            if (!e.is_number()) fail("/eps_list", "expected numbers");
            cfg.eps_list.push_back(e.get<double>());
        }
        for (std::size_t i = 0; i < cfg.eps_list.size(); ++i) {
            if (!(cfg.eps_list[i] > 0.0 && cfg.eps_list[i] <= 1.0))
                fail("/eps_list", "values must lie in (0,1]");
            if (i > 0 && !(cfg.eps_list[i] < cfg.eps_list[i - 1]))
                fail("/eps_list", "values must be strictly decreasing");
        }
    }

    if (cfg.solver == RunConfig::Solver::Kinetic) {
        if (!root.contains("eps")) fail("/eps", "required for the kinetic solver");
        if (cfg.eps == 0.0)
            fail("/eps", "eps = 0 is outside the kinetic scaling; use solver=macro for the "
                         "limiting system");
        if (!(cfg.eps > 0.0 && cfg.eps <= 1.0)) fail("/eps", "must lie in (0,1]");
    }
    if (cfg.solver == RunConfig::Solver::Sweep && cfg.eps_list.empty())
        fail("/eps_list", "required for the sweep solver");

    if (needs_run_block) {
        cfg.dt = get_number(root, "", "dt", true);
        if (!(cfg.dt > 0.0)) fail("/dt", "must be positive");
        cfg.t_end = get_number(root, "", "t_end", true);
        if (!(cfg.t_end > 0.0)) fail("/t_end", "must be positive");
    }

    if (root.contains("init")) {
        if (!root["init"].is_object()) fail("/init", "expected an object");
        cfg.init = parse_init(root["init"], "/init", cfg.dim);
    }

    if (root.contains("output")) {
        const json& o = root["output"];
        if (!o.is_object()) fail("/output", "expected an object");
        require_keys(o, "/output", {"directory", "snapshot_stride"});
        cfg.output.directory = get_string(o, "/output", "directory", false, "out");
        cfg.output.snapshot_stride = get_int(o, "/output", "snapshot_stride", false, 10);
        if (cfg.output.snapshot_stride < 1) fail("/output/snapshot_stride", "must be >= 1");
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

SpatialGrid RunConfig::make_grid() const { return SpatialGrid::make(dim, extent, cells); }

VelocitySet RunConfig::make_velocity() const {
    return build_velocity_set(dim, vmax, nodes_per_axis);
}

std::array<SpeciesParams, 2> RunConfig::make_species() const {
    std::array<SpeciesParams, 2> out;
    for (int i = 0; i < 2; ++i) {
        const auto kind = species[i].theta.kind == "tanh" ? ResponseFunction::Kind::Tanh
                                                          : ResponseFunction::Kind::ClampedLinear;
        out[i] = SpeciesParams::make(
            species[i].psi,
            ResponseFunction::make(kind, species[i].theta.amp, species[i].theta.sigma));
    }
    return out;
}

Field build_density(const SpatialGrid& grid, const InitSpec& init, int species) {
    const std::int64_t nc = grid.num_cells();
    Field rho(nc, 0.0);
    switch (init.kind) {
        case InitSpec::Kind::Uniform:
            rho.assign(nc, init.level);
            break;
        case InitSpec::Kind::GaussianBump: {
            double sum = 0.0;
            for (std::int64_t c = 0; c < nc; ++c) {
                const Vec2 x = grid.center(c);
                double d2 = 0.0;
                for (int a = 0; a < grid.dim; ++a) {
                    double d = std::abs(x[a] - init.center[a]);
                    d = std::min(d, grid.extent[a] - d);  // periodic distance
                    d2 += d * d;
                }
                rho[c] = std::exp(-d2 / (2.0 * init.width * init.width));
                sum += rho[c];
            }
            const double scale = init.mass[species] / (sum * grid.cell_volume());
            for (double& v : rho) v *= scale;
            break;
        }
        case InitSpec::Kind::File: {
            Snapshot snap = read_snapshot(init.path);
            if (snap.header.dim != grid.dim || snap.header.velocity_nodes != 0)
                throw ConfigError("init file must hold density fields on a matching grid");
            for (int a = 0; a < grid.dim; ++a)
                if (snap.header.cells[a] != grid.cells[a])
                    throw ConfigError("init file grid does not match the configured grid");
            if (static_cast<int>(snap.fields.size()) < 2)
                throw ConfigError("init file must hold both species densities");
            rho = snap.fields[species];
            break;
        }
    }
    return rho;
}

} // namespace chemokin
