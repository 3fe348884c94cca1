#pragma once

#include <iosfwd>
#include <string>

#include "chemokin/config.hpp"
#include "chemokin/diagnostics.hpp"
#include "chemokin/parallel.hpp"

namespace chemokin {

/// Shortest round-trippable decimal form of a double, for deterministic CSV.
std::string format_double(double v);

struct SimulationOutcome {
    std::vector<BoundCheck> checks;
    bool all_bounds_pass = true;
};

/// Runs the configured kinetic or macro simulation, writing
///   <outdir>/timeseries.csv and field snapshots every snapshot stride.
/// Outputs are byte-identical for a fixed config regardless of pool size.
SimulationOutcome run_simulation(const RunConfig& cfg, ThreadPool& pool,
                                 const std::string& outdir_override = "");

/// Runs the eps sweep and writes <outdir>/sweep.csv plus summary.json.
SweepReport run_sweep(const RunConfig& cfg, ThreadPool& pool,
                      const std::string& outdir_override = "");

SweepScenario sweep_scenario_from_config(const RunConfig& cfg);

/// Kernel norm verification over the documented (dim, p, t) matrix; writes
/// the CSV report (kind,dim,p,t,computed,reference,pass) and returns whether
/// every row passed.
bool run_validate_kernels(std::ostream& csv);

/// Derived quantities: |V|, D_i, the chemotactic bound, CFL and relaxation
/// scales.
void print_info(const RunConfig& cfg, std::ostream& os);

} // namespace chemokin
