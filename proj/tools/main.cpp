#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "chemokin/driver.hpp"

namespace {

int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("CHEMOKIN_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"chemokin: two-species kinetic chemotaxis lab and its drift-diffusion limit"};
    app.require_subcommand(1);

    std::string config_path;
    int threads_flag = 0;
    std::string kernels_out = "kernels.csv";

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config)
            cmd->add_option("--config", config_path, "JSON run configuration")->required();
        cmd->add_option("--threads", threads_flag,
                        "worker threads (overrides CHEMOKIN_THREADS; default 1)");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "run the configured solver");
    add_common(simulate, true);
    CLI::App* sweep = app.add_subcommand("sweep", "kinetic-vs-macro eps convergence sweep");
    add_common(sweep, true);
    CLI::App* kernels = app.add_subcommand("validate-kernels", "kernel norm identity report");
    add_common(kernels, false);
    kernels->add_option("--out", kernels_out, "CSV report path (default kernels.csv)");
    CLI::App* info = app.add_subcommand("info", "print derived quantities for a config");
    add_common(info, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (kernels->parsed()) {
            std::ofstream csv(kernels_out, std::ios::trunc);
            if (!csv) {
                std::cerr << "cannot open " << kernels_out << " for writing\n";
                return 2;
            }
            const bool ok = chemokin::run_validate_kernels(csv);
            std::cout << "kernel norm report written to " << kernels_out
                      << (ok ? " (all pass)" : " (FAILURES)") << "\n";
            return ok ? 0 : 1;
        }

        const chemokin::RunConfig cfg = chemokin::load_config_file(config_path);
        chemokin::ThreadPool pool(resolve_threads(threads_flag));

        if (info->parsed()) {
            chemokin::print_info(cfg, std::cout);
            return 0;
        }
        if (sweep->parsed() || cfg.solver == chemokin::RunConfig::Solver::Sweep) {
            const auto report = chemokin::run_sweep(cfg, pool);
            std::cout << "sweep complete; fitted order "
                      << chemokin::format_double(report.fitted_order) << "\n";
            return 0;
        }
        if (cfg.solver == chemokin::RunConfig::Solver::Kernels) {
            std::ofstream csv(kernels_out, std::ios::trunc);
            const bool ok = chemokin::run_validate_kernels(csv);
            return ok ? 0 : 1;
        }
        const auto outcome = chemokin::run_simulation(cfg, pool);
        for (const auto& c : outcome.checks) {
            std::cout << (c.pass ? "[ok]   " : "[FAIL] ") << c.name << " observed "
                      << chemokin::format_double(c.observed) << " limit "
                      << chemokin::format_double(c.limit) << "\n";
        }
        return outcome.all_bounds_pass ? 0 : 1;
    } catch (const chemokin::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
