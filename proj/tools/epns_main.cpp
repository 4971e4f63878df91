#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "epns/driver.hpp"

using namespace epns;

namespace {

int check_run_vpns(const ExperimentConfig& cfg, const VpnsRunResult& res) {
    auto it = cfg.tolerances.find("entropy_residual_rel");
    if (it != cfg.tolerances.end()) {
        double bound = it->second * std::abs(res.free_energy0);
        if (res.entropy_residual_max > bound) {
            std::fprintf(stderr, "check failed: entropy residual %.3e > %.3e\n",
                         res.entropy_residual_max, bound);
            return 4;
        }
    }
    return 0;
}

int check_run_epns(const ExperimentConfig& cfg, const EpnsRunResult& res) {
    auto it = cfg.tolerances.find("tracker_growth");
    if (it != cfg.tolerances.end()) {
        if (res.tracker_max > it->second * res.tracker0) {
            std::fprintf(stderr, "check failed: tracker grew %.3f x > %.3f x\n",
                         res.tracker_max / res.tracker0, it->second);
            return 4;
        }
    }
    return 0;
}

int check_sweep(const ExperimentConfig& cfg, const SweepResult& res) {
    int rc = 0;
    auto expect = [&](const char* key, double actual, bool ge) {
        auto it = cfg.tolerances.find(key);
        if (it == cfg.tolerances.end()) return;
        bool ok = ge ? actual >= it->second : actual <= it->second;
        if (!ok) {
            std::fprintf(stderr, "check failed: %s = %.4f vs bound %.4f\n", key, actual,
                         it->second);
            rc = 4;
        }
    };
    expect("slope_mod_coulomb_min", res.fit_mod_coulomb.slope, true);
    expect("r2_mod_coulomb_min", res.fit_mod_coulomb.r2, true);
    if (cfg.sigma > 0.0) expect("slope_rel_entropy_min", res.fit_rel_entropy.slope, true);
    if (cfg.tolerances.count("mono_decreasing")) {
        for (std::size_t i = 1; i < res.members.size(); ++i)
            if (res.members[i].sup_mono >= res.members[i - 1].sup_mono) {
                std::fprintf(stderr, "check failed: sup_mono not strictly decreasing at %zu\n", i);
                rc = 4;
            }
    }
    return rc;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kinetic-fluid hydrodynamic-limit laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    std::vector<std::string> overrides;
    bool check = false;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* opt = cmd->add_option("--config", config_path, "config file (INI)");
        if (needs_config) opt->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--override", overrides, "override section.key=value")->take_all();
        cmd->add_flag("--check", check, "verify configured tolerances (exit 4 on failure)");
    };

    auto* cmd_run = app.add_subcommand("run", "single run (mode from config)");
    add_common(cmd_run, true);
    auto* cmd_sweep = app.add_subcommand("sweep", "epsilon sweep with rate fits");
    add_common(cmd_sweep, true);

    auto* cmd_diag = app.add_subcommand("diag", "recompute diagnostics from snapshots");
    std::string phase_path, fields_path;
    cmd_diag->add_option("--phase", phase_path, "phase snapshot (.epns)")->required();
    cmd_diag->add_option("--fields", fields_path, "final-fields snapshot (.epns)")->required();

    auto* cmd_fit = app.add_subcommand("fit", "refit rates in an existing summary.json");
    std::string summary_path;
    cmd_fit->add_option("--summary", summary_path, "summary.json path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            ExperimentConfig cfg = load_config(config_path, overrides);
            if (cfg.mode == RunMode::sweep) {
                std::fprintf(stderr, "config mode is 'sweep'; use the sweep subcommand\n");
                return 2;
            }
            if (cfg.mode == RunMode::epns) {
                auto res = run_epns(cfg, out_dir);
                std::printf("epns run complete: %zu records, tracker %.6g -> max %.6g\n",
                            res.rows.size(), res.tracker0, res.tracker_max);
                if (check) return check_run_epns(cfg, res);
            } else {
                auto res = run_vpns(cfg, out_dir);
                std::printf("vpns run complete: %zu records, max entropy residual %.6g\n",
                            res.records.size(), res.entropy_residual_max);
                if (check) return check_run_vpns(cfg, res);
            }
        } else if (cmd_sweep->parsed()) {
            ExperimentConfig cfg = load_config(config_path, overrides);
            auto res = sweep(cfg, out_dir);
            std::printf("sweep complete: slope(mod+coulomb) = %.4f (r2 %.4f)\n",
                        res.fit_mod_coulomb.slope, res.fit_mod_coulomb.r2);
            if (check) return check_sweep(cfg, res);
        } else if (cmd_diag->parsed()) {
            auto rec = diag_from_snapshots(phase_path, fields_path);
            std::printf("%s\n%s\n", vpns_csv_header().c_str(), format_csv_row(rec).c_str());
        } else if (cmd_fit->parsed()) {
            refit_summary(summary_path);
            std::printf("refit written to %s\n", summary_path.c_str());
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const ContractViolation& e) {
        std::fprintf(stderr, "contract violation: %s\n", e.what());
        return 2;
    } catch (const SolverAbort& e) {
        std::fprintf(stderr, "solver abort at t = %.6g: %s\n", e.time, e.what());
        return 3;
    } catch (const StepSizeError& e) {
        std::fprintf(stderr, "step-size error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
