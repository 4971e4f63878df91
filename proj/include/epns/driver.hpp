#pragma once

#include <string>
#include <utility>
#include <vector>

#include "epns/config.hpp"
#include "epns/diagnostics.hpp"

namespace epns {

// Least-squares fit of log(value) against log(epsilon).
struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::vector<std::pair<double, double>> points;  // (epsilon, value)
};

RateFit fit_rate(const std::vector<std::pair<double, double>>& points);

struct VpnsRunResult {
    std::vector<DiagnosticsRecord> records;
    double h1_gap = 0.0;
    double h2_gap = 0.0;
    double free_energy0 = 0.0;
    double sup_mod_plus_coulomb = 0.0;
    double sup_rel_entropy = 0.0;
    double sup_mono = 0.0;  // l2_u_diff + l2_v_diff + coulomb_mod, sup over t
    double sup_stress_defect = 0.0;
    double final_stress_defect = 0.0;
    double entropy_residual_max = 0.0;  // max over records of the signed residual
    int max_fluid_substeps = 0;
};

// Coupled kinetic + fluid run with a co-advanced limit-system reference;
// kinetic-only mode freezes fluid and reference. Writes vpns.csv,
// prepared_gaps.json and final snapshots under outdir.
VpnsRunResult run_vpns(const ExperimentConfig& cfg, const std::string& outdir);

struct EpnsRow {
    double t, mass, kinetic, coulomb, fluid, entropy, dissipation_v, dissipation_drag,
        energy_residual, tracker;
};

struct EpnsRunResult {
    std::vector<EpnsRow> rows;
    double tracker0 = 0.0;
    double tracker_max = 0.0;
    double energy_residual_max = 0.0;  // max |residual|
};

// Limit-system run; writes epns.csv and a final field snapshot under outdir.
EpnsRunResult run_epns(const ExperimentConfig& cfg, const std::string& outdir);

struct SweepResult {
    std::vector<double> epsilons;
    std::vector<VpnsRunResult> members;
    RateFit fit_mod_coulomb;
    RateFit fit_rel_entropy;  // sigma > 0 only
    RateFit fit_mono;         // pressureless trend sum
};

// One vpns run per epsilon (parallel up to EPNS_THREADS), a reference epns
// run, rate fits, and summary.json under outdir.
SweepResult sweep(const ExperimentConfig& cfg, const std::string& outdir);

// Re-fit the rates stored in an existing summary.json (in place).
void refit_summary(const std::string& summary_path);

// Recompute one diagnostics row from a phase snapshot plus the matching
// final-fields snapshot written by run_vpns.
DiagnosticsRecord diag_from_snapshots(const std::string& phase_path,
                                      const std::string& fields_path, double delta_floor = 1e-8);

std::string vpns_csv_header();
std::string epns_csv_header();
std::string format_csv_row(const DiagnosticsRecord& r);
std::string format_csv_row(const EpnsRow& r);

} // namespace epns
