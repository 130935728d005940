#pragma once

#include <filesystem>

#include "ddc/config.hpp"
#include "ddc/monitors.hpp"
#include "ddc/rescale.hpp"

namespace ddc {

/// Run a configured simulation and persist its artifacts:
///   config.json, trajectory.csv, budget.csv, snapshots/, manifest.json.
/// The manifest is written last; its presence marks a complete run.
Trajectory execute_run(const RunConfig& cfg, const std::filesystem::path& out_dir);

struct LoadedRun {
    RunConfig config;
    Trajectory traj;
};

/// Reload a completed run directory (throws if the manifest is missing).
LoadedRun load_run(const std::filesystem::path& run_dir);

struct VerifySummary {
    bool all_pass = false;
    int inconclusive = 0;
    std::vector<CheckResult> checks;
};

/// Run every lemma check and write reports/<lemma_id>.json.
VerifySummary verify_run(const std::filesystem::path& run_dir, double burn_in = 1.0);

struct RescaleSummary {
    bool pass = false;
    double L = 0.0;
    double tail_uncertainty = 0.0;
    LimitReport report;
    CoefficientBounds bounds;
};

/// Build the rescaled problem, solve it, cross-validate against the primal
/// end state and persist phi.csv, coefficient snapshots and
/// limit_report.json under <run_dir>/rescale/.
RescaleSummary rescale_run(const std::filesystem::path& run_dir, int tau_count = 512,
                           double rel_gap_tol = 0.05);

/// Emit plot-ready CSV bundles under <run_dir>/report/.
void report_run(const std::filesystem::path& run_dir);

struct SweepRow {
    double m = 0, alpha = 0, ell = 0, epsilon = 0;
    std::string case_label;
    double lambda_hat = 0, L = 0, rel_gap = 0;
    int checks_passed = 0, checks_total = 0;
    bool ok = false;
    std::string error;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<double> cauchy_gaps;  // filled when the tuples form an eps-study
};

/// Run a list of (m, alpha, ell, epsilon) variants of a base config as
/// isolated jobs; aggregate summary.csv (and cauchy.csv for an eps-study).
SweepResult run_sweep(const nlohmann::json& sweep_config,
                      const std::filesystem::path& out_dir, int jobs);

}  // namespace ddc
