#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ddc/model.hpp"
#include "ddc/solver.hpp"

// Executable runtime checks over a finished trajectory, one per estimate the
// scheme is expected to honor. Each check is a pure function of the
// trajectory and parameters and serializes to a small JSON report.

namespace ddc {

struct CheckResult {
    std::string lemma_id;
    bool pass = false;
    bool inconclusive = false;  // stopping rule not reached; not counted as failure
    nlohmann::json measured;
    double slack = 0.0;
    std::optional<double> first_violation_t;
    std::string note;

    nlohmann::json to_json() const;
};

/// sup_v nonincreasing across samples (slack 1e-12 * sup_v(0)).
CheckResult check_v_monotone(const Trajectory& traj);

/// mass(u0e) <= mass_u(t) <= mass(u0e) + ell * mass(v0), 1e-8 relative slack.
CheckResult check_mass_sandwich(const Trajectory& traj, const ModelParams& p);

/// consumed(T) <= mass(v0) * (1 + 1e-8).
CheckResult check_consumption(const Trajectory& traj);

/// The grad6 budget is finite and its increments plateau: growth over the
/// final half of the run below 1% of the total.
CheckResult check_grad6_plateau(const Trajectory& traj);

/// Running max of sup_u gains less than 1e-6 * max(1, B) over the final
/// quarter of the run.
CheckResult check_uinf_stable(const Trajectory& traj);

struct HarnackReport {
    std::vector<double> t;
    std::vector<double> ratio;  // min v / max v per sample
    double burn_in = 1.0;
    double lambda_hat = 0.0;    // inf of ratio over t >= burn_in
    double final_slope = 0.0;   // least-squares slope over the final quarter
    bool pass = false;
};

HarnackReport harnack_scan(const Trajectory& traj, double burn_in = 1.0);
CheckResult harnack_check(const Trajectory& traj, double burn_in = 1.0);

struct LadderReport {
    std::vector<double> p;                    // p0 = 4, p_k = 2 p_{k-1} + 2 - m
    std::vector<double> M;                    // 1 + sup over snapshots of int u^{p_k}
    std::vector<double> snapshot_times;
    std::vector<std::vector<double>> norms;   // [snapshot][k] normalized L^{p_k}
    std::vector<double> sup_u;                // per snapshot
    double c1 = 0.0, c2 = 0.0;                // envelope constants
    bool envelope_ok = false;                 // c1 2^k <= p_k <= c2 2^k
    bool monotone_ok = false;                 // norms nondecreasing in k
};

LadderReport ladder_scan(const Trajectory& traj, const ModelParams& p, int k_max = 8);

struct BudgetReport {
    double consumed_total = 0.0;
    double v_mass_initial = 0.0;
    double grad6_total = 0.0;
    double vinf_time_integral = 0.0;  // trapezoid + exponential tail estimate
    double tail = 0.0;
    double lambda_hat = 0.0;
    double bound_rhs = 0.0;           // mass(v0) / (lambda_hat * mass(u0e))
    bool tail_fit_ok = false;
    bool pass_uv1 = false;            // consumed within mass(v0)
    bool pass_integral = false;       // vinf integral within bound_rhs * 1.05
    bool inconclusive = false;
};

BudgetReport budget_scan(const Trajectory& traj, double burn_in = 1.0);
CheckResult budget_check(const Trajectory& traj, double burn_in = 1.0);

struct TestFnSpec {
    int k = 1;
    int l = 1;
    double T_test = 1.0;
};

struct WeakResidual {
    double r_u = 0.0;
    double r_v = 0.0;
};

/// Gaps of the two integrated-by-parts identities against the test function
/// cos(k pi x / Lx) cos(l pi y / Ly) * (1 - (t/T)^2)^3, evaluated by
/// space-time quadrature over stored snapshots (>= 64 needed in the window).
WeakResidual weak_residual(const Trajectory& traj, const ModelParams& p,
                           const TestFnSpec& spec);

/// Constant-test-function reductions of both identities, evaluated on the
/// dense sample series (mass balances against the consumption accumulator).
CheckResult check_weak_identities(const Trajectory& traj, const ModelParams& p);

/// All eight checks in report order.
std::vector<CheckResult> run_all_checks(const Trajectory& traj, const ModelParams& p,
                                        double burn_in = 1.0);

}  // namespace ddc
