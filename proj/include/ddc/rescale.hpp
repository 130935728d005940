#pragma once

#include <vector>

#include "ddc/model.hpp"
#include "ddc/solver.hpp"

// Nutrient-weighted time rescaling: tau = phi(t) = (1/L) int_0^t sup_v,
// L = int_0^inf sup_v. On tau in (0,1) the density solves a transport problem
// with coefficients a(x,tau) = L v / sup_v (cells) and
// b(x,tau) = L v grad v / sup_v (faces); w(.,1) is the long-time limit of u.

namespace ddc {

struct TailEstimate {
    double L = 0.0;        // trapezoid + tail
    double L_trap = 0.0;   // trapezoid over recorded samples
    double tail = 0.0;     // last_sup_v / fitted decay rate; 0 when the fit fails
    double uncertainty = 0.0;  // tail * 0.5
    double rate = 0.0;
    bool fit_ok = false;
};

TailEstimate compute_L(const Trajectory& traj);

struct PhiCurve {
    std::vector<double> t;
    std::vector<double> tau;

    double tau_of_t(double tq) const;  // monotone piecewise-linear
    double t_of_tau(double tauq) const;
};

PhiCurve compute_phi(const Trajectory& traj, double L);

struct CoefficientBounds {
    double a_min = 0.0;
    double a_max = 0.0;
    double b_max = 0.0;
};

struct RescaledProblem {
    Grid grid;
    double L = 0.0;
    double tail_uncertainty = 0.0;
    double lambda_hat = 0.0;
    PhiCurve phi;
    std::vector<double> tau_nodes;   // uniform on [0,1]
    std::vector<ScalarField> a;      // one per node
    std::vector<FaceField> b;
    CoefficientBounds bounds;
    int frozen_tail_nodes = 0;  // nodes beyond phi(T_end), frozen at the end state
};

/// Build L, phi and the coefficient fields from a finished trajectory.
/// v is interpolated linearly in t between bracketing snapshots and the
/// defining formulas applied to the interpolant, so max_x a = L holds at
/// every node. Aborts if min a falls below lambda_hat * L * (1 - 1e-6).
RescaledProblem build_rescaled(const Trajectory& traj, int tau_count = 512,
                               double burn_in = 1.0);

struct LimitSolve {
    std::vector<double> tau;   // sample grid
    std::vector<double> mass;  // integral of w per sample
    std::vector<double> sup;   // sup w per sample
    std::vector<Snapshot> snapshots;  // w stored at requested tau values (v empty)
    ScalarField w_final;
    long long steps = 0;
};

struct LimitSolveOptions {
    double tau_sample_dt = 1.0 / 256.0;
    std::vector<double> snapshot_taus = {0.25, 0.5, 0.75};
    double dt_scale = 1.0;
};

/// March w from w(.,0) = u0 to tau = 1 with the same stepping policy as the
/// primal solver (coefficients interpolated linearly between tau nodes).
LimitSolve solve_limit_problem(const RescaledProblem& prob, const ScalarField& u0,
                               const ModelParams& p, const LimitSolveOptions& opts = {});

struct LimitReport {
    double rel_gap = 0.0;        // |w(.,1) - u(.,T_end)|_inf / |u(.,T_end)|_inf
    double heterogeneity = 0.0;  // |u(.,T_end) - mean|_inf
    double sup_v_end = 0.0;
    bool v_vanished = false;     // sup_v(T_end) < v_tol * sup_v(0)
};

LimitReport compare_limit(const ScalarField& w_final, const Trajectory& traj);

struct EpsilonStudy {
    std::vector<double> eps;
    std::vector<double> gaps;  // sup-norm gaps of u(T) between neighbors
};

/// Cauchy table of final densities at fixed horizon T across a decreasing
/// regularization sequence.
EpsilonStudy epsilon_study(const InitialData& data, const ModelParams& base,
                           const Grid& grid, const std::vector<double>& eps_list,
                           double T);

}  // namespace ddc
