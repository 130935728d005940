#include "ddc/rescale.hpp"

#include <algorithm>
#include <cmath>

#include "ddc/discrete.hpp"
#include "ddc/kernels.hpp"
#include "ddc/monitors.hpp"
#include "ddc/series.hpp"

namespace ddc {

TailEstimate compute_L(const Trajectory& traj) {
    if (traj.samples.size() < 2) throw ConfigError("compute_L: trajectory too short");
    std::vector<double> t, sv;
    for (const Sample& s : traj.samples) {
        t.push_back(s.t);
        sv.push_back(s.sup_v);
    }
    TailEstimate est;
    est.L_trap = trapezoid(t, sv);
    const DecayFit fit = fit_decay_rate(t, sv);
    est.fit_ok = fit.ok;
    if (fit.ok) {
        est.rate = fit.rate;
        est.tail = sv.back() / fit.rate;
        est.uncertainty = 0.5 * est.tail;
    }
    est.L = est.L_trap + est.tail;
    return est;
}

double PhiCurve::tau_of_t(double tq) const {
    if (tq <= t.front()) return tau.front();
    if (tq >= t.back()) return tau.back();
    const auto it = std::upper_bound(t.begin(), t.end(), tq);
    const size_t i = static_cast<size_t>(it - t.begin());
    const double w = (tq - t[i - 1]) / (t[i] - t[i - 1]);
    return tau[i - 1] + w * (tau[i] - tau[i - 1]);
}

double PhiCurve::t_of_tau(double tauq) const {
    if (tauq <= tau.front()) return t.front();
    if (tauq >= tau.back()) return t.back();
    const auto it = std::upper_bound(tau.begin(), tau.end(), tauq);
    const size_t i = static_cast<size_t>(it - tau.begin());
    const double w = (tauq - tau[i - 1]) / (tau[i] - tau[i - 1]);
    return t[i - 1] + w * (t[i] - t[i - 1]);
}

PhiCurve compute_phi(const Trajectory& traj, double L) {
    if (!(L > 0.0)) throw ConfigError("compute_phi: L must be positive");
    PhiCurve phi;
    phi.t.reserve(traj.samples.size());
    phi.tau.reserve(traj.samples.size());
    double acc = 0.0;
    double prev_t = 0.0, prev_v = 0.0;
    for (size_t i = 0; i < traj.samples.size(); ++i) {
        const Sample& s = traj.samples[i];
        if (i > 0) acc += 0.5 * (s.t - prev_t) * (s.sup_v + prev_v);
        prev_t = s.t;
        prev_v = s.sup_v;
        phi.t.push_back(s.t);
        phi.tau.push_back(acc / L);
    }
    return phi;
}

namespace {

// v linearly interpolated in t between the bracketing snapshots
ScalarField interp_v(const Trajectory& traj, double tq) {
    const auto& snaps = traj.snapshots;
    if (tq <= snaps.front().t) return snaps.front().v;
    if (tq >= snaps.back().t) return snaps.back().v;
    size_t hi = 1;
    while (snaps[hi].t < tq) ++hi;
    const Snapshot& s0 = snaps[hi - 1];
    const Snapshot& s1 = snaps[hi];
    const double w = (tq - s0.t) / (s1.t - s0.t);
    ScalarField out(s0.v.grid);
    const int n = out.size();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
        out.data[static_cast<size_t>(i)] =
            (1.0 - w) * s0.v.data[static_cast<size_t>(i)] +
            w * s1.v.data[static_cast<size_t>(i)];
    return out;
}

}  // namespace

RescaledProblem build_rescaled(const Trajectory& traj, int tau_count, double burn_in) {
    if (traj.snapshots.size() < 2)
        throw ConfigError("build_rescaled: needs stored snapshots");
    if (tau_count < 2) throw ConfigError("build_rescaled: tau_count must be >= 2");

    RescaledProblem prob;
    prob.grid = traj.grid;
    const TailEstimate est = compute_L(traj);
    prob.L = est.L;
    prob.tail_uncertainty = est.uncertainty;
    prob.phi = compute_phi(traj, est.L);
    prob.lambda_hat = harnack_scan(traj, burn_in).lambda_hat;

    const double tau_end = prob.phi.tau.back();
    prob.bounds.a_min = std::numeric_limits<double>::infinity();
    FaceField gv(prob.grid);

    for (int j = 0; j < tau_count; ++j) {
        const double tau = double(j) / double(tau_count - 1);
        prob.tau_nodes.push_back(tau);

        ScalarField v_tau;
        if (tau > tau_end) {
            v_tau = traj.snapshots.back().v;  // frozen terminal shape
            ++prob.frozen_tail_nodes;
        } else {
            v_tau = interp_v(traj, prob.phi.t_of_tau(tau));
        }

        const double sup = max_value(v_tau);
        const double scale = prob.L / sup;
        ScalarField a(prob.grid);
        const int n = a.size();
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i)
            a.data[static_cast<size_t>(i)] = scale * v_tau.data[static_cast<size_t>(i)];

        kern::face_gradient(v_tau, gv);
        FaceField b(prob.grid);
        const int nx = prob.grid.nx, ny = prob.grid.ny;
        const double* vv = v_tau.data.data();
#pragma omp parallel
        {
#pragma omp for schedule(static) nowait
            for (int jj = 0; jj < ny; ++jj)
                for (int ii = 0; ii < nx - 1; ++ii) {
                    const int c = ii + nx * jj;
                    const int k = ii + (nx - 1) * jj;
                    b.x[static_cast<size_t>(k)] = scale * 0.5 * (vv[c] + vv[c + 1]) *
                                                  gv.x[static_cast<size_t>(k)];
                }
#pragma omp for schedule(static)
            for (int jj = 0; jj < ny - 1; ++jj)
                for (int ii = 0; ii < nx; ++ii) {
                    const int c = ii + nx * jj;
                    b.y[static_cast<size_t>(c)] = scale * 0.5 * (vv[c] + vv[c + nx]) *
                                                  gv.y[static_cast<size_t>(c)];
                }
        }

        prob.bounds.a_min = std::min(prob.bounds.a_min, min_value(a));
        prob.bounds.a_max = std::max(prob.bounds.a_max, max_value(a));
        prob.bounds.b_max =
            std::max(prob.bounds.b_max, std::max(kern::max_abs(b.x), kern::max_abs(b.y)));

        prob.a.push_back(std::move(a));
        prob.b.push_back(std::move(b));
    }

    if (prob.bounds.a_min < prob.lambda_hat * prob.L * (1.0 - 1e-6))
        throw SolverAbort("build_rescaled: min a = " + std::to_string(prob.bounds.a_min) +
                          " below lambda_hat * L = " +
                          std::to_string(prob.lambda_hat * prob.L));
    return prob;
}

LimitSolve solve_limit_problem(const RescaledProblem& prob, const ScalarField& u0,
                               const ModelParams& p, const LimitSolveOptions& opts) {
    if (!(prob.bounds.a_min > 0.0))
        throw ConfigError("solve_limit_problem: coefficients must satisfy a > 0");
    if (!u0.grid.same_as(prob.grid))
        throw ConfigError("solve_limit_problem: grid mismatch");

    const Grid& g = prob.grid;
    const int n = g.ncells();
    const size_t nodes = prob.tau_nodes.size();
    const double dnode = 1.0 / double(nodes - 1);

    LimitSolve out;
    ScalarField w = u0;
    ScalarField a_cur(g);
    FaceField b_cur(g);
    StepScratch ws(g);

    double tau = 0.0;
    std::vector<double> pending = opts.snapshot_taus;
    std::sort(pending.begin(), pending.end());
    size_t pend_i = 0;

    auto record = [&](double tq) {
        out.tau.push_back(tq);
        out.mass.push_back(integrate(w));
        out.sup.push_back(sup_norm(w));
    };
    record(0.0);

    long sample_index = 0;
    bool done = false;
    while (!done) {
        ++sample_index;
        double target = sample_index * opts.tau_sample_dt;
        if (target >= 1.0) {
            target = 1.0;
            done = true;
        }
        while (target - tau > 1e-12) {
            // coefficients at the current tau, linear between nodes
            const double pos = tau / dnode;
            size_t j0 = std::min(static_cast<size_t>(pos), nodes - 2);
            const double th = std::clamp(pos - double(j0), 0.0, 1.0);
            const ScalarField& a0 = prob.a[j0];
            const ScalarField& a1 = prob.a[j0 + 1];
            const FaceField& b0 = prob.b[j0];
            const FaceField& b1 = prob.b[j0 + 1];
#pragma omp parallel
            {
#pragma omp for schedule(static) nowait
                for (int i = 0; i < n; ++i)
                    a_cur.data[static_cast<size_t>(i)] =
                        (1.0 - th) * a0.data[static_cast<size_t>(i)] +
                        th * a1.data[static_cast<size_t>(i)];
#pragma omp for schedule(static) nowait
                for (size_t i = 0; i < b_cur.x.size(); ++i)
                    b_cur.x[i] = (1.0 - th) * b0.x[i] + th * b1.x[i];
#pragma omp for schedule(static)
                for (size_t i = 0; i < b_cur.y.size(); ++i)
                    b_cur.y[i] = (1.0 - th) * b0.y[i] + th * b1.y[i];
            }

            double dt = transport_stable_dt(w, a_cur, b_cur, p, opts.dt_scale);
            if (dt < 1e-14)
                throw SolverAbort("limit solve: tau step underflow at tau=" +
                                  std::to_string(tau));
            dt = std::min(dt, target - tau);

            StepUResult res = transport_step(w, a_cur, b_cur, dt, p, &ws);
            w = std::move(res.u);
            tau += dt;
            ++out.steps;
        }
        tau = target;
        record(tau);
        while (pend_i < pending.size() && tau >= pending[pend_i] - 1e-12) {
            Snapshot snap;
            snap.t = tau;
            snap.u = w;
            out.snapshots.push_back(std::move(snap));
            ++pend_i;
        }
    }
    out.w_final = std::move(w);
    return out;
}

LimitReport compare_limit(const ScalarField& w_final, const Trajectory& traj) {
    if (traj.snapshots.empty()) throw ConfigError("compare_limit: trajectory has no snapshots");
    const ScalarField& u_late = traj.snapshots.back().u;
    if (!w_final.grid.same_as(u_late.grid))
        throw ConfigError("compare_limit: grid mismatch");

    LimitReport rep;
    double gap = 0.0;
    for (int i = 0; i < w_final.size(); ++i)
        gap = std::max(gap, std::fabs(w_final.data[static_cast<size_t>(i)] -
                                      u_late.data[static_cast<size_t>(i)]));
    rep.rel_gap = gap / (sup_norm(u_late) + 1e-30);

    const double mean = integrate(u_late) / u_late.grid.area();
    double het = 0.0;
    for (double x : u_late.data) het = std::max(het, std::fabs(x - mean));
    rep.heterogeneity = het;

    rep.sup_v_end = traj.samples.back().sup_v;
    rep.v_vanished = traj.stop.v_tol > 0.0 &&
                     rep.sup_v_end < traj.stop.v_tol * traj.sup_v0;
    return rep;
}

EpsilonStudy epsilon_study(const InitialData& data, const ModelParams& base,
                           const Grid& grid, const std::vector<double>& eps_list,
                           double T) {
    EpsilonStudy study;
    study.eps = eps_list;
    if (eps_list.size() < 2) return study;  // nothing to compare

    SamplePlan plan;
    plan.sample_dt = T / 8.0;
    plan.snapshot_count = 1;
    plan.mode = SnapshotMode::Uniform;
    StopRule stop;
    stop.v_tol = 0.0;
    stop.T_max = T;

    std::vector<ScalarField> finals;
    for (double eps : eps_list) {
        ModelParams p = base;
        p.epsilon = eps;
        Trajectory traj = advance(data, p, grid, plan, stop);
        finals.push_back(traj.snapshots.back().u);
    }
    for (size_t i = 0; i + 1 < finals.size(); ++i) {
        double gap = 0.0;
        for (int c = 0; c < finals[i].size(); ++c)
            gap = std::max(gap, std::fabs(finals[i].data[static_cast<size_t>(c)] -
                                          finals[i + 1].data[static_cast<size_t>(c)]));
        study.gaps.push_back(gap);
    }
    return study;
}

}  // namespace ddc
