#include "ddc/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "ddc/discrete.hpp"
#include "ddc/kernels.hpp"

namespace ddc {

namespace {

constexpr double kSafety = 0.4;
constexpr double kClampFloor = -1e-12;
constexpr double kCgRelTol = 1e-10;
constexpr double kSupSlack = 1e-12;  // per-step slack on the v maximum principle

}  // namespace

namespace {

// drift = mean of adjacent cells of v times the face gradient of v
void face_drift(const ScalarField& v, FaceField& gv, FaceField& drift) {
    kern::face_gradient(v, gv);
    const Grid& g = v.grid;
    const int nx = g.nx, ny = g.ny;
    const double* vv = v.data.data();
#pragma omp parallel
    {
#pragma omp for schedule(static) nowait
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx - 1; ++i) {
                const int c = i + nx * j;
                const int k = i + (nx - 1) * j;
                drift.x[static_cast<size_t>(k)] =
                    0.5 * (vv[c] + vv[c + 1]) * gv.x[static_cast<size_t>(k)];
            }
#pragma omp for schedule(static)
        for (int j = 0; j < ny - 1; ++j)
            for (int i = 0; i < nx; ++i) {
                const int c = i + nx * j;
                drift.y[static_cast<size_t>(c)] =
                    0.5 * (vv[c] + vv[c + nx]) * gv.y[static_cast<size_t>(c)];
            }
    }
}

void fill_f_of_u(const ScalarField& u, const ModelParams& p, std::vector<double>& out) {
    const int n = u.size();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
        out[static_cast<size_t>(i)] = f_eval(u.data[static_cast<size_t>(i)], p);
}

double max_mobility(const ScalarField& u, const ScalarField& c, double mexp) {
    const int n = u.size();
    double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
    for (int i = 0; i < n; ++i)
        m = std::max(m, detail::pow_pos(u.data[static_cast<size_t>(i)], mexp) *
                            c.data[static_cast<size_t>(i)]);
    return m;
}

double max_slope(const ScalarField& u, const ModelParams& p) {
    const int n = u.size();
    double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
    for (int i = 0; i < n; ++i)
        m = std::max(m, f_slope_bound(u.data[static_cast<size_t>(i)], p));
    return m;
}

double stable_dt_impl(const ScalarField& u, const ScalarField& c, const FaceField& drift,
                      const ModelParams& p, double safety_scale) {
    const Grid& g = u.grid;
    const double safety = kSafety * safety_scale;
    const double inv_h2 = 1.0 / (g.hx * g.hx) + 1.0 / (g.hy * g.hy);

    double dt = std::numeric_limits<double>::infinity();
    const double dmax = max_mobility(u, c, p.m - 1.0);
    if (dmax > 0.0) dt = safety / (inv_h2 * 4.0 * dmax);

    const double wmax = std::max(kern::max_abs(drift.x), kern::max_abs(drift.y));
    const double smax = max_slope(u, p);
    const double vel = smax * wmax;
    if (vel > 0.0) dt = std::min(dt, safety * std::min(g.hx, g.hy) / (2.0 * vel));
    return dt;
}

StepUResult transport_step_impl(const ScalarField& u, const ScalarField& c,
                                const FaceField& drift, double dt, const ModelParams& p,
                                StepScratch& ws) {
    fill_f_of_u(u, p, ws.f_of_u);
    TransportCoeffs tc{p.m - 1.0, p.ell};
    kern::transport_fluxes(u, c, ws.f_of_u, drift, tc, ws.flux);

    StepUResult res;
    res.u = ScalarField(u.grid);
    kern::apply_update(u, c, ws.flux, dt, p.ell, res.u);

    // clamp policy: tiny negatives from rounding are zeroed, larger ones are
    // a scheme defect; NaN aborts with the cell reported
    const int n = res.u.size();
    long clamped = 0;
    int bad = -1;
#pragma omp parallel for reduction(+ : clamped) reduction(max : bad) schedule(static)
    for (int i = 0; i < n; ++i) {
        double& x = res.u.data[static_cast<size_t>(i)];
        if (std::isnan(x) || x < kClampFloor) {
            bad = std::max(bad, i);
        } else if (x < 0.0) {
            x = 0.0;
            ++clamped;
        }
    }
    if (bad >= 0) {
        const double val = res.u.data[static_cast<size_t>(bad)];
        throw SolverAbort("step_u produced " +
                          (std::isnan(val) ? std::string("NaN") : std::to_string(val)) +
                          " at cell " + std::to_string(bad % u.grid.nx) + "," +
                          std::to_string(bad / u.grid.nx) + " (t-step dt=" +
                          std::to_string(dt) + ")");
    }
    res.clamped = clamped;
    return res;
}

// Conjugate gradients on (I - dt*Lap + dt*diag(u)) x = b, warm-started at b.
// The operator is SPD with eigenvalues >= 1, so the error is bounded by the
// residual.
int cg_solve(const ScalarField& u, double dt, const ScalarField& b, ScalarField& x,
             StepScratch& ws) {
    const int n = b.size();
    const long itmax = 10L * n;

    x = b;
    kern::helmholtz_apply(x, u, dt, ws.Ap);
    ScalarField& r = ws.r;
    ScalarField& p = ws.p;
    ScalarField& Ap = ws.Ap;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
        r.data[static_cast<size_t>(i)] =
            b.data[static_cast<size_t>(i)] - Ap.data[static_cast<size_t>(i)];

    const double bnorm = std::sqrt(kern::dot(b.data, b.data));
    const double tol = kCgRelTol * bnorm;
    double rr = kern::dot(r.data, r.data);
    if (std::sqrt(rr) <= tol || bnorm == 0.0) return 0;

    p = r;
    for (long it = 1; it <= itmax; ++it) {
        kern::helmholtz_apply(p, u, dt, Ap);
        const double pAp = kern::dot(p.data, Ap.data);
        const double alpha = rr / pAp;
        kern::axpy(alpha, p.data, x.data);
        kern::axpy(-alpha, Ap.data, r.data);
        const double rr_new = kern::dot(r.data, r.data);
        if (std::sqrt(rr_new) <= tol) return static_cast<int>(it);
        const double beta = rr_new / rr;
        rr = rr_new;
        kern::xpay(r.data, beta, p.data, p.data);
    }
    throw SolverAbort("step_v: conjugate gradients did not converge in " +
                      std::to_string(itmax) + " iterations");
}

}  // namespace

double transport_stable_dt(const ScalarField& u, const ScalarField& c,
                           const FaceField& drift, const ModelParams& p,
                           double safety_scale) {
    return stable_dt_impl(u, c, drift, p, safety_scale);
}

StepUResult transport_step(const ScalarField& u, const ScalarField& c,
                           const FaceField& drift, double dt, const ModelParams& p,
                           StepScratch* ws) {
    if (ws) return transport_step_impl(u, c, drift, dt, p, *ws);
    StepScratch local(u.grid);
    return transport_step_impl(u, c, drift, dt, p, local);
}

double stable_dt(const SimState& s, const ModelParams& p, double safety_scale) {
    StepScratch ws(s.u.grid);
    face_drift(s.v, ws.gv, ws.drift);
    return stable_dt_impl(s.u, s.v, ws.drift, p, safety_scale);
}

StepUResult step_u(const SimState& s, double dt, const ModelParams& p) {
    StepScratch ws(s.u.grid);
    face_drift(s.v, ws.gv, ws.drift);
    return transport_step_impl(s.u, s.v, ws.drift, dt, p, ws);
}

StepVResult step_v(const SimState& s, double dt) {
    StepScratch ws(s.u.grid);
    StepVResult res;
    res.v = ScalarField(s.v.grid);
    res.iterations = cg_solve(s.u, dt, s.v, res.v, ws);
    if (!(min_value(res.v) > 0.0))
        throw SolverAbort("step_v lost positivity (t-step dt=" + std::to_string(dt) + ")");
    return res;
}

namespace {

// |grad v|^6 / v^5 by cell, face gradients averaged per direction with
// boundary faces counted as zero
double grad6_integrand(const ScalarField& v, const FaceField& gv,
                       std::vector<double>& terms) {
    const Grid& g = v.grid;
    const int nx = g.nx, ny = g.ny;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int c = i + nx * j;
            double gxw = (i > 0) ? gv.x[static_cast<size_t>((i - 1) + (nx - 1) * j)] : 0.0;
            double gxe = (i < nx - 1) ? gv.x[static_cast<size_t>(i + (nx - 1) * j)] : 0.0;
            double gys = (j > 0) ? gv.y[static_cast<size_t>(c - nx)] : 0.0;
            double gyn = (j < ny - 1) ? gv.y[static_cast<size_t>(c)] : 0.0;
            const double gx = 0.5 * (gxw + gxe);
            const double gy = 0.5 * (gys + gyn);
            const double g2 = gx * gx + gy * gy;
            const double vv = v.data[static_cast<size_t>(c)];
            const double v5 = vv * vv * vv * vv * vv;
            terms[static_cast<size_t>(c)] = g2 * g2 * g2 / v5;
        }
    return kern::sum(terms) * g.cell_area;
}

struct SnapshotPlanner {
    std::vector<double> levels;  // descending sup_v thresholds
    size_t next = 0;
    double uniform_step = 0.0;
    int taken = 0;
    SnapshotMode mode = SnapshotMode::Auto;

    SnapshotPlanner(const SamplePlan& plan, const StopRule& stop, double sup_v0) {
        mode = plan.mode;
        if (plan.snapshot_count <= 0) return;
        if (mode == SnapshotMode::Uniform) {
            uniform_step = stop.T_max / plan.snapshot_count;
            return;
        }
        const int n_lin = std::max(1, (3 * plan.snapshot_count) / 4);
        const int n_log = std::max(0, plan.snapshot_count - n_lin);
        for (int j = 1; j <= n_lin; ++j)
            levels.push_back(sup_v0 * (1.0 - double(j) / double(n_lin + 1)));
        const double top = sup_v0 / double(n_lin + 1);
        const double bottom = sup_v0 * ((stop.v_tol > 0.0) ? stop.v_tol : 1e-6);
        if (n_log > 0 && bottom < top)
            for (int j = 1; j <= n_log; ++j)
                levels.push_back(top * std::pow(bottom / top, double(j) / double(n_log)));
    }

    bool due(double t, double sup_v) {
        if (mode == SnapshotMode::Uniform) {
            if (uniform_step <= 0.0) return false;
            if (t >= (taken + 1) * uniform_step - 1e-12 * uniform_step) {
                ++taken;
                return true;
            }
            return false;
        }
        if (next >= levels.size() || sup_v > levels[next]) return false;
        while (next < levels.size() && sup_v <= levels[next]) ++next;
        return true;
    }
};

Sample make_sample(const SimState& s) {
    Sample smp;
    smp.t = s.t;
    smp.sup_v = sup_norm(s.v);
    smp.mass_u = integrate(s.u);
    smp.mass_v = integrate(s.v);
    smp.consumed = s.consumed;
    const double vmax = max_value(s.v);
    smp.harnack_ratio = (vmax > 0.0) ? min_value(s.v) / vmax : 0.0;
    smp.sup_u = sup_norm(s.u);
    smp.lp_p64 = lp_norm(s.u, 64.0);
    return smp;
}

}  // namespace

Trajectory advance(const InitialData& data, const ModelParams& p, const Grid& grid,
                   const SamplePlan& plan, const StopRule& stop,
                   const AdvanceOptions& opts) {
    const auto t_start = std::chrono::steady_clock::now();
    validate_initial(data, p);
    if (!data.u0.grid.same_as(grid))
        throw ConfigError("advance: initial data grid does not match the run grid");
    if (!(plan.sample_dt > 0.0)) throw ConfigError("advance: sample_dt must be positive");

    SimState s;
    s.u = regularize_initial(data, p);
    s.v = data.v0;

    Trajectory traj;
    traj.grid = grid;
    traj.stop = stop;
    traj.sup_v0 = sup_norm(s.v);

    StepScratch ws(grid);
    std::vector<double> terms(static_cast<size_t>(grid.ncells()));

    face_drift(s.v, ws.gv, ws.drift);
    double integrand_uv = integrate_product(s.u, s.v);
    double integrand_g6 = grad6_integrand(s.v, ws.gv, terms);
    double prev_sup_v = traj.sup_v0;

    traj.samples.push_back(make_sample(s));
    traj.grad6.push_back(s.grad6_budget);
    SnapshotPlanner snaps(plan, stop, traj.sup_v0);
    if (opts.record_snapshots && plan.snapshot_count > 0)
        traj.snapshots.push_back({s.t, s.u, s.v});

    long sample_index = 0;
    bool done = false;
    while (!done) {
        ++sample_index;
        double target = sample_index * plan.sample_dt;
        if (target >= stop.T_max) {
            target = stop.T_max;
            done = true;  // final segment
        }

        while (target - s.t > 1e-12 * std::max(1.0, target)) {
            double dt_phys;
            if (opts.fixed_dt) {
                dt_phys = *opts.fixed_dt;
            } else {
                dt_phys = stable_dt_impl(s.u, s.v, ws.drift, p, opts.dt_scale);
                if (dt_phys < 1e-12 * std::max(1.0, s.t))
                    throw SolverAbort("time step underflow at t=" + std::to_string(s.t) +
                                      " (dt=" + std::to_string(dt_phys) + ")");
            }
            const double dt = std::min(dt_phys, target - s.t);

            StepVResult vres;
            vres.v = ScalarField(grid);
            cg_solve(s.u, dt, s.v, vres.v, ws);
            const double sup_v_new = sup_norm(vres.v);
            if (!(min_value(vres.v) > 0.0))
                throw SolverAbort("v lost positivity at t=" + std::to_string(s.t + dt));
            if (sup_v_new > prev_sup_v + kSupSlack * traj.sup_v0)
                throw SolverAbort("v maximum principle violated at t=" +
                                  std::to_string(s.t + dt));
            prev_sup_v = sup_v_new;

            face_drift(vres.v, ws.gv, ws.drift);
            StepUResult ures = transport_step_impl(s.u, vres.v, ws.drift, dt, p, ws);
            if (ures.clamped > 0) {
                if (traj.events.clamped_cells == 0) traj.events.first_clamp_t = s.t + dt;
                traj.events.clamped_cells += ures.clamped;
            }

            s.u = std::move(ures.u);
            s.v = std::move(vres.v);
            s.t += dt;
            ++traj.steps;

            const double uv = integrate_product(s.u, s.v);
            s.consumed += 0.5 * dt * (integrand_uv + uv);
            integrand_uv = uv;
            const double g6 = grad6_integrand(s.v, ws.gv, terms);
            s.grad6_budget += 0.5 * dt * (integrand_g6 + g6);
            integrand_g6 = g6;
        }
        s.t = target;

        traj.samples.push_back(make_sample(s));
        traj.grad6.push_back(s.grad6_budget);
        const double sup_v = traj.samples.back().sup_v;
        if (opts.record_snapshots && snaps.due(s.t, sup_v))
            traj.snapshots.push_back({s.t, s.u, s.v});

        if (stop.v_tol > 0.0 && sup_v < stop.v_tol * traj.sup_v0) {
            traj.reached_vtol = true;
            done = true;
        }
    }

    if (opts.record_snapshots && plan.snapshot_count > 0 &&
        (traj.snapshots.empty() || traj.snapshots.back().t != s.t))
        traj.snapshots.push_back({s.t, s.u, s.v});

    traj.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return traj;
}

OrderCheck splitting_order_check(const InitialData& data, const ModelParams& p,
                                 const Grid& grid, double T, double base_dt) {
    SamplePlan plan;
    plan.sample_dt = T;
    plan.snapshot_count = 0;
    StopRule stop;
    stop.v_tol = 0.0;
    stop.T_max = T;

    auto final_u = [&](double dt) {
        SamplePlan pl = plan;
        pl.snapshot_count = 1;
        pl.mode = SnapshotMode::Uniform;
        AdvanceOptions o;
        o.fixed_dt = dt;
        Trajectory tr = advance(data, p, grid, pl, stop, o);
        return tr.snapshots.back().u;
    };

    const ScalarField u1 = final_u(base_dt);
    const ScalarField u2 = final_u(0.5 * base_dt);
    const ScalarField u4 = final_u(0.25 * base_dt);

    OrderCheck oc;
    double d1 = 0.0, d2 = 0.0;
    for (int i = 0; i < u1.size(); ++i) {
        d1 = std::max(d1, std::fabs(u1.data[static_cast<size_t>(i)] -
                                    u2.data[static_cast<size_t>(i)]));
        d2 = std::max(d2, std::fabs(u2.data[static_cast<size_t>(i)] -
                                    u4.data[static_cast<size_t>(i)]));
    }
    oc.diff_coarse = d1;
    oc.diff_fine = d2;
    const double scale = sup_norm(u1) + 1e-300;
    if (d1 < 1e-13 * scale && d2 < 1e-13 * scale) {
        oc.exact = true;
        return oc;
    }
    oc.order = std::log2(d1 / (d2 + 1e-300));
    return oc;
}

}  // namespace ddc
