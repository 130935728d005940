#include "ddc/monitors.hpp"

#include <algorithm>
#include <cmath>

#include "ddc/discrete.hpp"
#include "ddc/kernels.hpp"
#include "ddc/series.hpp"

namespace ddc {

nlohmann::json CheckResult::to_json() const {
    nlohmann::json j;
    j["lemma_id"] = lemma_id;
    j["pass"] = pass;
    if (inconclusive) j["inconclusive"] = true;
    j["measured"] = measured;
    j["slack"] = slack;
    if (first_violation_t) j["first_violation_t"] = *first_violation_t;
    if (!note.empty()) j["note"] = note;
    return j;
}

namespace {

void need_samples(const Trajectory& traj, size_t n) {
    if (traj.samples.size() < n)
        throw ConfigError("check requires at least " + std::to_string(n) + " samples");
}

}  // namespace

CheckResult check_v_monotone(const Trajectory& traj) {
    need_samples(traj, 2);
    CheckResult r;
    r.lemma_id = "L2.2-vin";
    r.slack = 1e-12 * traj.sup_v0;
    r.pass = true;
    double worst = 0.0;
    for (size_t i = 1; i < traj.samples.size(); ++i) {
        const double up = traj.samples[i].sup_v - traj.samples[i - 1].sup_v;
        worst = std::max(worst, up);
        if (up > r.slack && r.pass) {
            r.pass = false;
            r.first_violation_t = traj.samples[i].t;
        }
    }
    r.measured["max_uptick"] = worst;
    r.measured["sup_v0"] = traj.sup_v0;
    return r;
}

CheckResult check_mass_sandwich(const Trajectory& traj, const ModelParams& p) {
    need_samples(traj, 1);
    CheckResult r;
    r.lemma_id = "L2.2-u1";
    const double m0 = traj.samples.front().mass_u;
    const double v0 = traj.samples.front().mass_v;
    const double tol = 1e-8 * m0;
    r.slack = tol;
    r.pass = true;
    double lo = 0.0, hi = 0.0;  // worst violations below/above
    for (const Sample& s : traj.samples) {
        const double below = m0 - s.mass_u;
        const double above = s.mass_u - (m0 + p.ell * v0);
        lo = std::max(lo, below);
        hi = std::max(hi, above);
        if ((below > tol || above > tol) && r.pass) {
            r.pass = false;
            r.first_violation_t = s.t;
        }
    }
    r.measured["mass_u0"] = m0;
    r.measured["upper_bound"] = m0 + p.ell * v0;
    r.measured["worst_below"] = lo;
    r.measured["worst_above"] = hi;
    return r;
}

CheckResult check_consumption(const Trajectory& traj) {
    need_samples(traj, 1);
    CheckResult r;
    r.lemma_id = "L2.2-uv1";
    const double v0 = traj.samples.front().mass_v;
    const double total = traj.samples.back().consumed;
    r.slack = 1e-8 * v0;
    r.pass = total <= v0 * (1.0 + 1e-8);
    r.measured["consumed_total"] = total;
    r.measured["v_mass_initial"] = v0;
    if (!r.pass) r.first_violation_t = traj.samples.back().t;
    return r;
}

CheckResult check_grad6_plateau(const Trajectory& traj) {
    need_samples(traj, 4);
    CheckResult r;
    r.lemma_id = "L2.2-nav6v5";
    const double total = traj.grad6.back();
    const double t_end = traj.samples.back().t;
    double at_half = 0.0;
    for (size_t i = 0; i < traj.samples.size(); ++i)
        if (traj.samples[i].t <= 0.5 * t_end) at_half = traj.grad6[i];
    const double late = total - at_half;
    r.measured["grad6_total"] = total;
    r.measured["late_increment"] = late;
    r.slack = 0.01;
    r.pass = std::isfinite(total) && late <= 0.01 * total + 1e-30;
    if (!traj.reached_vtol) {
        r.inconclusive = true;
        r.pass = true;
        r.note = "inconclusive: run stopped at T_max before reaching v_tol";
    }
    return r;
}

CheckResult check_uinf_stable(const Trajectory& traj) {
    need_samples(traj, 4);
    CheckResult r;
    r.lemma_id = "L3.2-uinf";
    const double t_end = traj.samples.back().t;
    double running = 0.0, at_three_quarters = 0.0, bound = 0.0;
    for (const Sample& s : traj.samples) {
        running = std::max(running, s.sup_u);
        if (s.t <= 0.75 * t_end) at_three_quarters = running;
        bound = running;
    }
    const double gain = bound - at_three_quarters;
    r.slack = 1e-6 * std::max(1.0, bound);
    r.pass = gain < r.slack;
    r.measured["sup_u_bound"] = bound;
    r.measured["final_quarter_gain"] = gain;
    return r;
}

HarnackReport harnack_scan(const Trajectory& traj, double burn_in) {
    HarnackReport rep;
    rep.burn_in = burn_in;
    bool any = false;
    for (const Sample& s : traj.samples) {
        rep.t.push_back(s.t);
        rep.ratio.push_back(s.harnack_ratio);
        if (s.t >= burn_in) any = true;
    }
    if (!any) throw ConfigError("harnack_scan: no samples beyond burn-in time");

    rep.lambda_hat = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < rep.t.size(); ++i)
        if (rep.t[i] >= burn_in) rep.lambda_hat = std::min(rep.lambda_hat, rep.ratio[i]);

    const double t_end = rep.t.back();
    std::vector<double> ft, fr;
    for (size_t i = 0; i < rep.t.size(); ++i)
        if (rep.t[i] >= 0.75 * t_end) {
            ft.push_back(rep.t[i]);
            fr.push_back(rep.ratio[i]);
        }
    rep.final_slope = linear_slope(ft, fr);
    rep.pass = rep.lambda_hat > 0.0 && rep.final_slope >= -1e-6;
    return rep;
}

CheckResult harnack_check(const Trajectory& traj, double burn_in) {
    HarnackReport rep = harnack_scan(traj, burn_in);
    CheckResult r;
    r.lemma_id = "L4.1-harnack";
    r.pass = rep.pass;
    r.slack = 1e-6;
    r.measured["lambda_hat"] = rep.lambda_hat;
    r.measured["final_slope"] = rep.final_slope;
    r.measured["burn_in"] = rep.burn_in;
    return r;
}

LadderReport ladder_scan(const Trajectory& traj, const ModelParams& p, int k_max) {
    if (traj.snapshots.empty()) throw ConfigError("ladder_scan: no stored snapshots");
    LadderReport rep;
    rep.p.push_back(4.0);
    for (int k = 1; k <= k_max; ++k) rep.p.push_back(2.0 * rep.p.back() + 2.0 - p.m);
    rep.c1 = 4.0 - std::max(-(2.0 - p.m), 0.0);
    rep.c2 = 4.0 + std::max(2.0 - p.m, 0.0);

    rep.envelope_ok = true;
    double two_k = 1.0;
    for (size_t k = 0; k < rep.p.size(); ++k) {
        if (!(rep.c1 * two_k <= rep.p[k] && rep.p[k] <= rep.c2 * two_k))
            rep.envelope_ok = false;
        two_k *= 2.0;
    }

    rep.monotone_ok = true;
    rep.M.assign(rep.p.size(), 0.0);
    for (const Snapshot& snap : traj.snapshots) {
        rep.snapshot_times.push_back(snap.t);
        rep.sup_u.push_back(sup_norm(snap.u));
        std::vector<double> row;
        for (size_t k = 0; k < rep.p.size(); ++k) {
            const double pk = rep.p[k];
            const double norm = lp_norm_normalized(snap.u, pk);
            row.push_back(norm);
            // int u^pk = (norm^pk) * area, in log space to dodge overflow
            const double log_int =
                pk * std::log(std::max(norm, 1e-300)) + std::log(snap.u.grid.area());
            rep.M[k] = std::max(rep.M[k], std::exp(log_int));
            if (k > 0 && row[k] < row[k - 1] * (1.0 - 1e-12)) rep.monotone_ok = false;
        }
        rep.norms.push_back(std::move(row));
    }
    for (double& m : rep.M) m += 1.0;
    return rep;
}

BudgetReport budget_scan(const Trajectory& traj, double burn_in) {
    BudgetReport rep;
    rep.consumed_total = traj.samples.back().consumed;
    rep.v_mass_initial = traj.samples.front().mass_v;
    rep.grad6_total = traj.grad6.back();

    std::vector<double> t, sv;
    for (const Sample& s : traj.samples) {
        t.push_back(s.t);
        sv.push_back(s.sup_v);
    }
    const double trap = trapezoid(t, sv);
    const DecayFit fit = fit_decay_rate(t, sv);
    rep.tail_fit_ok = fit.ok;
    rep.tail = fit.ok ? sv.back() / fit.rate : 0.0;
    rep.vinf_time_integral = trap + rep.tail;

    HarnackReport h = harnack_scan(traj, burn_in);
    rep.lambda_hat = h.lambda_hat;
    const double u_mass0 = traj.samples.front().mass_u;
    rep.bound_rhs = rep.v_mass_initial / (rep.lambda_hat * u_mass0);

    rep.pass_uv1 = rep.consumed_total <= rep.v_mass_initial * (1.0 + 1e-8);
    rep.pass_integral = rep.vinf_time_integral <= rep.bound_rhs * 1.05;
    rep.inconclusive = !traj.reached_vtol;
    return rep;
}

CheckResult budget_check(const Trajectory& traj, double burn_in) {
    BudgetReport rep = budget_scan(traj, burn_in);
    CheckResult r;
    r.lemma_id = "L4.2-integral";
    r.slack = 0.05;
    r.pass = rep.pass_integral;
    r.measured["vinf_time_integral"] = rep.vinf_time_integral;
    r.measured["bound_rhs"] = rep.bound_rhs;
    r.measured["lambda_hat"] = rep.lambda_hat;
    r.measured["tail"] = rep.tail;
    r.measured["tail_fit_ok"] = rep.tail_fit_ok;
    if (rep.inconclusive) {
        r.inconclusive = true;
        r.pass = true;
        r.note = "inconclusive: run stopped at T_max before reaching v_tol";
    }
    return r;
}

// ---------------------------------------------------------------------------
// weak-form residuals

namespace {

struct BumpFn {
    double T;
    double psi(double t) const {
        if (t >= T) return 0.0;
        const double s = t / T;
        const double q = 1.0 - s * s;
        return q * q * q;
    }
    double dpsi(double t) const {
        if (t >= T) return 0.0;
        const double s = t / T;
        const double q = 1.0 - s * s;
        return -6.0 * s * q * q / T;
    }
};

// 4-point Gauss-Legendre on [a,b]
template <class F>
double gauss4(double a, double b, F&& f) {
    static const double xs[4] = {-0.8611363115940526, -0.3399810435848563,
                                 0.3399810435848563, 0.8611363115940526};
    static const double wsq[4] = {0.3478548451374538, 0.6521451548625461,
                                  0.6521451548625461, 0.3478548451374538};
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int q = 0; q < 4; ++q) s += wsq[q] * f(mid + half * xs[q]);
    return s * half;
}

// time integral of (piecewise-linear A)(t) * w(t) over [0, T]
template <class W>
double pl_time_integral(const std::vector<double>& ts, const std::vector<double>& As,
                        double T, W&& w) {
    double total = 0.0;
    for (size_t i = 1; i < ts.size(); ++i) {
        const double a = ts[i - 1];
        if (a >= T) break;
        const double b = std::min(ts[i], T);
        if (b <= a) continue;
        const double ya = As[i - 1], yb = As[i];
        const double da = ts[i] - ts[i - 1];
        auto lin = [&](double t) { return ya + (yb - ya) * (t - ts[i - 1]) / da; };
        total += gauss4(a, b, [&](double t) { return lin(t) * w(t); });
    }
    return total;
}

// cell average of the face gradients (boundary faces count as zero)
void cell_gradient(const ScalarField& v, const FaceField& gv, std::vector<double>& gx,
                   std::vector<double>& gy) {
    const Grid& g = v.grid;
    const int nx = g.nx, ny = g.ny;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int c = i + nx * j;
            const double gxw = (i > 0) ? gv.x[(i - 1) + (nx - 1) * j] : 0.0;
            const double gxe = (i < nx - 1) ? gv.x[i + (nx - 1) * j] : 0.0;
            const double gys = (j > 0) ? gv.y[c - nx] : 0.0;
            const double gyn = (j < ny - 1) ? gv.y[c] : 0.0;
            gx[static_cast<size_t>(c)] = 0.5 * (gxw + gxe);
            gy[static_cast<size_t>(c)] = 0.5 * (gys + gyn);
        }
}

}  // namespace

WeakResidual weak_residual(const Trajectory& traj, const ModelParams& p,
                           const TestFnSpec& spec) {
    size_t in_window = 0;
    for (const Snapshot& s : traj.snapshots)
        if (s.t <= spec.T_test) ++in_window;
    if (in_window < 64)
        throw ConfigError("weak_residual: needs >= 64 snapshots in [0, T_test], have " +
                          std::to_string(in_window));
    if (traj.snapshots.back().t < spec.T_test)
        throw ConfigError("weak_residual: trajectory ends before T_test");

    const Grid& g = traj.grid;
    const double kx = spec.k * M_PI / g.Lx;
    const double ky = spec.l * M_PI / g.Ly;
    const double lap_factor = -(kx * kx + ky * ky);
    const BumpFn bump{spec.T_test};

    const int n = g.ncells();
    std::vector<double> phi(static_cast<size_t>(n)), dphix(static_cast<size_t>(n)),
        dphiy(static_cast<size_t>(n));
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int c = g.idx(i, j);
            const double x = g.xc(i), y = g.yc(j);
            phi[static_cast<size_t>(c)] = std::cos(kx * x) * std::cos(ky * y);
            dphix[static_cast<size_t>(c)] = -kx * std::sin(kx * x) * std::cos(ky * y);
            dphiy[static_cast<size_t>(c)] = -ky * std::cos(kx * x) * std::sin(ky * y);
        }

    // spatial integrals per snapshot
    std::vector<double> ts;
    std::vector<double> u_phi, um_gradv_gradphi, um_v_lapphi, f_v_gradv_gradphi, uv_phi;
    std::vector<double> v_phi, gradv_gradphi;

    std::vector<double> gx(static_cast<size_t>(n)), gy(static_cast<size_t>(n));
    for (const Snapshot& snap : traj.snapshots) {
        if (snap.t > spec.T_test + 1e-12 && ts.size() >= 2 && ts.back() >= spec.T_test)
            break;
        const FaceField gv = face_gradient(snap.v);
        cell_gradient(snap.v, gv, gx, gy);

        double a1 = 0, a2 = 0, a3 = 0, a4 = 0, a5 = 0, b1 = 0, b2 = 0;
        for (int c = 0; c < n; ++c) {
            const size_t i = static_cast<size_t>(c);
            const double u = snap.u.data[i], v = snap.v.data[i];
            const double um = detail::pow_pos(u, p.m);
            const double gdotp = gx[i] * dphix[i] + gy[i] * dphiy[i];
            a1 += u * phi[i];
            a2 += um * gdotp;
            a3 += um * v * lap_factor * phi[i];
            a4 += f_eval(u, p) * v * gdotp;
            a5 += u * v * phi[i];
            b1 += v * phi[i];
            b2 += gdotp;
        }
        const double w = g.cell_area;
        ts.push_back(snap.t);
        u_phi.push_back(a1 * w);
        um_gradv_gradphi.push_back(a2 * w);
        um_v_lapphi.push_back(a3 * w);
        f_v_gradv_gradphi.push_back(a4 * w);
        uv_phi.push_back(a5 * w);
        v_phi.push_back(b1 * w);
        gradv_gradphi.push_back(b2 * w);
    }

    auto with_psi = [&](const std::vector<double>& A) {
        return pl_time_integral(ts, A, spec.T_test, [&](double t) { return bump.psi(t); });
    };
    auto with_dpsi = [&](const std::vector<double>& A) {
        return pl_time_integral(ts, A, spec.T_test, [&](double t) { return bump.dpsi(t); });
    };

    WeakResidual res;
    {
        const double lhs = -with_dpsi(u_phi) - u_phi.front() * bump.psi(0.0);
        const double rhs = (1.0 / p.m) * with_psi(um_gradv_gradphi) +
                           (1.0 / p.m) * with_psi(um_v_lapphi) +
                           with_psi(f_v_gradv_gradphi) + p.ell * with_psi(uv_phi);
        res.r_u = std::fabs(lhs - rhs);
    }
    {
        const double lhs = with_dpsi(v_phi) + v_phi.front() * bump.psi(0.0);
        const double rhs = with_psi(gradv_gradphi) + with_psi(uv_phi);
        res.r_v = std::fabs(lhs - rhs);
    }
    return res;
}

CheckResult check_weak_identities(const Trajectory& traj, const ModelParams& p) {
    need_samples(traj, 2);
    CheckResult r;
    r.lemma_id = "D1.1-weak";
    const double m0 = traj.samples.front().mass_u;
    const double v0 = traj.samples.front().mass_v;

    double gap_u = 0.0, gap_v = 0.0;
    for (const Sample& s : traj.samples) {
        gap_u = std::max(gap_u, std::fabs(s.mass_u - m0 - p.ell * s.consumed));
        gap_v = std::max(gap_v, std::fabs(s.mass_v - v0 + s.consumed));
    }
    const double tol_u = (p.ell == 0.0 ? 1e-10 : 1e-6) * m0;
    const double tol_v = 1e-6 * v0;
    r.pass = gap_u <= tol_u && gap_v <= tol_v;
    r.slack = tol_v;
    r.measured["gap_u"] = gap_u;
    r.measured["gap_v"] = gap_v;
    r.measured["tol_u"] = tol_u;
    r.measured["tol_v"] = tol_v;

    // mode (1,1) residuals are informative when the snapshot set allows them
    try {
        TestFnSpec spec;
        spec.T_test = std::min(1.5, 0.75 * traj.samples.back().t);
        WeakResidual wr = weak_residual(traj, p, spec);
        r.measured["r_u_mode11"] = wr.r_u;
        r.measured["r_v_mode11"] = wr.r_v;
        r.measured["T_test"] = spec.T_test;
    } catch (const ConfigError& e) {
        r.note = e.what();
    }
    return r;
}

std::vector<CheckResult> run_all_checks(const Trajectory& traj, const ModelParams& p,
                                        double burn_in) {
    std::vector<CheckResult> out;
    out.push_back(check_v_monotone(traj));
    out.push_back(check_mass_sandwich(traj, p));
    out.push_back(check_consumption(traj));
    out.push_back(check_grad6_plateau(traj));
    out.push_back(check_uinf_stable(traj));
    out.push_back(harnack_check(traj, burn_in));
    out.push_back(budget_check(traj, burn_in));
    out.push_back(check_weak_identities(traj, p));
    return out;
}

}  // namespace ddc
