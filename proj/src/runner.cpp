#include "ddc/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ddc/discrete.hpp"
#include "ddc/io.hpp"
#include "ddc/series.hpp"

namespace ddc {

namespace fs = std::filesystem;

namespace {

std::string snap_name(const char* prefix, size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s_%04zu.csv", prefix, i);
    return buf;
}

}  // namespace

Trajectory execute_run(const RunConfig& cfg, const fs::path& out_dir) {
    const Grid grid = make_grid(cfg);
    const InitialData data = make_initial_data(cfg, grid);
    validate_initial(data, cfg.model);

    fs::create_directories(out_dir);
    fs::create_directories(out_dir / "snapshots");
    write_json(out_dir / "config.json", cfg.echo);

    AdvanceOptions opts;
    opts.dt_scale = cfg.dt_scale;
    Trajectory traj = advance(data, cfg.model, grid, cfg.plan, cfg.stop, opts);

    write_trajectory_csv(out_dir / "trajectory.csv", traj);
    write_budget_csv(out_dir / "budget.csv", traj);

    std::FILE* idx = std::fopen((out_dir / "snapshots" / "index.csv").string().c_str(), "w");
    if (!idx) throw IoError("cannot write snapshot index");
    std::fprintf(idx, "i,t,u_file,v_file\n");
    for (size_t i = 0; i < traj.snapshots.size(); ++i) {
        const Snapshot& s = traj.snapshots[i];
        const std::string uf = snap_name("u", i), vf = snap_name("v", i);
        write_field_csv(out_dir / "snapshots" / uf, s.u, s.t);
        write_field_csv(out_dir / "snapshots" / vf, s.v, s.t);
        std::fprintf(idx, "%zu,%.17g,%s,%s\n", i, s.t, uf.c_str(), vf.c_str());
    }
    std::fclose(idx);

    nlohmann::json manifest;
    manifest["complete"] = true;
    manifest["config"] = cfg.echo;
    manifest["config_hash"] = hash_string(cfg.echo.dump());
    manifest["case"] = to_string(require_case(cfg.model));
    manifest["steps"] = traj.steps;
    manifest["wall_seconds"] = traj.wall_seconds;
    manifest["reached_vtol"] = traj.reached_vtol;
    manifest["sup_v0"] = traj.sup_v0;
    manifest["samples"] = traj.samples.size();
    manifest["snapshots"] = traj.snapshots.size();
    nlohmann::json ev;
    ev["clamped_cells"] = traj.events.clamped_cells;
    ev["first_clamp_t"] = traj.events.first_clamp_t;
    ev["notes"] = traj.events.notes;
    manifest["events"] = ev;
    nlohmann::json hashes;
    hashes["trajectory.csv"] = hash_file(out_dir / "trajectory.csv");
    hashes["budget.csv"] = hash_file(out_dir / "budget.csv");
    hashes["snapshots/index.csv"] = hash_file(out_dir / "snapshots" / "index.csv");
    manifest["hashes"] = hashes;
    write_json(out_dir / "manifest.json", manifest);  // written last
    return traj;
}

LoadedRun load_run(const fs::path& run_dir) {
    if (!fs::exists(run_dir / "manifest.json"))
        throw ConfigError("incomplete run: no manifest in " + run_dir.string());
    const nlohmann::json manifest = read_json(run_dir / "manifest.json");

    LoadedRun run;
    run.config = load_run_config(run_dir / "config.json");
    run.traj.grid = make_grid(run.config);
    run.traj.stop = run.config.stop;
    read_trajectory_csv(run_dir / "trajectory.csv", run.traj);
    read_budget_csv(run_dir / "budget.csv", run.traj);
    if (run.traj.grad6.size() != run.traj.samples.size())
        throw IoError("budget.csv and trajectory.csv disagree in length");
    run.traj.steps = manifest.value("steps", 0LL);
    run.traj.reached_vtol = manifest.value("reached_vtol", false);
    run.traj.events.clamped_cells = manifest["events"].value("clamped_cells", 0LL);

    std::ifstream idx(run_dir / "snapshots" / "index.csv");
    if (!idx) throw IoError("missing snapshot index in " + run_dir.string());
    std::string line;
    std::getline(idx, line);
    while (std::getline(idx, line)) {
        if (line.empty()) continue;
        size_t comma1 = line.find(',');
        size_t comma2 = line.find(',', comma1 + 1);
        size_t comma3 = line.find(',', comma2 + 1);
        if (comma3 == std::string::npos) throw IoError("bad snapshot index row");
        Snapshot snap;
        const std::string uf = line.substr(comma2 + 1, comma3 - comma2 - 1);
        const std::string vf = line.substr(comma3 + 1);
        snap.u = read_field_csv(run_dir / "snapshots" / uf, &snap.t);
        snap.v = read_field_csv(run_dir / "snapshots" / vf);
        run.traj.snapshots.push_back(std::move(snap));
    }
    return run;
}

VerifySummary verify_run(const fs::path& run_dir, double burn_in) {
    LoadedRun run = load_run(run_dir);
    if (run.traj.snapshots.empty())
        throw ConfigError("verify: run has no snapshots");

    VerifySummary sum;
    sum.checks = run_all_checks(run.traj, run.config.model, burn_in);
    fs::create_directories(run_dir / "reports");
    sum.all_pass = true;
    for (const CheckResult& c : sum.checks) {
        write_json(run_dir / "reports" / (c.lemma_id + ".json"), c.to_json());
        if (!c.pass) sum.all_pass = false;
        if (c.inconclusive) ++sum.inconclusive;
    }
    return sum;
}

RescaleSummary rescale_run(const fs::path& run_dir, int tau_count, double rel_gap_tol) {
    LoadedRun run = load_run(run_dir);
    if (!run.traj.reached_vtol)
        throw ConfigError("rescale: run stopped before reaching v_tol; no full decay to rescale");

    RescaledProblem prob = build_rescaled(run.traj, tau_count);
    const fs::path rdir = run_dir / "rescale";
    fs::create_directories(rdir / "coefficients");

    std::FILE* fp = std::fopen((rdir / "phi.csv").string().c_str(), "w");
    if (!fp) throw IoError("cannot write phi.csv");
    std::fprintf(fp, "t,tau\n");
    for (size_t i = 0; i < prob.phi.t.size(); ++i)
        std::fprintf(fp, "%.17g,%.17g\n", prob.phi.t[i], prob.phi.tau[i]);
    std::fclose(fp);

    for (size_t i = 0; i < prob.tau_nodes.size(); ++i) {
        write_field_csv(rdir / "coefficients" / snap_name("a", i), prob.a[i],
                        prob.tau_nodes[i]);
        // b lives on faces; store its two orientations as cell-shaped tables
        // of (nx-1) x ny and nx x (ny-1) values with the same header
        const FaceField& b = prob.b[i];
        if (prob.grid.nx > 1 && prob.grid.ny > 1) {
            std::FILE* bf =
                std::fopen((rdir / "coefficients" / snap_name("b", i)).string().c_str(), "w");
            if (!bf) throw IoError("cannot write coefficient file");
            std::fprintf(bf, "# %d,%d,%.17g,%.17g,%.17g\n", prob.grid.nx, prob.grid.ny,
                         prob.grid.Lx, prob.grid.Ly, prob.tau_nodes[i]);
            std::fprintf(bf, "x-faces\n");
            for (int j = 0; j < prob.grid.ny; ++j) {
                for (int ii = 0; ii < prob.grid.nx - 1; ++ii) {
                    if (ii) std::fputc(',', bf);
                    std::fprintf(bf, "%.17g", b.x[static_cast<size_t>(ii + (prob.grid.nx - 1) * j)]);
                }
                std::fputc('\n', bf);
            }
            std::fprintf(bf, "y-faces\n");
            for (int j = 0; j < prob.grid.ny - 1; ++j) {
                for (int ii = 0; ii < prob.grid.nx; ++ii) {
                    if (ii) std::fputc(',', bf);
                    std::fprintf(bf, "%.17g", b.y[static_cast<size_t>(ii + prob.grid.nx * j)]);
                }
                std::fputc('\n', bf);
            }
            std::fclose(bf);
        }
    }

    // w(.,0) is the regularized initial density, i.e. the first stored u
    const ScalarField& w0 = run.traj.snapshots.front().u;
    LimitSolveOptions lopts;
    lopts.dt_scale = run.config.dt_scale;
    LimitSolve sol = solve_limit_problem(prob, w0, run.config.model, lopts);
    write_field_csv(rdir / "w_final.csv", sol.w_final, 1.0);

    RescaleSummary sum;
    sum.report = compare_limit(sol.w_final, run.traj);
    sum.L = prob.L;
    sum.tail_uncertainty = prob.tail_uncertainty;
    sum.bounds = prob.bounds;

    const double C = std::max({prob.L, 1.0 / (prob.lambda_hat * prob.L), prob.bounds.b_max}) + 1.0;
    const bool bounds_ok = prob.bounds.a_min >= 1.0 / C && prob.bounds.a_max <= C &&
                           prob.bounds.b_max <= C;
    sum.pass = sum.report.rel_gap <= rel_gap_tol && bounds_ok && sum.report.v_vanished;

    nlohmann::json rep;
    rep["L"] = prob.L;
    rep["tail_uncertainty"] = prob.tail_uncertainty;
    rep["lambda_hat"] = prob.lambda_hat;
    rep["rel_gap"] = sum.report.rel_gap;
    rep["rel_gap_tol"] = rel_gap_tol;
    rep["heterogeneity"] = sum.report.heterogeneity;
    rep["a_min"] = prob.bounds.a_min;
    rep["a_max"] = prob.bounds.a_max;
    rep["b_max"] = prob.bounds.b_max;
    rep["coefficient_bound_C"] = C;
    rep["bounds_ok"] = bounds_ok;
    rep["frozen_tail_nodes"] = prob.frozen_tail_nodes;
    rep["v_vanished"] = sum.report.v_vanished;
    rep["w_steps"] = sol.steps;
    rep["pass"] = sum.pass;
    write_json(rdir / "limit_report.json", rep);
    return sum;
}

void report_run(const fs::path& run_dir) {
    LoadedRun run = load_run(run_dir);
    const fs::path rdir = run_dir / "report";
    fs::create_directories(rdir);

    {
        std::FILE* fp = std::fopen((rdir / "decay.csv").string().c_str(), "w");
        if (!fp) throw IoError("cannot write decay.csv");
        std::fprintf(fp, "t,sup_v,log_sup_v\n");
        for (const Sample& s : run.traj.samples)
            std::fprintf(fp, "%.17g,%.17g,%.17g\n", s.t, s.sup_v,
                         s.sup_v > 0 ? std::log(s.sup_v) : -INFINITY);
        std::fclose(fp);
    }
    {
        std::FILE* fp = std::fopen((rdir / "harnack.csv").string().c_str(), "w");
        if (!fp) throw IoError("cannot write harnack.csv");
        std::fprintf(fp, "t,ratio\n");
        for (const Sample& s : run.traj.samples)
            std::fprintf(fp, "%.17g,%.17g\n", s.t, s.harnack_ratio);
        std::fclose(fp);
    }
    {
        LadderReport lad = ladder_scan(run.traj, run.config.model);
        std::FILE* fp = std::fopen((rdir / "ladder.csv").string().c_str(), "w");
        if (!fp) throw IoError("cannot write ladder.csv");
        std::fprintf(fp, "k,p_k,M_k,norm_last_snapshot\n");
        for (size_t k = 0; k < lad.p.size(); ++k)
            std::fprintf(fp, "%zu,%.17g,%.17g,%.17g\n", k, lad.p[k], lad.M[k],
                         lad.norms.back()[k]);
        std::fclose(fp);
    }
    {
        TailEstimate est = compute_L(run.traj);
        PhiCurve phi = compute_phi(run.traj, est.L);
        std::FILE* fp = std::fopen((rdir / "phi.csv").string().c_str(), "w");
        if (!fp) throw IoError("cannot write phi.csv");
        std::fprintf(fp, "t,tau\n");
        for (size_t i = 0; i < phi.t.size(); ++i)
            std::fprintf(fp, "%.17g,%.17g\n", phi.t[i], phi.tau[i]);
        std::fclose(fp);
    }
}

SweepResult run_sweep(const nlohmann::json& sweep_config, const fs::path& out_dir,
                      int jobs) {
    if (!sweep_config.is_object() || !sweep_config.contains("base") ||
        !sweep_config.contains("tuples"))
        throw ConfigError("sweep config needs {base, tuples}");
    const nlohmann::json& tuples = sweep_config["tuples"];
    if (!tuples.is_array() || tuples.empty())
        throw ConfigError("sweep config: tuples must be a non-empty array");

    // validate every tuple before starting any run
    std::vector<RunConfig> cfgs;
    for (size_t i = 0; i < tuples.size(); ++i) {
        nlohmann::json merged = sweep_config["base"];
        const nlohmann::json& tp = tuples[i];
        for (const char* key : {"m", "alpha", "ell", "epsilon"})
            if (tp.contains(key)) merged["model"][key] = tp[key];
        try {
            cfgs.push_back(parse_run_config(merged));
        } catch (const ConfigError& e) {
            throw ConfigError("sweep tuple " + std::to_string(i) + ": " + e.what());
        }
    }

    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(cfgs.size())));
#ifdef _OPENMP
    const int omp_per_job = std::max(1, omp_get_max_threads() / jobs);
#endif

    SweepResult result;
    result.rows.resize(cfgs.size());
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) {
        pool.emplace_back([&, w]() {
            (void)w;
#ifdef _OPENMP
            if (jobs > 1) omp_set_num_threads(omp_per_job);
#endif
            for (;;) {
                const size_t i = next.fetch_add(1);
                if (i >= cfgs.size()) break;
                SweepRow& row = result.rows[i];
                const RunConfig& cfg = cfgs[i];
                row.m = cfg.model.m;
                row.alpha = cfg.model.alpha;
                row.ell = cfg.model.ell;
                row.epsilon = cfg.model.epsilon;
                row.case_label = to_string(require_case(cfg.model));
                char sub[32];
                std::snprintf(sub, sizeof sub, "run_%03zu", i);
                const fs::path dir = out_dir / sub;
                try {
                    Trajectory traj = execute_run(cfg, dir);
                    VerifySummary ver = verify_run(dir);
                    row.checks_total = static_cast<int>(ver.checks.size());
                    for (const CheckResult& c : ver.checks)
                        if (c.pass) ++row.checks_passed;
                    row.lambda_hat = harnack_scan(traj).lambda_hat;
                    row.L = compute_L(traj).L;
                    if (traj.reached_vtol) {
                        RescaleSummary rs = rescale_run(dir);
                        row.rel_gap = rs.report.rel_gap;
                    } else {
                        row.rel_gap = std::nan("");
                    }
                    row.ok = true;
                } catch (const std::exception& e) {
                    row.ok = false;
                    row.error = e.what();
                }
            }
        });
    }
    for (auto& th : pool) th.join();

    fs::create_directories(out_dir);
    std::FILE* fp = std::fopen((out_dir / "summary.csv").string().c_str(), "w");
    if (!fp) throw IoError("cannot write sweep summary");
    std::fprintf(fp, "run,m,alpha,ell,epsilon,case,lambda_hat,L,rel_gap,checks_passed,"
                     "checks_total,ok,error\n");
    for (size_t i = 0; i < result.rows.size(); ++i) {
        const SweepRow& r = result.rows[i];
        std::fprintf(fp, "%zu,%.17g,%.17g,%.17g,%.17g,%s,%.17g,%.17g,%.17g,%d,%d,%d,%s\n",
                     i, r.m, r.alpha, r.ell, r.epsilon, r.case_label.c_str(), r.lambda_hat,
                     r.L, r.rel_gap, r.checks_passed, r.checks_total, r.ok ? 1 : 0,
                     r.error.c_str());
    }
    std::fclose(fp);

    // an eps-study: same (m, alpha, ell), strictly decreasing epsilon
    bool eps_study = cfgs.size() >= 2;
    for (size_t i = 1; i < cfgs.size() && eps_study; ++i) {
        eps_study = cfgs[i].model.m == cfgs[0].model.m &&
                    cfgs[i].model.alpha == cfgs[0].model.alpha &&
                    cfgs[i].model.ell == cfgs[0].model.ell &&
                    cfgs[i].model.epsilon < cfgs[i - 1].model.epsilon;
    }
    if (eps_study) {
        bool loaded = true;
        std::vector<ScalarField> finals;
        for (size_t i = 0; i < cfgs.size() && loaded; ++i) {
            char sub[32];
            std::snprintf(sub, sizeof sub, "run_%03zu", i);
            try {
                LoadedRun run = load_run(out_dir / sub);
                finals.push_back(run.traj.snapshots.back().u);
            } catch (const std::exception&) {
                loaded = false;
            }
        }
        if (loaded) {
            std::FILE* cf = std::fopen((out_dir / "cauchy.csv").string().c_str(), "w");
            if (!cf) throw IoError("cannot write cauchy.csv");
            std::fprintf(cf, "eps_hi,eps_lo,sup_gap\n");
            for (size_t i = 0; i + 1 < finals.size(); ++i) {
                double gap = 0.0;
                for (int c = 0; c < finals[i].size(); ++c)
                    gap = std::max(gap,
                                   std::fabs(finals[i].data[static_cast<size_t>(c)] -
                                             finals[i + 1].data[static_cast<size_t>(c)]));
                result.cauchy_gaps.push_back(gap);
                std::fprintf(cf, "%.17g,%.17g,%.17g\n", cfgs[i].model.epsilon,
                             cfgs[i + 1].model.epsilon, gap);
            }
            std::fclose(cf);
        }
    }
    return result;
}

}  // namespace ddc
