// ddcsim: finite-volume simulator for a doubly degenerate
// chemotaxis-consumption system with a built-in estimate verifier and a
// nutrient-weighted time-rescaling pipeline.
//
//   ddcsim run     --config cfg.json [--out DIR] [--seed N]
//   ddcsim verify  RUN_DIR
//   ddcsim rescale RUN_DIR
//   ddcsim sweep   --config sweep.json --out DIR [--jobs N]
//   ddcsim report  RUN_DIR
//
// Exit codes: 0 success, 1 usage/config error, 2 solver abort.
// SIM_LOG={error,info,debug} controls verbosity.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include <CLI11.hpp>

#include "ddc/io.hpp"
#include "ddc/runner.hpp"

namespace {

int log_verbosity() {
    const char* env = std::getenv("SIM_LOG");
    if (!env) return 1;
    if (std::strcmp(env, "error") == 0) return 0;
    if (std::strcmp(env, "debug") == 0) return 2;
    return 1;
}

const int g_verbosity = log_verbosity();

void info(const std::string& msg) {
    if (g_verbosity >= 1) std::fprintf(stderr, "[info] %s\n", msg.c_str());
}

void error(const std::string& msg) { std::fprintf(stderr, "[error] %s\n", msg.c_str()); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ddcsim: degenerate chemotaxis-consumption simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir, run_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 0;

    CLI::App* cmd_run = app.add_subcommand("run", "execute a configured simulation");
    cmd_run->add_option("--config", config_path, "run config JSON")->required();
    cmd_run->add_option("--out", out_dir, "output directory (overrides config)");
    cmd_run->add_option("--seed", seed, "seed override")->each([&](std::string) {
        seed_set = true;
    });

    CLI::App* cmd_verify = app.add_subcommand("verify", "run every lemma check on a run");
    cmd_verify->add_option("run_dir", run_dir, "completed run directory")->required();

    CLI::App* cmd_rescale =
        app.add_subcommand("rescale", "build and solve the rescaled limit problem");
    cmd_rescale->add_option("run_dir", run_dir, "completed run directory")->required();

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "run a parameter sweep");
    cmd_sweep->add_option("--config", config_path, "sweep config JSON")->required();
    cmd_sweep->add_option("--out", out_dir, "output directory")->required();
    cmd_sweep->add_option("--jobs", jobs, "concurrent jobs (default: hardware)");

    CLI::App* cmd_report = app.add_subcommand("report", "emit plot-ready CSV bundles");
    cmd_report->add_option("run_dir", run_dir, "completed run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 1 : 0;
    }

    try {
        if (cmd_run->parsed()) {
            ddc::RunConfig cfg = ddc::load_run_config(config_path);
            if (!out_dir.empty()) cfg.output = out_dir;
            if (seed_set) {
                cfg.seed = seed;
                cfg.echo["seed"] = seed;
            }
            if (cfg.output.empty())
                throw ddc::ConfigError("no output directory (config.output or --out)");
            info("running " + config_path + " -> " + cfg.output);
            ddc::Trajectory traj = ddc::execute_run(cfg, cfg.output);
            info("done: " + std::to_string(traj.steps) + " steps, t_end=" +
                 std::to_string(traj.t_end()) + ", wall=" +
                 std::to_string(traj.wall_seconds) + "s");
            return 0;
        }
        if (cmd_verify->parsed()) {
            ddc::VerifySummary sum = ddc::verify_run(run_dir);
            for (const ddc::CheckResult& c : sum.checks)
                std::printf("%-14s %s%s\n", c.lemma_id.c_str(), c.pass ? "PASS" : "FAIL",
                            c.inconclusive ? " (inconclusive)" : "");
            if (sum.inconclusive > 0)
                info(std::to_string(sum.inconclusive) +
                     " check(s) inconclusive: run stopped before v_tol");
            return sum.all_pass ? 0 : 2;
        }
        if (cmd_rescale->parsed()) {
            ddc::RescaleSummary sum = ddc::rescale_run(run_dir);
            std::printf("L = %.6g (tail uncertainty %.2g)\n", sum.L, sum.tail_uncertainty);
            std::printf("rel_gap = %.6g, a in [%.4g, %.4g], |b| <= %.4g -> %s\n",
                        sum.report.rel_gap, sum.bounds.a_min, sum.bounds.a_max,
                        sum.bounds.b_max, sum.pass ? "PASS" : "FAIL");
            return sum.pass ? 0 : 2;
        }
        if (cmd_sweep->parsed()) {
            ddc::SweepResult res =
                ddc::run_sweep(ddc::read_json(config_path), out_dir, jobs);
            int failed = 0;
            for (const ddc::SweepRow& r : res.rows)
                if (!r.ok) ++failed;
            info("sweep complete: " + std::to_string(res.rows.size() - failed) + "/" +
                 std::to_string(res.rows.size()) + " runs ok");
            return failed == 0 ? 0 : 2;
        }
        if (cmd_report->parsed()) {
            ddc::report_run(run_dir);
            info("report bundle written to " + run_dir + "/report");
            return 0;
        }
    } catch (const ddc::SolverAbort& e) {
        error(std::string("solver abort: ") + e.what());
        return 2;
    } catch (const ddc::ConfigError& e) {
        error(e.what());
        return 1;
    } catch (const ddc::IoError& e) {
        error(e.what());
        return 1;
    } catch (const nlohmann::json::exception& e) {
        error(std::string("config parse: ") + e.what());
        return 1;
    } catch (const std::exception& e) {
        error(e.what());
        return 1;
    }
    return 1;
}
