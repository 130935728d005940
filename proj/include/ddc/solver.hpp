#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ddc/field.hpp"
#include "ddc/model.hpp"

namespace ddc {

struct SolverAbort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SimState {
    ScalarField u;
    ScalarField v;
    double t = 0.0;
    double consumed = 0.0;      // running integral of u*v over space-time
    double grad6_budget = 0.0;  // running integral of |grad v|^6 / v^5
};

struct Sample {
    double t = 0.0;
    double sup_v = 0.0;
    double mass_u = 0.0;
    double mass_v = 0.0;
    double consumed = 0.0;
    double harnack_ratio = 0.0;  // min v / max v
    double sup_u = 0.0;
    double lp_p64 = 0.0;         // L^64 norm of u
};

struct Snapshot {
    double t = 0.0;
    ScalarField u;
    ScalarField v;
};

struct EventLog {
    long clamped_cells = 0;
    double first_clamp_t = -1.0;
    std::vector<std::string> notes;
};

struct StopRule {
    double v_tol = 1e-6;   // stop once sup_v < v_tol * sup_v(0); 0 disables
    double T_max = 1e3;
};

enum class SnapshotMode { Auto, Uniform };

struct SamplePlan {
    double sample_dt = 0.01;
    int snapshot_count = 160;
    SnapshotMode mode = SnapshotMode::Auto;
};

struct Trajectory {
    Grid grid;
    std::vector<Sample> samples;
    std::vector<double> grad6;       // grad6_budget at each sample
    std::vector<Snapshot> snapshots;
    EventLog events;
    StopRule stop;
    double sup_v0 = 0.0;
    bool reached_vtol = false;
    long long steps = 0;
    double wall_seconds = 0.0;

    double t_end() const { return samples.empty() ? 0.0 : samples.back().t; }
};

struct AdvanceOptions {
    double dt_scale = 1.0;              // scales the CFL safety factor
    std::optional<double> fixed_dt;     // bypass adaptive control
    bool record_snapshots = true;
};

/// Scratch buffers shared across steps; optional in the public step API.
struct StepScratch {
    FaceField gv;     // face gradient of v
    FaceField drift;  // mean(v) * grad v at faces
    FaceField flux;
    std::vector<double> f_of_u;
    ScalarField r, p, Ap;  // conjugate-gradient workspace

    explicit StepScratch(const Grid& g)
        : gv(g), drift(g), flux(g), f_of_u(static_cast<size_t>(g.ncells())),
          r(g), p(g), Ap(g) {}
};

struct StepUResult {
    ScalarField u;
    long clamped = 0;
};

struct StepVResult {
    ScalarField v;
    int iterations = 0;
};

/// CFL-limited step size: explicit diffusion bound with D = max(u^(m-1) v)
/// plus an advective bound from the taxis wave speed; safety factor 0.4.
double stable_dt(const SimState& s, const ModelParams& p, double safety_scale = 1.0);

/// Explicit conservative update of u against the state's v (diffusive flux,
/// upwinded taxis flux, pointwise source ell*u*v). Values in [-1e-12, 0) are
/// clamped to zero and counted; anything lower aborts.
StepUResult step_u(const SimState& s, double dt, const ModelParams& p);

/// Backward-Euler step for v: solve (I - dt*Lap + dt*diag(u)) v_new = v_old
/// by conjugate gradients to relative residual 1e-10.
StepVResult step_v(const SimState& s, double dt);

/// Generic transport step on coefficient field c and signed face drift:
///   u_new = u + dt * [ div( mean(u)^(m-1) mean(c) grad u - f(u_up) drift )
///                      + ell * c * u ]
/// step_u is this with c = v and drift = mean(v) * grad v; the rescaled-chart
/// solver passes c = a(tau) and drift = b(tau).
StepUResult transport_step(const ScalarField& u, const ScalarField& c,
                           const FaceField& drift, double dt, const ModelParams& p,
                           StepScratch* ws = nullptr);

double transport_stable_dt(const ScalarField& u, const ScalarField& c,
                           const FaceField& drift, const ModelParams& p,
                           double safety_scale = 1.0);

/// Integrate the system from (u0e, v0) until the stopping rule fires.
Trajectory advance(const InitialData& data, const ModelParams& p, const Grid& grid,
                   const SamplePlan& plan, const StopRule& stop,
                   const AdvanceOptions& opts = {});

struct OrderCheck {
    double diff_coarse = 0.0;  // |u_dt - u_dt/2|_inf at T
    double diff_fine = 0.0;    // |u_dt/2 - u_dt/4|_inf at T
    double order = 0.0;        // log2 of the ratio
    bool exact = false;        // differences below rounding, order undefined
};

/// Richardson triple run (dt, dt/2, dt/4) to a fixed horizon with fixed steps.
OrderCheck splitting_order_check(const InitialData& data, const ModelParams& p,
                                 const Grid& grid, double T, double base_dt);

}  // namespace ddc
