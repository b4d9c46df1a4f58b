// Prescribed mean curvature flow engine: graph-flow velocity, the linearized
// operator's coefficients, explicit time stepping with a parabolic CFL rule,
// the run loop with diagnostics recording, and the Newton stationary solver.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pmcf/surface.hpp"

namespace pmcf {

struct PrescribedCurvatureField {
    // Point layout matches the chart: (t, x...).
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;  // optional analytic (d_t, d_i) H
    bool monotone_declared = false;
    // Point-independent fields declare their value so the stepping kernel can
    // hoist the evaluation out of its per-node loop.
    bool constant_declared = false;
    double constant_value = 0.0;
    double fd_step = 1e-6;
    std::string name;

    // Radial adapters used by the engine (fields are rotationally symmetric
    // in every engine scenario; the point is (t, r, 0, ...)).
    double at(double t, double r, int dim) const;
    double dt(double t, double r, int dim) const;   // partial_t H
    double dr(double t, double r, int dim) const;   // partial_r H
    Vec grad_or_fd(const Vec& point) const;         // analytic if present, else FD
};

struct FlowConfig {
    double cfl = 0.2;                       // fraction of the explicit stability bound
    enum class Integrator { euler, rk2, rk4 } integrator = Integrator::rk2;
    double s_end = 1.0;
    int record_every = 100;                 // steps between diagnostics rows
    double record_ds = 0.0;                 // > 0: record at exact s multiples instead
    double delta_floor = 0.05;              // hard spacelike abort threshold
    double delta_warn = 0.5;                // warning threshold
    enum class Boundary { pin_initial, pin_profile } boundary = Boundary::pin_initial;
    std::function<double(double r, double s)> boundary_profile;  // for pin_profile
    enum class Orientation { future, past } orientation = Orientation::future;
    double dt_override = 0.0;               // > 0: fixed dt instead of the CFL rule
    int max_steps = 200'000'000;
};

struct LinearizedCoefficients {
    // Radial/1D reduction of the operator: DF_v(phi) = phi_s - a phi'' + b phi' + c phi
    // (physical-coordinate derivatives).  a equals g^{rr} + v^r v^r / q exactly.
    Eigen::ArrayXd a, b, c;
};

// Velocity of the graph flow: ds w = (1 - |grad w|^2)^{1/2} (H - Hcal).
Eigen::ArrayXd flow_velocity(const SyncChart& chart, const GraphState& state,
                             const PrescribedCurvatureField& H_field);

// Coefficients of the linearized operator at state v.
LinearizedCoefficients linearized_coefficients(const SyncChart& chart, const GraphState& state,
                                               const PrescribedCurvatureField& H_field);

// Apply the linearized spatial operator: returns -a phi'' + b phi' + c phi.
Eigen::ArrayXd apply_linearized(const SpatialGrid& grid, const LinearizedCoefficients& lc,
                                const Eigen::ArrayXd& phi);

// One explicit step; dt = cfl * h_xi^2 / max_i(a_i / J_i^2) unless overridden.
// Throws SpacelikeViolation (state unchanged) or StepTooSmall (dt < 1e-14).
GraphState step(const SyncChart& chart, const GraphState& state,
                const PrescribedCurvatureField& H_field, const FlowConfig& config);

struct DiagnosticsRecord {
    double s = 0.0;
    double sup_H_minus_h = 0.0;
    double sup_kappa = 0.0;
    double sup_A = 0.0;
    double sup_phi = 0.0;
    double u_min = 0.0, u_max = 0.0;
    double q_min = 0.0;
    double r1 = 0.0, r6 = 0.0, r7 = 0.0;
    int barrier_violations = 0;
};

struct BarrierSpec {
    // Compared against the height field u per node; empty = absent.
    std::function<double(double r)> lower, upper;
    bool fatal = false;
};

struct DiagnosticsConfig {
    double lambda = 1.0, mu = 1.0;          // Ecker quantity parameters
    BarrierSpec barrier;
    std::optional<TimeFunction> diag_frame; // height/tilt reference
    bool height_window_enabled = false;     // run-termination window on u
    double tau_minus = 0.0, tau_plus = 0.0;
    bool keep_states = true;                // retain recorded states (residuals)
    double ricci_normal = 0.0;              // Ric(nu,nu) supplier constant (0 in Minkowski)
};

struct RunResult {
    GraphState final_state;
    std::vector<DiagnosticsRecord> records;
    std::vector<GraphState> states;         // states at record times (if kept)
    std::string termination;                // stable identifier, "completed" on success
    long long steps = 0;
    double wall_seconds = 0.0;
    int warn_count = 0;                     // records with q_min < delta_warn
};

// Iterate `step` until s_end (or typed early termination), recording
// diagnostics; residual columns are filled from the recorded states.
RunResult run_flow(const SyncChart& chart, const GraphState& initial,
                   const PrescribedCurvatureField& H_field, const FlowConfig& config,
                   const DiagnosticsConfig& diag);

struct NewtonReport {
    int iterations = 0;
    std::vector<double> residuals;  // sup|H - Hcal| after each iterate
};

// Newton iteration for the stationary equation H = Hcal: repeatedly solves
// -a phi'' + b phi' + c phi = -F(w)|_{ds=0} and updates w += phi until
// sup|H - Hcal| <= tol.  Throws NoConvergence after max_iter iterations.
GraphState stationary_solve(const SyncChart& chart, const GraphState& initial,
                            const PrescribedCurvatureField& H_field, double tol,
                            int max_iter = 50, NewtonReport* report = nullptr,
                            double delta_floor = 1e-6);

} // namespace pmcf
