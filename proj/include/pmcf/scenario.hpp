// Declarative scenario layer: config parsing/validation, built-in presets,
// execution of flow / stationary-solve / foliation / Schwarzschild-expansion
// / verify pipelines, and series + summary export.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pmcf/flow.hpp"

namespace pmcf {

enum class ScenarioKind { flow, stationary_solve, foliation, schwarzschild_expansion, verify };

struct ScenarioConfig {
    std::string name = "run";
    ScenarioKind kind = ScenarioKind::flow;

    // chart
    std::string chart = "minkowski";  // minkowski | milne
    int dim = 1;                      // surface dimension n
    double milne_tau0 = 1.0;

    // grid
    std::string topology = "radial";  // radial | box-dirichlet | box-periodic
    Eigen::Index nodes = 512;
    double r_max = 10.0;
    double x_min = -1.0;              // boxes
    std::string stretch = "none";     // none | sinh | sinh-axis
    double stretch_scale = 1.0;

    // initial data
    std::string initial = "hyperboloid";  // hyperboloid | constant
    double tau0 = 1.0;
    double initial_constant = 0.0;
    double bump_amplitude = 0.0, bump_center = 0.0, bump_width = 0.5;

    // prescribed curvature
    std::string h_kind = "constant";  // constant | cmc | example | zero
    double h_value = 0.0;             // for constant

    // flow parameters
    FlowConfig flow;
    std::string boundary_profile = "initial";  // initial | selfsim

    // diagnostics
    double lambda = 1.0, mu = 1.0;
    std::string frame = "default";    // default | hyperboloid
    bool barrier_enabled = false;
    double barrier_lower = 0.0, barrier_upper = 0.0;
    bool barrier_fatal = false;
    bool height_window_enabled = false;
    double tau_minus = 0.0, tau_plus = 0.0;
    int snapshot_every = 0;           // state JSON snapshots every k records

    // configured summary checks
    bool check_decay = false;
    double decay_window_a = 0.2, decay_window_b = 1.0;
    bool check_s_inverse = false;     // sup(H-Hcal)^2 <= 1.05/s for s >= 0.05
    double s_inverse_slack = 0.05, s_inverse_start = 0.05;
    bool check_barrier_zero = false;
    bool check_u_range = false;
    double u_range_lo = 0.0, u_range_hi = 0.0;
    bool check_gradient_identity = false;
    double gradient_identity_scale = 25.0;
    bool require_initial_h_positive = false;
    double initial_h_epsilon = 0.0;

    // stationary solve
    double newton_tol = 1e-8;
    int newton_max_iter = 50;
    // Spacelike guard for the Newton iterate; much looser than the flow's
    // CFL floor because a stationary solution may legitimately approach the
    // light cone near the outer boundary (q ~ 1/(1+r_max^2) for a hyperboloid).
    double newton_delta_floor = 1e-6;

    // foliation scenario
    std::string foliation_case = "hyperboloid";  // hyperboloid | tanh
    double foliation_t_end = 1.0;
    double foliation_dt = 1e-3;
    bool foliation_override_window = false;
    double foliation_c0 = 0.0, foliation_v0 = 1.0;
    double window_constant = 1.0;

    // schwarzschild expansion
    double schw_m = 1.0, schw_tau = 1.0;
    std::vector<double> schw_x = {0.02, 0.01, 0.005};
    int schw_n_theta = 33, schw_n_phi = 8, schw_n_x = 5;
    double schw_rel_step = 0.02;

    // verify scenario
    std::string verify_filter;
    unsigned seed = 0x5EED;
};

struct CheckResult {
    bool pass = false;
    double margin = 0.0;   // positive = clearance, negative = violation depth
};

struct RunSummary {
    std::string name;
    std::string termination = "completed";
    double s_final = 0.0;
    double sup_h_minus_h_final = 0.0;
    std::optional<double> decay_rate;
    std::map<std::string, CheckResult> checks;
    double wall_time_seconds = 0.0;
    bool all_checks_pass() const {
        for (const auto& [k, c] : checks)
            if (!c.pass) return false;
        return true;
    }
};

// Parse and validate a TOML config; a [scenario] preset key loads a built-in
// first and applies the file's overrides on top.
ScenarioConfig parse_config(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

// Built-in presets, in presentation order.
std::vector<std::string> preset_names();
ScenarioConfig preset(const std::string& name);

// Wired-up pieces of a flow scenario (shared by run_scenario and tests).
struct ScenarioSetup {
    SyncChart chart;
    std::shared_ptr<const SpatialGrid> grid;
    GraphState initial;
    PrescribedCurvatureField H_field;
    FlowConfig flow;
    DiagnosticsConfig diag;
};
ScenarioSetup build_setup(const ScenarioConfig& config);

// Execute; writes <name>.series.csv, <name>.summary.json and optional
// <name>.state.<k>.json under out_dir.  Typed engine errors become the
// summary's termination reason (and a failed "completed" check).
RunSummary run_scenario(const ScenarioConfig& config, const std::string& out_dir,
                        RunResult* result_out = nullptr);

std::string summary_to_json(const RunSummary& summary);

} // namespace pmcf
