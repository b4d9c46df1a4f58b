// Declarative scenario layer: TOML config -> validated ScenarioConfig ->
// wired chart/grid/field/flow -> executed pipeline with series + summary
// artifacts.
#include "pmcf/scenario.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pmcf/diagnostics.hpp"
#include "pmcf/embedding.hpp"
#include "pmcf/foliation.hpp"
#include "pmcf/spacetimes.hpp"
#include "pmcf/toml.hpp"
#include "pmcf/verify.hpp"

namespace pmcf {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void invalid(const std::string& message) { throw ValidationError(message); }

ScenarioKind kind_from_string(const std::string& s) {
    if (s == "flow") return ScenarioKind::flow;
    if (s == "stationary") return ScenarioKind::stationary_solve;
    if (s == "foliation") return ScenarioKind::foliation;
    if (s == "schwarzschild") return ScenarioKind::schwarzschild_expansion;
    if (s == "verify") return ScenarioKind::verify;
    invalid("scenario.kind must be one of flow, stationary, foliation, schwarzschild, verify");
}

std::string kind_to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::flow: return "flow";
        case ScenarioKind::stationary_solve: return "stationary";
        case ScenarioKind::foliation: return "foliation";
        case ScenarioKind::schwarzschild_expansion: return "schwarzschild";
        case ScenarioKind::verify: return "verify";
    }
    return "flow";
}

std::string integrator_to_string(FlowConfig::Integrator i) {
    switch (i) {
        case FlowConfig::Integrator::euler: return "euler";
        case FlowConfig::Integrator::rk2: return "rk2";
        case FlowConfig::Integrator::rk4: return "rk4";
    }
    return "rk2";
}

FlowConfig::Integrator integrator_from_string(const std::string& s) {
    if (s == "euler") return FlowConfig::Integrator::euler;
    if (s == "rk2") return FlowConfig::Integrator::rk2;
    if (s == "rk4") return FlowConfig::Integrator::rk4;
    invalid("flow.integrator must be one of euler, rk2, rk4");
}

void apply_document(const toml::Document& doc, ScenarioConfig& c) {
    c.name = doc.get_string("scenario.name", c.name);
    c.kind = kind_from_string(doc.get_string("scenario.kind", kind_to_string(c.kind)));

    c.chart = doc.get_string("chart.kind", c.chart);
    c.dim = int(doc.get_int("chart.dim", c.dim));
    c.milne_tau0 = doc.get_float("chart.milne_tau0", c.milne_tau0);

    c.topology = doc.get_string("grid.topology", c.topology);
    c.nodes = Eigen::Index(doc.get_int("grid.nodes", c.nodes));
    c.r_max = doc.get_float("grid.r_max", c.r_max);
    c.x_min = doc.get_float("grid.x_min", c.x_min);
    c.stretch = doc.get_string("grid.stretch", c.stretch);
    c.stretch_scale = doc.get_float("grid.stretch_scale", c.stretch_scale);

    c.initial = doc.get_string("initial.kind", c.initial);
    c.tau0 = doc.get_float("initial.tau0", c.tau0);
    c.initial_constant = doc.get_float("initial.constant", c.initial_constant);
    c.bump_amplitude = doc.get_float("initial.bump_amplitude", c.bump_amplitude);
    c.bump_center = doc.get_float("initial.bump_center", c.bump_center);
    c.bump_width = doc.get_float("initial.bump_width", c.bump_width);

    c.h_kind = doc.get_string("prescribed.kind", c.h_kind);
    c.h_value = doc.get_float("prescribed.value", c.h_value);

    c.flow.cfl = doc.get_float("flow.cfl", c.flow.cfl);
    c.flow.integrator =
        integrator_from_string(doc.get_string("flow.integrator", integrator_to_string(c.flow.integrator)));
    c.flow.s_end = doc.get_float("flow.s_end", c.flow.s_end);
    c.flow.record_every = int(doc.get_int("flow.record_every", c.flow.record_every));
    c.flow.record_ds = doc.get_float("flow.record_ds", c.flow.record_ds);
    c.flow.delta_floor = doc.get_float("flow.delta_floor", c.flow.delta_floor);
    c.flow.delta_warn = doc.get_float("flow.delta_warn", c.flow.delta_warn);
    {
        const bool pin_profile = c.flow.boundary == FlowConfig::Boundary::pin_profile;
        const std::string b =
            doc.get_string("flow.boundary", pin_profile ? "pin-profile" : "pin-initial");
        if (b == "pin-initial")
            c.flow.boundary = FlowConfig::Boundary::pin_initial;
        else if (b == "pin-profile")
            c.flow.boundary = FlowConfig::Boundary::pin_profile;
        else
            invalid("flow.boundary must be pin-initial or pin-profile");
    }
    c.boundary_profile = doc.get_string("flow.boundary_profile", c.boundary_profile);
    {
        const bool past = c.flow.orientation == FlowConfig::Orientation::past;
        const std::string o = doc.get_string("flow.orientation", past ? "past" : "future");
        if (o == "future")
            c.flow.orientation = FlowConfig::Orientation::future;
        else if (o == "past")
            c.flow.orientation = FlowConfig::Orientation::past;
        else
            invalid("flow.orientation must be future or past");
    }
    c.flow.dt_override = doc.get_float("flow.dt_override", c.flow.dt_override);
    c.flow.max_steps = int(doc.get_int("flow.max_steps", c.flow.max_steps));

    c.lambda = doc.get_float("diagnostics.lambda", c.lambda);
    c.mu = doc.get_float("diagnostics.mu", c.mu);
    c.frame = doc.get_string("diagnostics.frame", c.frame);
    c.barrier_enabled = doc.get_bool("diagnostics.barrier_enabled", c.barrier_enabled);
    c.barrier_lower = doc.get_float("diagnostics.barrier_lower", c.barrier_lower);
    c.barrier_upper = doc.get_float("diagnostics.barrier_upper", c.barrier_upper);
    c.barrier_fatal = doc.get_bool("diagnostics.barrier_fatal", c.barrier_fatal);
    c.height_window_enabled =
        doc.get_bool("diagnostics.height_window_enabled", c.height_window_enabled);
    c.tau_minus = doc.get_float("diagnostics.tau_minus", c.tau_minus);
    c.tau_plus = doc.get_float("diagnostics.tau_plus", c.tau_plus);
    c.snapshot_every = int(doc.get_int("diagnostics.snapshot_every", c.snapshot_every));

    c.check_decay = doc.get_bool("checks.decay", c.check_decay);
    c.decay_window_a = doc.get_float("checks.decay_window_a", c.decay_window_a);
    c.decay_window_b = doc.get_float("checks.decay_window_b", c.decay_window_b);
    c.check_s_inverse = doc.get_bool("checks.s_inverse", c.check_s_inverse);
    c.s_inverse_slack = doc.get_float("checks.s_inverse_slack", c.s_inverse_slack);
    c.s_inverse_start = doc.get_float("checks.s_inverse_start", c.s_inverse_start);
    c.check_barrier_zero = doc.get_bool("checks.barrier_zero", c.check_barrier_zero);
    c.check_u_range = doc.get_bool("checks.u_range", c.check_u_range);
    c.u_range_lo = doc.get_float("checks.u_range_lo", c.u_range_lo);
    c.u_range_hi = doc.get_float("checks.u_range_hi", c.u_range_hi);
    c.check_gradient_identity =
        doc.get_bool("checks.gradient_identity", c.check_gradient_identity);
    c.gradient_identity_scale =
        doc.get_float("checks.gradient_identity_scale", c.gradient_identity_scale);
    c.require_initial_h_positive =
        doc.get_bool("checks.require_initial_h_positive", c.require_initial_h_positive);
    c.initial_h_epsilon = doc.get_float("checks.initial_h_epsilon", c.initial_h_epsilon);

    c.newton_tol = doc.get_float("stationary.newton_tol", c.newton_tol);
    c.newton_max_iter = int(doc.get_int("stationary.newton_max_iter", c.newton_max_iter));
    c.newton_delta_floor = doc.get_float("stationary.delta_floor", c.newton_delta_floor);

    c.foliation_case = doc.get_string("foliation.case", c.foliation_case);
    c.foliation_t_end = doc.get_float("foliation.t_end", c.foliation_t_end);
    c.foliation_dt = doc.get_float("foliation.dt", c.foliation_dt);
    c.foliation_override_window =
        doc.get_bool("foliation.override_window", c.foliation_override_window);
    c.foliation_c0 = doc.get_float("foliation.c0", c.foliation_c0);
    c.foliation_v0 = doc.get_float("foliation.v0", c.foliation_v0);
    c.window_constant = doc.get_float("foliation.window_constant", c.window_constant);

    c.schw_m = doc.get_float("schwarzschild.m", c.schw_m);
    c.schw_tau = doc.get_float("schwarzschild.tau", c.schw_tau);
    if (doc.has("schwarzschild.x")) c.schw_x = doc.get_float_array("schwarzschild.x");
    c.schw_n_theta = int(doc.get_int("schwarzschild.n_theta", c.schw_n_theta));
    c.schw_n_phi = int(doc.get_int("schwarzschild.n_phi", c.schw_n_phi));
    c.schw_n_x = int(doc.get_int("schwarzschild.n_x", c.schw_n_x));
    c.schw_rel_step = doc.get_float("schwarzschild.rel_step", c.schw_rel_step);

    c.verify_filter = doc.get_string("verify.filter", c.verify_filter);
    c.seed = unsigned(doc.get_int("verify.seed", std::int64_t(c.seed)));
}

void validate(const ScenarioConfig& c) {
    if (c.name.empty()) invalid("scenario.name must be nonempty");
    for (char ch : c.name)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-'))
            invalid("scenario.name must use only letters, digits, '_' and '-'");

    if (c.chart != "minkowski" && c.chart != "milne")
        invalid("chart.kind must be minkowski or milne");
    if (c.dim < 1) invalid("dim must be at least 1");
    if (c.chart == "milne" && !(c.milne_tau0 > 0.0)) invalid("milne_tau0 must be positive");

    if (c.topology != "radial" && c.topology != "box-dirichlet" && c.topology != "box-periodic")
        invalid("grid.topology must be radial, box-dirichlet or box-periodic");
    const bool is_box = c.topology != "radial";
    if (is_box && c.dim != 1) invalid("box topologies require dim = 1");
    if (c.nodes < 9) invalid("grid.nodes must be at least 9");
    if (!(c.r_max > 0.0) && !is_box) invalid("r_max must be positive");
    if (is_box && !(c.x_min < c.r_max)) invalid("x_min must be below r_max");
    if (c.stretch != "none" && c.stretch != "sinh" && c.stretch != "sinh-axis")
        invalid("grid.stretch must be none, sinh or sinh-axis");
    if (c.stretch != "none" && is_box) invalid("sinh stretching requires the radial topology");
    if (c.stretch != "none" && !(c.stretch_scale > 0.0))
        invalid("stretch_scale must be positive");

    if (c.initial != "hyperboloid" && c.initial != "constant")
        invalid("initial.kind must be hyperboloid or constant");
    if (c.initial == "hyperboloid" && !(c.tau0 > 0.0)) invalid("tau0 must be positive");
    if (c.bump_amplitude != 0.0) {
        if (!(c.bump_width > 0.0)) invalid("bump_width must be positive");
        if (!is_box && !(c.r_max > c.bump_center + 3.0 * c.bump_width))
            invalid("r_max must exceed bump_center + 3*bump_width");
    }

    if (c.h_kind != "constant" && c.h_kind != "cmc" && c.h_kind != "example" &&
        c.h_kind != "zero")
        invalid("prescribed.kind must be constant, cmc, example or zero");
    if (c.h_kind == "cmc" && c.initial != "hyperboloid")
        invalid("prescribed.kind = cmc requires hyperboloid initial data");

    if (!(c.flow.cfl > 0.0 && c.flow.cfl <= 1.0)) invalid("flow.cfl must lie in (0, 1]");
    if (!(c.flow.s_end > 0.0)) invalid("flow.s_end must be positive");
    if (c.flow.record_every < 1) invalid("flow.record_every must be at least 1");
    if (c.flow.record_ds < 0.0) invalid("flow.record_ds must be nonnegative");
    if (!(c.flow.delta_floor >= 0.0 && c.flow.delta_floor < 1.0))
        invalid("flow.delta_floor must lie in [0, 1)");
    if (!(c.flow.delta_warn > c.flow.delta_floor && c.flow.delta_warn <= 1.0))
        invalid("flow.delta_warn must lie in (delta_floor, 1]");
    if (c.flow.dt_override < 0.0) invalid("flow.dt_override must be nonnegative");
    if (c.flow.max_steps < 1) invalid("flow.max_steps must be at least 1");
    if (c.boundary_profile != "initial" && c.boundary_profile != "selfsim")
        invalid("flow.boundary_profile must be initial or selfsim");
    if (c.flow.boundary == FlowConfig::Boundary::pin_profile) {
        if (c.boundary_profile != "selfsim")
            invalid("flow.boundary = pin-profile requires boundary_profile = selfsim");
        if (c.h_kind != "zero") invalid("boundary_profile = selfsim requires h_kind = zero");
        if (c.initial != "hyperboloid" || c.chart != "minkowski" || c.topology != "radial")
            invalid("boundary_profile = selfsim requires a radial Minkowski hyperboloid setup");
    }

    if (c.frame != "default" && c.frame != "hyperboloid")
        invalid("diagnostics.frame must be default or hyperboloid");
    if (c.frame == "hyperboloid" && c.chart != "minkowski")
        invalid("frame = hyperboloid requires chart = minkowski");
    if (c.barrier_enabled && !(c.barrier_lower > 0.0))
        invalid("barrier_lower must be positive");
    if (c.barrier_enabled && !(c.barrier_upper > c.barrier_lower))
        invalid("barrier_upper must exceed barrier_lower");
    if (c.height_window_enabled && !(c.tau_plus > c.tau_minus))
        invalid("tau_plus must exceed tau_minus");
    if (c.snapshot_every < 0) invalid("diagnostics.snapshot_every must be nonnegative");

    if (c.check_decay && !(c.decay_window_b > c.decay_window_a && c.decay_window_a >= 0.0))
        invalid("checks.decay_window must satisfy 0 <= a < b");
    if (c.check_s_inverse && !(c.s_inverse_start > 0.0))
        invalid("checks.s_inverse_start must be positive");
    if (c.check_s_inverse && c.s_inverse_slack < 0.0)
        invalid("checks.s_inverse_slack must be nonnegative");
    if (c.check_u_range && !(c.u_range_hi > c.u_range_lo))
        invalid("checks.u_range_hi must exceed u_range_lo");
    if (c.check_gradient_identity && !(c.gradient_identity_scale > 0.0))
        invalid("checks.gradient_identity_scale must be positive");
    if (c.require_initial_h_positive && c.initial_h_epsilon < 0.0)
        invalid("checks.initial_h_epsilon must be nonnegative");

    if (!(c.newton_tol > 0.0)) invalid("newton_tol must be positive");
    if (c.newton_max_iter < 1) invalid("newton_max_iter must be at least 1");
    if (!(c.newton_delta_floor > 0.0)) invalid("stationary delta_floor must be positive");

    if (c.kind == ScenarioKind::foliation) {
        if (c.foliation_case != "hyperboloid" && c.foliation_case != "tanh")
            invalid("foliation.case must be hyperboloid or tanh");
        if (!(c.foliation_t_end > 0.0)) invalid("foliation.t_end must be positive");
        if (!(c.foliation_dt > 0.0)) invalid("foliation.dt must be positive");
        if (!(c.foliation_v0 > 0.0)) invalid("foliation.v0 must be positive");
        if (c.foliation_c0 < 0.0) invalid("foliation.c0 must be nonnegative");
        if (!(c.window_constant > 0.0)) invalid("foliation.window_constant must be positive");
    }

    if (c.kind == ScenarioKind::schwarzschild_expansion) {
        if (c.schw_m < 0.0) invalid("schwarzschild.m must be nonnegative");
        if (!(c.schw_tau > 0.0)) invalid("schwarzschild.tau must be positive");
        if (c.schw_x.empty()) invalid("schwarzschild.x must be a nonempty array");
        double prev = 1e300;
        for (double x : c.schw_x) {
            const bool inside = x > 0.0 && (c.schw_m == 0.0 || x < 1.0 / (2.0 * c.schw_m));
            if (!inside || !(x < prev))
                invalid("schwarzschild.x samples must be positive, descending, and inside the "
                        "chart validity");
            prev = x;
        }
        if (c.schw_n_theta < 5) invalid("schwarzschild.n_theta must be at least 5");
        if (c.schw_n_phi < 4) invalid("schwarzschild.n_phi must be at least 4");
        if (c.schw_n_x < 3 || c.schw_n_x % 2 == 0)
            invalid("schwarzschild.n_x must be an odd number >= 3 so a centered shell exists");
        if (!(c.schw_rel_step > 0.0 && c.schw_rel_step <= 0.2))
            invalid("schwarzschild.rel_step must lie in (0, 0.2]");
    }
}

ScenarioConfig from_document(const toml::Document& doc) {
    ScenarioConfig cfg;
    if (doc.has("scenario.preset")) cfg = preset(doc.at("scenario.preset").as_string());
    apply_document(doc, cfg);
    validate(cfg);
    const auto unknown = doc.unconsumed();
    if (!unknown.empty()) {
        std::ostringstream os;
        os << doc.origin() << ":" << doc.line_of(unknown.front()) << ": unknown config key '"
           << unknown.front() << "'";
        throw ParseError(os.str());
    }
    return cfg;
}

// --- presets ---------------------------------------------------------------

ScenarioConfig stationary_preset(int n, double tau0) {
    ScenarioConfig c;
    std::ostringstream name;
    name << "mink-stationary-n" << n << "-tau" << (tau0 < 1.0 ? "05" : "2");
    c.name = name.str();
    c.dim = n;
    c.nodes = 2048;
    c.r_max = 20.0 * tau0;
    c.stretch = "sinh-axis";
    c.stretch_scale = tau0;
    c.tau0 = tau0;
    c.h_kind = "cmc";
    c.flow.integrator = FlowConfig::Integrator::euler;
    c.flow.cfl = 0.45;
    c.flow.s_end = 1.0;
    c.flow.record_ds = 0.1;
    c.flow.delta_floor = 1e-3;
    c.flow.delta_warn = 2e-3;
    c.frame = "hyperboloid";
    c.check_u_range = true;
    c.u_range_lo = 0.995 * tau0;
    c.u_range_hi = 1.005 * tau0;
    c.check_gradient_identity = true;
    c.require_initial_h_positive = true;
    c.initial_h_epsilon = 0.5 * double(n) / tau0;
    return c;
}

ScenarioConfig selfsim_preset(int n) {
    ScenarioConfig c;
    c.name = n == 1 ? "mink-selfsim-n1" : "mink-selfsim-n2";
    c.dim = n;
    c.nodes = 512;
    c.r_max = 5.0;
    c.stretch = "none";
    c.tau0 = 1.0;
    c.h_kind = "zero";
    c.flow.integrator = FlowConfig::Integrator::rk2;
    c.flow.cfl = 0.45;
    c.flow.s_end = 1.0;
    c.flow.record_ds = 0.05;
    c.flow.delta_floor = 5e-3;
    c.flow.delta_warn = 2e-2;
    c.flow.boundary = FlowConfig::Boundary::pin_profile;
    c.boundary_profile = "selfsim";
    c.frame = "hyperboloid";
    c.check_s_inverse = true;
    c.check_u_range = true;
    c.u_range_lo = 0.99;
    c.u_range_hi = n == 1 ? 1.75 : 2.25;
    c.check_gradient_identity = true;
    c.require_initial_h_positive = true;
    c.initial_h_epsilon = 0.1;
    return c;
}

ScenarioConfig perturbed_cmc_preset() {
    ScenarioConfig c;
    c.name = "mink-perturbed-cmc";
    c.dim = 1;
    c.nodes = 1024;
    c.r_max = 12.0;
    c.stretch = "sinh";
    c.stretch_scale = 1.0;
    c.tau0 = 1.0;
    c.bump_amplitude = 0.05;
    c.bump_center = 0.0;
    c.bump_width = 0.5;
    c.h_kind = "cmc";
    c.flow.integrator = FlowConfig::Integrator::rk2;
    c.flow.cfl = 0.45;
    c.flow.s_end = 1.2;
    c.flow.record_ds = 0.02;
    c.flow.delta_floor = 1e-3;
    c.flow.delta_warn = 5e-3;
    c.frame = "hyperboloid";
    c.barrier_enabled = true;
    c.barrier_lower = 0.9;
    c.barrier_upper = 1.2;
    c.check_decay = true;
    c.check_barrier_zero = true;
    c.check_gradient_identity = true;
    c.require_initial_h_positive = true;
    c.initial_h_epsilon = 0.1;
    return c;
}

ScenarioConfig example_h_preset() {
    ScenarioConfig c;
    c.name = "mink-example-H";
    c.dim = 1;
    c.nodes = 512;
    c.r_max = 10.0;
    c.stretch = "sinh";
    c.stretch_scale = 0.5;
    c.tau0 = 0.5;
    c.h_kind = "example";
    c.flow.integrator = FlowConfig::Integrator::rk2;
    c.flow.cfl = 0.45;
    c.flow.s_end = 2.0;
    c.flow.record_ds = 0.05;
    c.flow.delta_floor = 1e-3;
    c.flow.delta_warn = 2e-3;
    c.frame = "hyperboloid";
    c.check_u_range = true;
    c.u_range_lo = 0.25;
    c.u_range_hi = 1.0;
    c.check_gradient_identity = true;
    c.require_initial_h_positive = true;
    c.initial_h_epsilon = 0.1;
    return c;
}

ScenarioConfig pinched_barrier_preset() {
    ScenarioConfig c;
    c.name = "mink-pinched-barrier";
    c.dim = 1;
    c.nodes = 768;
    c.r_max = 12.0;
    c.stretch = "sinh";
    c.stretch_scale = 1.0;
    c.tau0 = 1.0;
    c.bump_amplitude = 0.08;
    c.bump_center = 1.0;
    c.bump_width = 0.4;
    c.h_kind = "constant";
    c.h_value = 1.0;
    c.flow.integrator = FlowConfig::Integrator::rk2;
    c.flow.cfl = 0.45;
    c.flow.s_end = 1.0;
    c.flow.record_ds = 0.02;
    c.flow.delta_floor = 1e-3;
    c.flow.delta_warn = 5e-3;
    c.frame = "hyperboloid";
    c.barrier_enabled = true;
    c.barrier_lower = 0.8;
    c.barrier_upper = 1.25;
    c.check_barrier_zero = true;
    c.check_u_range = true;
    c.u_range_lo = 0.85;
    c.u_range_hi = 1.2;
    c.check_gradient_identity = true;
    return c;
}

ScenarioConfig dual_cmc_preset() {
    ScenarioConfig c;
    c.name = "mink-dual-cmc";
    c.dim = 1;
    c.nodes = 768;
    c.r_max = 12.0;
    c.stretch = "sinh";
    c.stretch_scale = 1.0;
    c.tau0 = 1.0;
    c.bump_amplitude = 0.03;
    c.bump_center = 0.0;
    c.bump_width = 0.5;
    c.h_kind = "constant";
    c.h_value = -1.0;  // past-directed flow toward H = +1
    c.flow.integrator = FlowConfig::Integrator::rk2;
    c.flow.cfl = 0.45;
    c.flow.s_end = 1.2;
    c.flow.record_ds = 0.02;
    c.flow.delta_floor = 1e-3;
    c.flow.delta_warn = 5e-3;
    c.flow.orientation = FlowConfig::Orientation::past;
    c.frame = "hyperboloid";
    c.check_decay = true;
    c.check_u_range = true;
    c.u_range_lo = 0.9;
    c.u_range_hi = 1.1;
    c.check_gradient_identity = true;
    return c;
}

ScenarioConfig foliation_preset(const std::string& which) {
    ScenarioConfig c;
    c.kind = ScenarioKind::foliation;
    c.foliation_case = which;
    c.foliation_dt = 1e-3;
    c.foliation_v0 = 1.0;
    if (which == "hyperboloid") {
        c.name = "folia-hyperboloid";
        c.tau0 = 1.0;
        c.foliation_t_end = 0.5;
        c.foliation_c0 = 0.0;
        c.window_constant = 2.0;
    } else {
        c.name = "folia-tanh";
        c.foliation_t_end = 1.0;
        c.foliation_c0 = 1.0;
        c.window_constant = 2.2;
    }
    return c;
}

ScenarioConfig schw_expansion_preset() {
    ScenarioConfig c;
    c.name = "schw-expansion";
    c.kind = ScenarioKind::schwarzschild_expansion;
    c.schw_m = 1.0;
    c.schw_tau = 1.0;
    c.schw_x = {0.02, 0.01, 0.005};
    c.schw_n_theta = 33;
    c.schw_n_phi = 8;
    c.schw_n_x = 5;
    c.schw_rel_step = 0.02;
    return c;
}

// --- execution helpers -----------------------------------------------------

double max_physical_spacing(const SpatialGrid& grid) {
    double h = 0.0;
    for (Eigen::Index i = 0; i + 1 < grid.nodes; ++i)
        h = std::max(h, grid.r[i + 1] - grid.r[i]);
    return h;
}

DiagnosticsRecord record_of_geometry(const SurfaceGeometry& geom,
                                     const PrescribedCurvatureField& field,
                                     const DiagnosticsConfig& diag, double s) {
    DiagnosticsRecord rec;
    rec.s = s;
    const Eigen::Index N = geom.grid->nodes;
    Eigen::ArrayXd hcal(N);
    for (Eigen::Index i = 0; i < N; ++i)
        hcal[i] = field.at(geom.w[i], geom.grid->r[i], geom.n + 1);
    rec.sup_H_minus_h = (geom.H - hcal).abs().maxCoeff();
    rec.sup_kappa = geom.kappa.maxCoeff();
    rec.sup_A = geom.A_norm.maxCoeff();
    rec.sup_phi = ecker_quantity(geom, hcal, diag.lambda, diag.mu).maxCoeff();
    rec.u_min = geom.u.minCoeff();
    rec.u_max = geom.u.maxCoeff();
    rec.q_min = geom.q_min;
    if (diag.barrier.lower || diag.barrier.upper) {
        const BarrierFlags flags = barrier_check(geom.u, geom.grid->r, diag.barrier);
        rec.barrier_violations = flags.violations;
    }
    return rec;
}

void write_summary(const std::string& out_dir, const RunSummary& summary) {
    std::ofstream os(out_dir + "/" + summary.name + ".summary.json", std::ios::binary);
    if (!os) throw Error("cannot write summary for " + summary.name);
    os << summary_to_json(summary) << "\n";
}

void write_series(const std::string& out_dir, const std::string& name,
                  const std::vector<DiagnosticsRecord>& records) {
    write_records_csv(out_dir + "/" + name + ".series.csv", records);
}

void write_snapshot(const std::string& out_dir, const std::string& name, int k,
                    const GraphState& state) {
    ordered_json j;
    j["s"] = state.s;
    j["grid"]["topology"] = state.grid->radial()
                                ? "radial"
                                : (state.grid->periodic() ? "box-periodic" : "box-dirichlet");
    j["grid"]["nodes"] = state.grid->nodes;
    j["grid"]["r"] = std::vector<double>(state.grid->r.data(),
                                         state.grid->r.data() + state.grid->nodes);
    j["w"] = std::vector<double>(state.w.data(), state.w.data() + state.w.size());
    std::ofstream os(out_dir + "/" + name + ".state." + std::to_string(k) + ".json",
                     std::ios::binary);
    if (!os) throw Error("cannot write snapshot for " + name);
    os << j.dump(2) << "\n";
}

std::string termination_of(const Error& e) {
    if (dynamic_cast<const SpacelikeViolation*>(&e)) return "spacelike_violation";
    if (dynamic_cast<const StepTooSmall*>(&e)) return "step_too_small";
    if (dynamic_cast<const DomainError*>(&e)) return "domain_error";
    if (dynamic_cast<const NoConvergence*>(&e)) return "no_convergence";
    if (dynamic_cast<const DegenerateMetric*>(&e)) return "degenerate_metric";
    return "error";
}

void run_flow_scenario(const ScenarioConfig& config, const std::string& out_dir,
                       RunSummary& summary, RunResult* result_out) {
    ScenarioSetup setup = build_setup(config);

    if (config.require_initial_h_positive) {
        const SurfaceGeometry g0 = graph_geometry(setup.chart, setup.initial, setup.diag.diag_frame);
        const double h_min = g0.H.minCoeff();
        summary.checks["initial_h_positive"] = {h_min >= config.initial_h_epsilon,
                                                h_min - config.initial_h_epsilon};
    }

    RunResult rr = run_flow(setup.chart, setup.initial, setup.H_field, setup.flow, setup.diag);
    summary.termination = rr.termination;
    if (!rr.records.empty()) {
        summary.s_final = rr.records.back().s;
        summary.sup_h_minus_h_final = rr.records.back().sup_H_minus_h;
    }
    summary.checks["completed"] = {rr.termination == "completed",
                                   rr.termination == "completed" ? 0.0 : -1.0};

    std::vector<double> s_series, h_series;
    for (const auto& rec : rr.records) {
        s_series.push_back(rec.s);
        h_series.push_back(rec.sup_H_minus_h);
    }

    if (config.check_decay) {
        CheckResult cr;
        try {
            const DecayFit fit = decay_fit(s_series, h_series, config.decay_window_a,
                                           config.decay_window_b);
            summary.decay_rate = fit.rate;
            cr.pass = fit.rate > 0.0 && fit.fit_residual < 0.1;
            cr.margin = std::min(fit.rate, 0.1 - fit.fit_residual);
        } catch (const Error&) {
            cr.pass = false;
            cr.margin = -1.0;
        }
        summary.checks["decay"] = cr;
    }

    if (config.check_s_inverse) {
        double worst = 1e300;
        for (const auto& rec : rr.records) {
            if (rec.s < config.s_inverse_start) continue;
            worst = std::min(worst, (1.0 + config.s_inverse_slack) / rec.s -
                                        rec.sup_H_minus_h * rec.sup_H_minus_h);
        }
        summary.checks["s_inverse"] = {worst >= 0.0 && worst < 1e300,
                                       worst < 1e300 ? worst : -1.0};
    }

    if (config.check_barrier_zero) {
        int total = 0;
        for (const auto& rec : rr.records) total += rec.barrier_violations;
        double clearance = 1e300;
        for (const auto& st : rr.states) {
            const SurfaceGeometry g = graph_geometry(setup.chart, st, setup.diag.diag_frame);
            clearance = std::min(clearance,
                                 barrier_check(g.u, st.grid->r, setup.diag.barrier).worst_margin);
        }
        summary.checks["barrier_zero"] = {total == 0, total == 0 ? clearance : -double(total)};
    }

    if (config.check_u_range) {
        double lo = 1e300, hi = -1e300;
        for (const auto& rec : rr.records) {
            lo = std::min(lo, rec.u_min);
            hi = std::max(hi, rec.u_max);
        }
        const double margin = std::min(lo - config.u_range_lo, config.u_range_hi - hi);
        summary.checks["u_range"] = {margin >= 0.0, margin};
    }

    if (config.check_gradient_identity) {
        const double h_phys = max_physical_spacing(*setup.grid);
        double margin = 1e300;
        for (std::size_t k = 0; k < rr.states.size(); ++k) {
            const SurfaceGeometry g =
                graph_geometry(setup.chart, rr.states[k], setup.diag.diag_frame);
            const double res = gradient_identity_residual(g);
            const double kap = rr.records[k].sup_kappa;
            const double gate =
                config.gradient_identity_scale * (1.0 + kap * kap) * h_phys * h_phys;
            margin = std::min(margin, gate - res);
        }
        summary.checks["gradient_identity"] = {margin >= 0.0 && margin < 1e300,
                                               margin < 1e300 ? margin : -1.0};
    }

    if (config.snapshot_every > 0) {
        for (std::size_t k = 0; k < rr.states.size(); k += std::size_t(config.snapshot_every))
            write_snapshot(out_dir, config.name, int(k), rr.states[k]);
    }

    write_series(out_dir, config.name, rr.records);
    if (result_out) *result_out = std::move(rr);
}

void run_stationary_scenario(const ScenarioConfig& config, const std::string& out_dir,
                             RunSummary& summary) {
    ScenarioSetup setup = build_setup(config);
    NewtonReport report;
    std::vector<DiagnosticsRecord> records;
    try {
        const GraphState solved =
            stationary_solve(setup.chart, setup.initial, setup.H_field, config.newton_tol,
                             config.newton_max_iter, &report, config.newton_delta_floor);
        const SurfaceGeometry g = graph_geometry(setup.chart, solved, setup.diag.diag_frame);
        records.push_back(record_of_geometry(g, setup.H_field, setup.diag, 0.0));
        const double resid = report.residuals.empty() ? 0.0 : report.residuals.back();
        summary.sup_h_minus_h_final = resid;
        summary.checks["newton_converged"] = {resid <= config.newton_tol,
                                              config.newton_tol - resid};
        summary.checks["completed"] = {true, 0.0};
    } catch (const Error& e) {
        summary.termination = termination_of(e);
        summary.checks["completed"] = {false, -1.0};
        summary.checks["newton_converged"] = {false, -1.0};
    }
    write_series(out_dir, config.name, records);
}

void run_foliation_scenario(const ScenarioConfig& config, const std::string& out_dir,
                            RunSummary& summary) {
    FoliationInit init;
    CurvatureSupplier supplier;
    std::function<Mat(double t, std::size_t node)> exact_g, exact_A;

    if (config.foliation_case == "hyperboloid") {
        const double tau0 = config.tau0;
        const std::vector<double> radii = {0.5, 1.0, 2.0, 4.0};
        std::vector<Mat> g0;
        for (double r : radii) {
            Mat g = Mat::Zero(3, 3);
            g(0, 0) = tau0 * tau0 / (tau0 * tau0 + r * r);
            g(1, 1) = r * r;
            g(2, 2) = 0.5 * r * r;
            g0.push_back(g);
        }
        init.g0 = g0;
        for (const Mat& g : g0) init.A0.push_back(g / tau0);
        init.a0 = sup_metric_norm(init.A0, init.g0);
        init.c0 = config.foliation_c0;
        init.v0 = config.foliation_v0;
        supplier = [](double, int, const Mat& g) { return Mat::Zero(g.rows(), g.cols()).eval(); };
        exact_g = [g0, tau0](double t, std::size_t k) {
            const double f = (tau0 + t) / tau0;
            return (f * f * g0[k]).eval();
        };
        exact_A = [g0, tau0](double t, std::size_t k) {
            const double f = (tau0 + t) / tau0;
            return (f * f / (tau0 + t) * g0[k]).eval();
        };
    } else {
        const double c0 = config.foliation_c0;
        const double k = std::sqrt(c0);
        init.g0 = {Mat::Identity(1, 1)};
        init.A0 = {Mat::Zero(1, 1)};
        init.a0 = 0.0;
        init.c0 = c0;
        init.v0 = config.foliation_v0;
        supplier = [c0](double, int, const Mat& g) { return (c0 * g).eval(); };
        exact_g = [k](double t, std::size_t) {
            return (std::cosh(k * t) * std::cosh(k * t) * Mat::Identity(1, 1)).eval();
        };
        exact_A = [k](double t, std::size_t) {
            return (k * std::cosh(k * t) * std::sinh(k * t) * Mat::Identity(1, 1)).eval();
        };
    }

    try {
        const FoliationSeries series =
            integrate_foliation(init, supplier, config.foliation_t_end, config.foliation_dt, 10,
                                config.foliation_override_window, config.window_constant);
        double rel_err = 0.0;
        for (std::size_t si = 0; si < series.t.size(); ++si) {
            for (std::size_t k = 0; k < series.g[si].size(); ++k) {
                const Mat ge = exact_g(series.t[si], k);
                const Mat Ae = exact_A(series.t[si], k);
                const double scale_g = ge.cwiseAbs().maxCoeff();
                const double scale_A = std::max(Ae.cwiseAbs().maxCoeff(), 1e-30);
                rel_err = std::max(rel_err,
                                   (series.g[si][k] - ge).cwiseAbs().maxCoeff() / scale_g);
                rel_err = std::max(rel_err,
                                   (series.A[si][k] - Ae).cwiseAbs().maxCoeff() / scale_A);
            }
        }
        summary.checks["closed_form"] = {rel_err <= 1e-8, 1e-8 - rel_err};

        const FoliationBoundsReport bounds = foliation_bounds_check(series);
        const double margin = std::min(
            {bounds.worst_lower_margin, bounds.worst_upper_margin, bounds.worst_A_margin});
        summary.checks["envelope"] = {bounds.all_pass, margin};
        summary.s_final = series.t.back();
        summary.checks["completed"] = {true, 0.0};
    } catch (const Error& e) {
        summary.termination = termination_of(e);
        summary.checks["completed"] = {false, -1.0};
    }
    write_series(out_dir, config.name, {});
}

void run_schwarzschild_scenario(const ScenarioConfig& config, const std::string& out_dir,
                                RunSummary& summary) {
    const ChartSpec chart = make_schwarzschild_chart(config.schw_m);
    const LstSurface surface = make_lst_surface(config.schw_tau);

    std::vector<double> H_of_x;
    for (double x : config.schw_x) {
        const double half = 0.5 * config.schw_rel_step * double(config.schw_n_x - 1);
        const double x_lo = x * (1.0 - half);
        const double x_hi = x * (1.0 + half);
        const EmbeddingSamples samples = lst_embedding(surface, config.schw_n_theta,
                                                       config.schw_n_phi, x_lo, x_hi,
                                                       config.schw_n_x);
        const EmbeddedGeometry eg = embedding_geometry(chart, samples.grid, samples.map);
        // Mid-theta, first phi, centered x shell; interior by construction.
        const std::vector<Eigen::Index> idx = {Eigen::Index(config.schw_n_theta / 2), 0,
                                               Eigen::Index(config.schw_n_x / 2)};
        const Eigen::Index flat = samples.grid.flatten(idx);
        if (!eg.interior[std::size_t(flat)])
            throw Error("schwarzschild expansion: centered shell is not interior");
        H_of_x.push_back(eg.H[flat]);
    }

    // Least-squares fit H(x) = H0 + C x^2.
    const std::size_t m = H_of_x.size();
    double s1 = double(m), sx2 = 0.0, sx4 = 0.0, sH = 0.0, sx2H = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double x2 = config.schw_x[i] * config.schw_x[i];
        sx2 += x2;
        sx4 += x2 * x2;
        sH += H_of_x[i];
        sx2H += x2 * H_of_x[i];
    }
    const double det = s1 * sx4 - sx2 * sx2;
    const double H0 = (sH * sx4 - sx2 * sx2H) / det;

    const double n_surface = 3.0;
    const double oracle = n_surface / config.schw_tau;
    summary.sup_h_minus_h_final = std::abs(H0 - oracle);
    summary.checks["h0_match"] = {std::abs(H0 - oracle) <= 1e-3, 1e-3 - std::abs(H0 - oracle)};

    double ratio_margin = 1e300;
    bool ratios_ok = m >= 2;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double e_coarse = std::abs(H_of_x[i] - H0);
        const double e_fine = std::abs(H_of_x[i + 1] - H0);
        const double ratio = e_fine > 0.0 ? e_coarse / e_fine : 1e300;
        ratios_ok = ratios_ok && ratio >= 3.2 && ratio <= 4.8;
        ratio_margin = std::min({ratio_margin, ratio - 3.2, 4.8 - ratio});
    }
    summary.checks["richardson"] = {ratios_ok, ratio_margin};
    summary.checks["completed"] = {true, 0.0};
    write_series(out_dir, config.name, {});
}

void run_verify_scenario(const ScenarioConfig& config, const std::string& out_dir,
                         RunSummary& summary) {
    const std::vector<VerifyResult> results = verify_suite(config.verify_filter);
    for (const auto& res : results) summary.checks[res.name] = {res.pass, res.margin};
    summary.checks["completed"] = {true, 0.0};
    write_series(out_dir, config.name, {});
}

} // namespace

// --- public API --------------------------------------------------------------

ScenarioConfig parse_config(const std::string& path) {
    return from_document(toml::Document::parse_file(path));
}

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin) {
    return from_document(toml::Document::parse_string(text, origin));
}

std::vector<std::string> preset_names() {
    return {"mink-stationary-n1-tau05", "mink-stationary-n1-tau2", "mink-stationary-n3-tau05",
            "mink-stationary-n3-tau2", "mink-selfsim-n1", "mink-selfsim-n2",
            "mink-perturbed-cmc", "mink-example-H", "mink-pinched-barrier", "mink-dual-cmc",
            "folia-hyperboloid", "folia-tanh", "schw-expansion"};
}

ScenarioConfig preset(const std::string& name) {
    if (name == "mink-stationary-n1-tau05") return stationary_preset(1, 0.5);
    if (name == "mink-stationary-n1-tau2") return stationary_preset(1, 2.0);
    if (name == "mink-stationary-n3-tau05") return stationary_preset(3, 0.5);
    if (name == "mink-stationary-n3-tau2") return stationary_preset(3, 2.0);
    if (name == "mink-selfsim-n1") return selfsim_preset(1);
    if (name == "mink-selfsim-n2") return selfsim_preset(2);
    if (name == "mink-perturbed-cmc") return perturbed_cmc_preset();
    if (name == "mink-example-H") return example_h_preset();
    if (name == "mink-pinched-barrier") return pinched_barrier_preset();
    if (name == "mink-dual-cmc") return dual_cmc_preset();
    if (name == "folia-hyperboloid") return foliation_preset("hyperboloid");
    if (name == "folia-tanh") return foliation_preset("tanh");
    if (name == "schw-expansion") return schw_expansion_preset();
    throw ValidationError("unknown preset '" + name + "'");
}

ScenarioSetup build_setup(const ScenarioConfig& config) {
    validate(config);
    ScenarioSetup setup;

    if (config.chart == "minkowski")
        setup.chart = make_minkowski_sync_chart(config.dim);
    else
        setup.chart = make_milne_sync_chart(config.dim, config.milne_tau0);

    std::shared_ptr<SpatialGrid> grid;
    if (config.topology == "radial") {
        if (config.stretch == "sinh")
            grid = std::make_shared<SpatialGrid>(SpatialGrid::radial_sinh(
                config.dim, config.nodes, config.r_max, config.stretch_scale));
        else if (config.stretch == "sinh-axis")
            // Axis dilation sqrt(n) equalizes the per-node CFL bound between
            // the origin row (diffusion coefficient ~ n) and the interior.
            grid = std::make_shared<SpatialGrid>(
                SpatialGrid::radial_sinh_axis(config.dim, config.nodes, config.r_max,
                                              config.stretch_scale, std::sqrt(config.dim)));
        else
            grid = std::make_shared<SpatialGrid>(
                SpatialGrid::radial_uniform(config.dim, config.nodes, config.r_max));
    } else {
        grid = std::make_shared<SpatialGrid>(SpatialGrid::box(
            config.nodes, config.x_min, config.r_max, config.topology == "box-periodic"));
    }
    setup.grid = grid;

    GraphState initial;
    initial.grid = setup.grid;
    initial.s = 0.0;
    if (config.initial == "hyperboloid") {
        initial.w = (grid->r * grid->r + config.tau0 * config.tau0).sqrt();
    } else {
        initial.w = Eigen::ArrayXd::Constant(grid->nodes, config.initial_constant);
    }
    if (config.bump_amplitude != 0.0) {
        for (Eigen::Index i = 0; i < grid->nodes; ++i) {
            const double d = grid->r[i] - config.bump_center;
            if (std::abs(d) <= 6.0 * config.bump_width)
                initial.w[i] +=
                    config.bump_amplitude * std::exp(-(d * d) / (config.bump_width * config.bump_width));
        }
    }
    setup.initial = initial;

    if (config.h_kind == "constant")
        setup.H_field = make_constant_h(config.h_value, config.dim);
    else if (config.h_kind == "cmc")
        setup.H_field = make_constant_h(double(config.dim) / config.tau0, config.dim);
    else if (config.h_kind == "example")
        setup.H_field = make_example_prescribed_h(config.dim);
    else
        setup.H_field = make_zero_h(config.dim);

    setup.flow = config.flow;
    if (setup.flow.boundary == FlowConfig::Boundary::pin_profile) {
        const double tau0 = config.tau0;
        const double n = double(config.dim);
        setup.flow.boundary_profile = [tau0, n](double r, double s) {
            return std::sqrt(tau0 * tau0 + 2.0 * n * s + r * r);
        };
    }

    setup.diag.lambda = config.lambda;
    setup.diag.mu = config.mu;
    setup.diag.keep_states = true;
    setup.diag.ricci_normal = 0.0;  // both built-in charts are flat
    if (config.frame == "hyperboloid")
        setup.diag.diag_frame = make_hyperboloid_frame(config.dim).time_function;
    if (config.barrier_enabled) {
        const double t1 = config.barrier_lower, t2 = config.barrier_upper;
        if (config.frame == "hyperboloid") {
            setup.diag.barrier.lower = [t1](double) { return t1; };
            setup.diag.barrier.upper = [t2](double) { return t2; };
        } else {
            setup.diag.barrier.lower = [t1](double r) { return std::sqrt(t1 * t1 + r * r); };
            setup.diag.barrier.upper = [t2](double r) { return std::sqrt(t2 * t2 + r * r); };
        }
        setup.diag.barrier.fatal = config.barrier_fatal;
    }
    setup.diag.height_window_enabled = config.height_window_enabled;
    setup.diag.tau_minus = config.tau_minus;
    setup.diag.tau_plus = config.tau_plus;

    // A flow run must start well inside the spacelike cone (its CFL control
    // assumes q >= delta_floor); a Newton solve only needs the seed strictly
    // spacelike, so it is guarded by its own, much smaller floor.
    const double q_floor = config.kind == ScenarioKind::stationary_solve
                               ? config.newton_delta_floor
                               : setup.flow.delta_floor;
    const double q0 = spacelike_margin(setup.chart, setup.initial);
    if (q0 <= q_floor) {
        std::ostringstream os;
        os << "initial data is not spacelike enough: q_min = " << q0 << " <= delta_floor = "
           << q_floor;
        throw SpacelikeViolation(os.str());
    }
    return setup;
}

RunSummary run_scenario(const ScenarioConfig& config, const std::string& out_dir,
                        RunResult* result_out) {
    const auto t0 = std::chrono::steady_clock::now();
    std::filesystem::create_directories(out_dir);

    RunSummary summary;
    summary.name = config.name;

    switch (config.kind) {
        case ScenarioKind::flow:
            try {
                run_flow_scenario(config, out_dir, summary, result_out);
            } catch (const Error& e) {
                summary.termination = termination_of(e);
                summary.checks["completed"] = {false, -1.0};
                write_series(out_dir, config.name, {});
            }
            break;
        case ScenarioKind::stationary_solve:
            run_stationary_scenario(config, out_dir, summary);
            break;
        case ScenarioKind::foliation:
            run_foliation_scenario(config, out_dir, summary);
            break;
        case ScenarioKind::schwarzschild_expansion:
            run_schwarzschild_scenario(config, out_dir, summary);
            break;
        case ScenarioKind::verify:
            run_verify_scenario(config, out_dir, summary);
            break;
    }

    summary.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_summary(out_dir, summary);
    return summary;
}

std::string summary_to_json(const RunSummary& summary) {
    ordered_json j;
    j["name"] = summary.name;
    j["termination"] = summary.termination;
    j["s_final"] = summary.s_final;
    j["sup_h_minus_h_final"] = summary.sup_h_minus_h_final;
    if (summary.decay_rate)
        j["decay_rate"] = *summary.decay_rate;
    else
        j["decay_rate"] = nullptr;
    ordered_json checks = ordered_json::object();
    for (const auto& [name, c] : summary.checks) {
        checks[name] = {{"pass", c.pass}, {"margin", c.margin}};
    }
    j["checks"] = checks;
    j["wall_time_seconds"] = summary.wall_time_seconds;
    return j.dump(2);
}

} // namespace pmcf
