#include <cmath>
#include <memory>

#include "doctest.h"
#include "pmcf/flow.hpp"
#include "pmcf/spacetimes.hpp"

using namespace pmcf;

namespace {

std::shared_ptr<SpatialGrid> radial(int n, Eigen::Index nodes, double r_max) {
    return std::make_shared<SpatialGrid>(SpatialGrid::radial_uniform(n, nodes, r_max));
}

GraphState flat_box_state(Eigen::Index nodes, double half_width) {
    GraphState st;
    st.grid = std::make_shared<SpatialGrid>(
        SpatialGrid::box(nodes, -half_width, half_width, false));
    st.w = Eigen::ArrayXd::Zero(st.grid->nodes);
    return st;
}

} // namespace

TEST_CASE("flow velocity of a hyperboloid equals sqrt(q) H pointwise") {
    // n = 2, tau0 = 1.5, r = 2: q = 0.36, H = 4/3, so v = 0.6 * 4/3 = 0.8.
    const SyncChart chart = make_minkowski_sync_chart(2);
    auto grid = radial(2, 401, 4.0);
    const GraphState st = hyperboloid_profile(1.5, grid);
    const Eigen::ArrayXd v = flow_velocity(chart, st, make_zero_h(2));
    const Eigen::Index i = 200;  // r = 2 exactly on this uniform grid
    REQUIRE(grid->r[i] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(v[i] == doctest::Approx(0.8).epsilon(5e-3));
}

TEST_CASE("one Euler step of a flat slice under constant prescribed curvature is exact") {
    GraphState st = flat_box_state(101, 1.0);
    FlowConfig cfg;
    cfg.integrator = FlowConfig::Integrator::euler;
    cfg.dt_override = 1e-3;
    const double c = 0.37;
    const GraphState next = step(make_minkowski_sync_chart(1), st, make_constant_h(c, 1), cfg);
    CHECK(next.s == doctest::Approx(1e-3).epsilon(1e-15));
    // v = sqrt(1)(0 - c) = -c at every node; pinned ends snap back to zero.
    CHECK(next.w[0] == 0.0);
    CHECK(next.w[next.w.size() - 1] == 0.0);
    for (Eigen::Index i = 1; i + 1 < next.w.size(); ++i)
        CHECK(next.w[i] == -c * 1e-3);  // bitwise: 0 + dt*(-c)
}

TEST_CASE("integrator accuracy ordering: euler << rk2 << rk4 in time") {
    // Periodic box: no boundary layer, so the comparison is purely temporal.
    const SyncChart chart = make_minkowski_sync_chart(1);
    const PrescribedCurvatureField h_one = make_constant_h(0.8, 1);
    auto grid = std::make_shared<SpatialGrid>(SpatialGrid::box(64, -1.0, 1.0, true));
    GraphState init;
    init.grid = grid;
    init.w = 0.15 * (M_PI * grid->r).sin();
    const double s_end = 0.05;

    auto final_w = [&](FlowConfig::Integrator integ, double dt) {
        FlowConfig cfg;
        cfg.integrator = integ;
        cfg.dt_override = dt;
        cfg.s_end = s_end;
        cfg.record_every = 1 << 30;
        DiagnosticsConfig diag;
        diag.keep_states = false;
        const RunResult rr = run_flow(chart, init, h_one, cfg, diag);
        REQUIRE(rr.termination == "completed");
        return rr.final_state.w;
    };

    const Eigen::ArrayXd ref = final_w(FlowConfig::Integrator::rk4, 2.5e-6);
    const double e_euler = (final_w(FlowConfig::Integrator::euler, 1e-4) - ref).abs().maxCoeff();
    const double e_rk2 = (final_w(FlowConfig::Integrator::rk2, 1e-4) - ref).abs().maxCoeff();
    const double e_rk4 = (final_w(FlowConfig::Integrator::rk4, 1e-4) - ref).abs().maxCoeff();
    CHECK(e_euler > 10.0 * e_rk2);
    CHECK(e_rk2 > 3.0 * e_rk4);
    CHECK(e_euler < 1e-3);
}

TEST_CASE("zero prescribed curvature tracks the exact expanding hyperboloid") {
    // For n = 1 the solution w = sqrt(1 + 2s + r^2) is exact.
    const SyncChart chart = make_minkowski_sync_chart(1);
    auto grid = radial(1, 129, 3.0);
    const GraphState init = hyperboloid_profile(1.0, grid);
    FlowConfig cfg;
    cfg.s_end = 0.2;
    cfg.boundary = FlowConfig::Boundary::pin_profile;
    cfg.boundary_profile = [](double r, double s) { return std::sqrt(1.0 + 2.0 * s + r * r); };
    cfg.record_every = 1 << 30;
    DiagnosticsConfig diag;
    diag.keep_states = false;
    const RunResult rr = run_flow(chart, init, make_zero_h(1), cfg, diag);
    REQUIRE(rr.termination == "completed");
    const double h = grid->r[1] - grid->r[0];
    const Eigen::ArrayXd exact = (1.0 + 2.0 * rr.final_state.s + grid->r * grid->r).sqrt();
    CHECK((rr.final_state.w - exact).abs().maxCoeff() < 10.0 * h * h);
    CHECK(rr.final_state.s == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("linearized coefficients match a directional derivative of the velocity") {
    const SyncChart chart = make_minkowski_sync_chart(2);
    auto grid = radial(2, 201, 2.0);
    GraphState st = hyperboloid_profile(1.5, grid);
    const PrescribedCurvatureField hcal = make_constant_h(0.7, 2);

    const LinearizedCoefficients lc = linearized_coefficients(chart, st, hcal);
    const Eigen::ArrayXd phi = (-(grid->r * grid->r)).exp();
    const Eigen::ArrayXd lhs = apply_linearized(*grid, lc, phi);  // -a phi'' + b phi' + c phi

    const double eps = 1e-5;
    GraphState plus = st, minus = st;
    plus.w += eps * phi;
    minus.w -= eps * phi;
    const Eigen::ArrayXd dv =
        (flow_velocity(chart, plus, hcal) - flow_velocity(chart, minus, hcal)) / (2.0 * eps);

    // Directional derivative of the velocity is minus the linearized operator.
    // The coefficients are evaluated analytically at nodes while the discrete
    // Jacobian carries stencil values of w, so the match is O(h^2), not exact.
    const double h = grid->r[1] - grid->r[0];
    double worst = 0.0;
    for (Eigen::Index i = 1; i + 1 < grid->nodes; ++i)
        worst = std::max(worst, std::abs(dv[i] + lhs[i]));
    CHECK(worst < 0.1 * h * h);
}

TEST_CASE("cfl step size honors the stability ratio on a sinh grid") {
    // Hyperboloid data on the matching sinh grid has a/J^2 = 1 at s = 0, so
    // the first dt is cfl * h_xi^2 and dt can only grow as the slice expands.
    const SyncChart chart = make_minkowski_sync_chart(1);
    auto grid = std::make_shared<SpatialGrid>(SpatialGrid::radial_sinh(1, 129, 4.0, 1.0));
    const GraphState init = hyperboloid_profile(1.0, grid);
    FlowConfig cfg;
    cfg.cfl = 0.2;
    cfg.s_end = 0.01;
    cfg.record_every = 1 << 30;
    DiagnosticsConfig diag;
    diag.keep_states = false;
    const RunResult rr = run_flow(chart, init, make_zero_h(1), cfg, diag);
    REQUIRE(rr.termination == "completed");
    const double dt0 = 0.2 * grid->h * grid->h;
    const auto upper = static_cast<long long>(std::ceil(cfg.s_end / dt0)) + 1;
    CHECK(rr.steps <= upper);
    CHECK(rr.steps >= upper / 2);
}

TEST_CASE("newton stationary solver: exact seed converges immediately, bump in few steps") {
    const SyncChart chart = make_minkowski_sync_chart(1);
    auto grid = std::make_shared<SpatialGrid>(SpatialGrid::radial_sinh(1, 257, 10.0, 1.0));
    const PrescribedCurvatureField h_one = make_constant_h(1.0, 1);

    NewtonReport rep;
    const GraphState exact_seed = hyperboloid_profile(1.0, grid);
    const GraphState sol = stationary_solve(chart, exact_seed, h_one, 1e-9, 12, &rep);
    CHECK(rep.iterations <= 3);
    REQUIRE(!rep.residuals.empty());
    CHECK(rep.residuals.back() <= 1e-9);
    // The discrete stationary profile stays near the exact hyperboloid.
    CHECK((sol.w - exact_seed.w).abs().maxCoeff() < 1e-3);

    GraphState bumped = exact_seed;
    bumped.w += 0.05 * (-(grid->r * grid->r)).exp();
    NewtonReport rep2;
    stationary_solve(chart, bumped, h_one, 1e-9, 12, &rep2);
    CHECK(rep2.iterations <= 8);
    CHECK(rep2.residuals.back() <= 1e-9);
    // Quadratic tail: successive residuals fall faster than a fixed factor.
    const auto& res = rep2.residuals;
    if (res.size() >= 3) {
        const double a = res[res.size() - 3], b = res[res.size() - 2], c = res[res.size() - 1];
        if (a > 1e-13 && b > 1e-13 && c > 0.0) CHECK(c / b < 0.5 * b / a + 1e-6);
    }
}

TEST_CASE("newton throws NoConvergence when the tolerance is unreachable") {
    const SyncChart chart = make_minkowski_sync_chart(1);
    auto grid = radial(1, 65, 2.0);
    const GraphState seed = hyperboloid_profile(1.0, grid);
    NewtonReport rep;
    CHECK_THROWS_AS(stationary_solve(chart, seed, make_constant_h(1.0, 1), 0.0, 2, &rep),
                    NoConvergence);
}

TEST_CASE("step with an underflowed dt throws StepTooSmall") {
    GraphState st = flat_box_state(33, 1.0);
    FlowConfig cfg;
    cfg.dt_override = 1e-15;
    CHECK_THROWS_AS(step(make_minkowski_sync_chart(1), st, make_zero_h(1), cfg), StepTooSmall);
}

TEST_CASE("run terminates with max_steps when the budget is exhausted") {
    const SyncChart chart = make_minkowski_sync_chart(1);
    auto grid = radial(1, 65, 2.0);
    FlowConfig cfg;
    cfg.s_end = 100.0;
    cfg.max_steps = 3;
    cfg.record_every = 1 << 30;
    DiagnosticsConfig diag;
    diag.keep_states = false;
    const RunResult rr = run_flow(chart, hyperboloid_profile(1.0, grid), make_zero_h(1), cfg, diag);
    CHECK(rr.termination == "max_steps");
    CHECK(rr.steps == 3);
}

TEST_CASE("run terminates with spacelike_violation when the slice steepens past the floor") {
    const SyncChart chart = make_minkowski_sync_chart(1);
    auto grid = radial(1, 65, 2.0);
    FlowConfig cfg;
    cfg.s_end = 5.0;
    cfg.delta_floor = 0.05;
    cfg.record_every = 1 << 30;
    DiagnosticsConfig diag;
    diag.keep_states = false;
    // Prescribed curvature far above H drives the slice toward the light cone.
    const RunResult rr =
        run_flow(chart, hyperboloid_profile(0.5, grid), make_constant_h(10.0, 1), cfg, diag);
    CHECK(rr.termination == "spacelike_violation");
    CHECK(rr.final_state.s < 5.0);
}

TEST_CASE("fatal barrier stops the run with barrier_violation") {
    const SyncChart chart = make_minkowski_sync_chart(1);
    auto grid = radial(1, 65, 2.0);
    const GraphState init = hyperboloid_profile(1.0, grid);
    FlowConfig cfg;
    cfg.s_end = 1.0;
    cfg.record_every = 1;
    DiagnosticsConfig diag;
    diag.keep_states = false;
    diag.barrier.upper = [](double r) { return std::sqrt(1.0 + r * r) - 0.1; };
    diag.barrier.fatal = true;
    const RunResult rr = run_flow(chart, init, make_zero_h(1), cfg, diag);
    CHECK(rr.termination == "barrier_violation");
}

TEST_CASE("height window termination reports height_escape") {
    const SyncChart chart = make_minkowski_sync_chart(1);
    GraphState st = flat_box_state(101, 1.0);
    FlowConfig cfg;
    cfg.s_end = 0.5;
    cfg.record_every = 1;
    DiagnosticsConfig diag;
    diag.keep_states = false;
    diag.height_window_enabled = true;
    diag.tau_minus = -0.5;
    diag.tau_plus = 0.04;
    // Hcal = -1 pushes the flat slice upward at unit speed.
    const RunResult rr = run_flow(chart, st, make_constant_h(-1.0, 1), cfg, diag);
    CHECK(rr.termination == "height_escape");
    CHECK(rr.final_state.s < 0.5);
    CHECK(rr.final_state.w.maxCoeff() > 0.04);
}

TEST_CASE("record_ds lands records on exact multiples of the interval") {
    const SyncChart chart = make_minkowski_sync_chart(1);
    auto grid = radial(1, 65, 2.0);
    FlowConfig cfg;
    cfg.s_end = 0.05;
    cfg.record_ds = 0.01;
    const RunResult rr =
        run_flow(chart, hyperboloid_profile(1.0, grid), make_zero_h(1), cfg, DiagnosticsConfig{});
    REQUIRE(rr.termination == "completed");
    REQUIRE(rr.records.size() == 6);
    for (std::size_t k = 0; k < rr.records.size(); ++k)
        CHECK(rr.records[k].s == doctest::Approx(0.01 * double(k)).epsilon(1e-9));
    REQUIRE(rr.states.size() == rr.records.size());
}

TEST_CASE("past orientation against negated curvature mirrors the future flow") {
    const SyncChart chart = make_minkowski_sync_chart(1);
    auto grid = radial(1, 65, 2.0);
    const GraphState init = hyperboloid_profile(1.0, grid);
    FlowConfig fut;
    fut.integrator = FlowConfig::Integrator::rk2;
    fut.dt_override = 1e-4;
    FlowConfig past = fut;
    past.orientation = FlowConfig::Orientation::past;
    const GraphState a = step(chart, init, make_constant_h(0.7, 1), fut);
    const GraphState b = step(chart, init, make_constant_h(-0.7, 1), past);
    CHECK((a.w - b.w).abs().maxCoeff() == 0.0);
}
