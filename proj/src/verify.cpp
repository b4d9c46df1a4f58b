// Registry of deterministic invariant checks behind `pmcflow verify`.
// Each check is self-contained, fast, and reports a measured margin
// (positive clearance in the check's own units).
#include "pmcf/verify.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "pmcf/diagnostics.hpp"
#include "pmcf/embedding.hpp"
#include "pmcf/foliation.hpp"
#include "pmcf/scenario.hpp"
#include "pmcf/spacetimes.hpp"
#include "pmcf/toml.hpp"

namespace pmcf {

namespace {

constexpr unsigned kSeed = 0x5EED;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

VerifyResult make_result(const std::string& name, double margin, const std::string& detail) {
    VerifyResult r;
    r.name = name;
    r.pass = margin >= 0.0;
    r.margin = margin;
    r.detail = detail;
    return r;
}

Vec random_future_unit(std::mt19937& rng, int dim, double max_rapidity) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double chi = max_rapidity * uni(rng);
    Vec dir = Vec::Zero(dim - 1);
    for (int i = 0; i < dim - 1; ++i) dir[i] = gauss(rng);
    const double norm = dir.norm();
    if (norm > 0.0) dir /= norm;
    Vec T(dim);
    T[0] = std::cosh(chi);
    T.tail(dim - 1) = std::sinh(chi) * dir;
    return T;
}

// --- individual checks ------------------------------------------------------

VerifyResult check_metric_compatibility() {
    // nabla G = 0: d_a G_bc = Gamma^d_{ab} G_dc + Gamma^d_{ac} G_bd, checked
    // with independent central differences on the Milne chart.
    const SyncChart milne = make_milne_sync_chart(3, 1.0);
    const ChartSpec& chart = milne.full;
    Vec p(4);
    p << 0.3, 0.7, 0.2, -0.4;
    const Tensor3 Gamma = christoffel_at(chart, p);
    const double eps = 1e-6;
    double worst = 0.0;
    for (int a = 0; a < 4; ++a) {
        Vec pp = p, pm = p;
        pp[a] += eps;
        pm[a] -= eps;
        const Mat dG = (metric_at(chart, pp) - metric_at(chart, pm)) / (2.0 * eps);
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c) {
                double covariant = dG(b, c);
                const Mat G = metric_at(chart, p);
                for (int d = 0; d < 4; ++d)
                    covariant -= Gamma(d, a, b) * G(d, c) + Gamma(d, a, c) * G(b, d);
                worst = std::max(worst, std::abs(covariant));
            }
    }
    const double tol = 1e-7;  // FD of the metric is the limiting accuracy
    return make_result("metric-compatibility-milne", tol - worst,
                       "max |nabla G| = " + fmt(worst));
}

VerifyResult check_riemann_symmetries() {
    const ChartSpec chart = make_schwarzschild_chart(1.0);
    Vec p(4);
    p << 1.1, 0.4, 0.2, 0.5;  // (theta, phi, x, v)
    const Tensor4 R = riemann_at(chart, p);
    double worst = 0.0;
    const int d = 4;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                for (int e = 0; e < d; ++e) {
                    worst = std::max(worst, std::abs(R(a, b, c, e) + R(b, a, c, e)));
                    worst = std::max(worst, std::abs(R(a, b, c, e) + R(a, b, e, c)));
                    worst = std::max(worst, std::abs(R(a, b, c, e) - R(c, e, a, b)));
                    // first Bianchi in the last three slots
                    worst = std::max(worst, std::abs(R(a, b, c, e) + R(a, c, e, b) +
                                                     R(a, e, b, c)));
                }
    const double scale = std::max(R.max_abs(), 1.0);
    const double tol = 1e-9 * scale;
    return make_result("riemann-symmetries-schwarzschild", tol - worst,
                       "max symmetry defect = " + fmt(worst));
}

VerifyResult check_ricci_flat() {
    const ChartSpec chart = make_schwarzschild_chart(1.0);
    Vec p(4);
    p << 1.1, 0.4, 0.2, 0.5;
    const Mat G = metric_at(chart, p);
    const Mat ric = ricci_from_riemann(G, riemann_at(chart, p));
    const double worst = ric.cwiseAbs().maxCoeff();
    const double tol = 1e-8;
    return make_result("ricci-flat-schwarzschild", tol - worst, "max |Ric| = " + fmt(worst));
}

VerifyResult check_kretschmann() {
    const double m = 1.0, x = 0.1;
    const ChartSpec chart = make_schwarzschild_chart(m);
    Vec p(4);
    p << 1.2, 0.3, x, 0.7;
    const double K = kretschmann_scalar(metric_at(chart, p), riemann_at(chart, p));
    const double exact = 48.0 * m * m * std::pow(x, 6);
    const double err = std::abs(K - exact) / exact;
    const double tol = 1e-8;
    return make_result("kretschmann-schwarzschild", tol - err,
                       "K = " + fmt(K) + ", exact = " + fmt(exact));
}

VerifyResult check_tilt_equivalence() {
    // |||w|||^2 wrt G_E' <= 4 v^2 |||w|||^2 wrt G_E for frames with tilt v.
    const ChartSpec chart = make_minkowski_chart(3);
    Vec p = Vec::Zero(4);
    const Mat G = metric_at(chart, p);
    std::mt19937 rng(kSeed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double min_clearance = 1e300;
    int violations = 0;
    const int samples = 10000;
    for (int k = 0; k < samples; ++k) {
        const Vec T = random_future_unit(rng, 4, 2.5);
        const Vec Tp = random_future_unit(rng, 4, 2.5);
        const ReferenceFrame F = make_reference_frame(chart, p, T);
        const ReferenceFrame Fp = make_reference_frame(chart, p, Tp);
        const double v = tilt_factor(G, T, Tp);
        Vec w(4);
        for (int i = 0; i < 4; ++i) w[i] = gauss(rng);
        const double n1 = reference_norm(F, w);
        const double n2 = reference_norm(Fp, w);
        const double clearance = (4.0 * v * v * n1 * n1 - n2 * n2) / (4.0 * v * v * n1 * n1);
        min_clearance = std::min(min_clearance, clearance);
        if (clearance < 0.0) ++violations;
    }
    std::ostringstream os;
    os << violations << " violations in " << samples << " samples, min clearance "
       << fmt(min_clearance);
    return make_result("tilt-equivalence-random", min_clearance, os.str());
}

VerifyResult check_umbilic_hyperboloid() {
    const double tau0 = 1.0;
    const SyncChart chart = make_minkowski_sync_chart(2);
    auto grid = std::make_shared<SpatialGrid>(SpatialGrid::radial_uniform(2, 257, 4.0));
    const GraphState state = hyperboloid_profile(tau0, grid);
    const SurfaceGeometry g = graph_geometry(chart, state);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < grid->nodes; ++i) {
        worst = std::max(worst, std::abs(g.A_rr[i] - g.gamma_rr[i] / tau0));
        if (i > 0) worst = std::max(worst, std::abs(g.A_ang[i] - g.gamma_ang[i] / tau0));
        worst = std::max(worst, std::abs(g.H[i] - 2.0 / tau0));
    }
    const double h = grid->r[1] - grid->r[0];
    const double tol = 50.0 * h * h;
    return make_result("umbilic-hyperboloid", tol - worst,
                       "max umbilicity defect = " + fmt(worst) + " (gate " + fmt(tol) + ")");
}

VerifyResult check_milne_cmc() {
    const int n = 3;
    const double tau0 = 2.0;
    const SyncChart chart = make_milne_sync_chart(n, tau0);
    auto grid = std::make_shared<SpatialGrid>(SpatialGrid::radial_uniform(n, 129, 3.0));
    GraphState state;
    state.grid = grid;
    state.w = Eigen::ArrayXd::Zero(grid->nodes);
    const SurfaceGeometry g = graph_geometry(chart, state);
    const double worst = (g.H - double(n) / tau0).abs().maxCoeff();
    const double tol = 1e-11;
    return make_result("milne-slice-cmc", tol - worst,
                       "max |H - n/tau0| = " + fmt(worst));
}

VerifyResult check_graph_vs_embedding() {
    // Independent H pipelines on a non-trivial Minkowski graph.
    const int n = 2;
    const SyncChart sync = make_minkowski_sync_chart(n);
    auto grid = std::make_shared<SpatialGrid>(SpatialGrid::radial_uniform(n, 321, 3.0));
    GraphState state;
    state.grid = grid;
    state.w = (grid->r * grid->r + 1.0).sqrt() + 0.05 * (-(grid->r * grid->r)).exp();
    state.s = 0.0;
    const SurfaceGeometry gg = graph_geometry(sync, state);

    const ChartSpec full = make_minkowski_chart(n);
    // Embed as (t, x, y) = (w(r), r cos phi, r sin phi) over (r, phi).
    Eigen::ArrayXd r_axis = grid->r;
    Eigen::ArrayXd phi_axis = Eigen::ArrayXd::LinSpaced(64, 0.0, 2.0 * M_PI * 63.0 / 64.0);
    ParameterGrid pgrid = ParameterGrid::product({r_axis, phi_axis}, {false, true});
    const auto w_copy = state.w;
    const double h = grid->r[1] - grid->r[0];
    EmbeddingMap map = [w_copy, h](const Vec& prm) {
        const double r = prm[0], phi = prm[1];
        const Eigen::Index i = Eigen::Index(std::lround(r / h));
        Vec out(3);
        out[0] = w_copy[i];
        out[1] = r * std::cos(phi);
        out[2] = r * std::sin(phi);
        return out;
    };
    const EmbeddedGeometry eg = embedding_geometry(full, pgrid, map);
    double worst = 0.0;
    for (Eigen::Index i = 2; i + 2 < grid->nodes; ++i) {
        const Eigen::Index flat = pgrid.flatten({i, 0});
        if (!eg.interior[std::size_t(flat)]) continue;
        worst = std::max(worst, std::abs(eg.H[flat] - gg.H[i]));
    }
    const double tol = 200.0 * h * h;
    return make_result("graph-vs-embedding-minkowski", tol - worst,
                       "max |H_graph - H_embed| = " + fmt(worst) + " (gate " + fmt(tol) + ")");
}

VerifyResult check_foliation_closed_form() {
    FoliationInit init;
    init.g0 = {Mat::Identity(2, 2)};
    init.A0 = {0.5 * Mat::Identity(2, 2)};
    init.a0 = sup_metric_norm(init.A0, init.g0);
    init.c0 = 0.0;
    init.v0 = 1.0;
    const double tau0 = 2.0;  // A0 = g0 / tau0
    CurvatureSupplier flat = [](double, int, const Mat& g) {
        return Mat::Zero(g.rows(), g.cols()).eval();
    };
    const FoliationSeries series = integrate_foliation(init, flat, 0.5, 1e-3, 50, false, 2.0);
    double worst = 0.0;
    for (std::size_t si = 0; si < series.t.size(); ++si) {
        const double f = (tau0 + series.t[si]) / tau0;
        const Mat exact = f * f * Mat::Identity(2, 2);
        worst = std::max(worst, (series.g[si][0] - exact).cwiseAbs().maxCoeff() /
                                    exact.cwiseAbs().maxCoeff());
    }
    const double tol = 1e-10;
    return make_result("foliation-closed-form", tol - worst, "max rel err = " + fmt(worst));
}

VerifyResult check_foliation_chart_consistency() {
    // Integrate the isotropic-curvature homogeneous case densely, rebuild a
    // synchronous chart from the series, and compare the chart's tidal matrix
    // against the supplier that generated the series.
    FoliationInit init;
    init.g0 = {Mat::Identity(1, 1)};
    init.A0 = {Mat::Zero(1, 1)};
    init.a0 = 0.0;
    init.c0 = 1.0;
    init.v0 = 1.0;
    CurvatureSupplier iso = [](double, int, const Mat& g) { return g.eval(); };
    const FoliationSeries dense = integrate_foliation(init, iso, 0.8, 1e-3, 1, false, 2.0);
    const ChartSpec chart = foliation_backed_chart(dense, {0.0});
    double worst = 0.0;
    for (double t : {0.2, 0.4, 0.6}) {
        Vec p(2);
        p << t, 0.0;
        const Mat tidal = tidal_matrix(chart, p);
        const double g_t = std::cosh(t) * std::cosh(t);
        worst = std::max(worst, std::abs(tidal(0, 0) - g_t) / g_t);
    }
    const double tol = 1e-4;  // Hermite interpolation + FD curvature
    return make_result("foliation-chart-consistency", tol - worst,
                       "max rel tidal defect = " + fmt(worst));
}

VerifyResult check_example_h_monotone() {
    const PrescribedCurvatureField field = make_example_prescribed_h(3);
    std::mt19937 rng(kSeed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    double min_pairing = 1e300;
    const int samples = 10000;
    for (int k = 0; k < samples; ++k) {
        Vec p(4);
        p << 2.0 * uni(rng), uni(rng), uni(rng), uni(rng);
        const Vec w = random_future_unit(rng, 4, 2.0);
        const Vec grad = field.grad_or_fd(p);
        const double pairing = grad.dot(w);
        min_pairing = std::min(min_pairing, pairing);
    }
    std::ostringstream os;
    os << "min <grad Hcal, w> = " << fmt(min_pairing) << " over " << samples << " samples";
    return make_result("example-h-monotone", min_pairing, os.str());
}

VerifyResult check_example_h_sup() {
    const PrescribedCurvatureField field = make_example_prescribed_h(3);
    double sup = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        const double r = 8.0 * double(i) / 4000.0;
        const double t = std::sqrt(r * r + 0.25);
        sup = std::max(sup, std::abs(field.at(t, r, 4) - 2.0));
    }
    const double bound = std::exp(-0.5);
    return make_result("example-h-sup-bound", bound - sup,
                       "sup over S_1/2 of |Hcal - 2| = " + fmt(sup) + " <= " + fmt(bound));
}

VerifyResult check_selfsim_quick() {
    ScenarioConfig cfg = preset("mink-selfsim-n1");
    cfg.nodes = 128;
    cfg.r_max = 3.0;
    cfg.flow.s_end = 0.2;
    cfg.flow.record_ds = 0.05;
    ScenarioSetup setup = build_setup(cfg);
    const RunResult rr = run_flow(setup.chart, setup.initial, setup.H_field, setup.flow,
                                  setup.diag);
    if (rr.termination != "completed")
        return make_result("selfsim-tracking", -1.0, "terminated: " + rr.termination);
    const double sf = rr.final_state.s;
    const Eigen::ArrayXd exact =
        (1.0 + 2.0 * sf + setup.grid->r * setup.grid->r).sqrt();
    const double err = (rr.final_state.w - exact).abs().maxCoeff();
    const double h = setup.grid->r[1] - setup.grid->r[0];
    const double tol = 5.0 * h * h;
    return make_result("selfsim-tracking", tol - err,
                       "max |w - exact| = " + fmt(err) + " (gate " + fmt(tol) + ")");
}

VerifyResult check_newton_quick() {
    const SyncChart chart = make_minkowski_sync_chart(1);
    auto grid = std::make_shared<SpatialGrid>(SpatialGrid::radial_sinh(1, 257, 10.0, 1.0));
    GraphState initial = hyperboloid_profile(1.0, grid);
    for (Eigen::Index i = 0; i < grid->nodes; ++i)
        initial.w[i] += 0.05 * std::exp(-grid->r[i] * grid->r[i]);
    const PrescribedCurvatureField field = make_constant_h(1.0, 1);
    NewtonReport report;
    try {
        stationary_solve(chart, initial, field, 1e-8, 12, &report, 1e-4);
    } catch (const Error& e) {
        return make_result("newton-stationary", -1.0, e.what());
    }
    const double final_resid = report.residuals.back();
    std::ostringstream os;
    os << report.iterations << " iterations, final residual " << fmt(final_resid);
    return make_result("newton-stationary", 1e-8 - final_resid, os.str());
}

VerifyResult check_dual_orientation() {
    // A past-oriented step against -Hcal must match a future step against
    // +Hcal exactly (velocity sign flip + normal reversal, shared code path).
    const SyncChart chart = make_minkowski_sync_chart(1);
    auto grid = std::make_shared<SpatialGrid>(SpatialGrid::radial_uniform(1, 65, 2.0));
    GraphState st = hyperboloid_profile(1.0, grid);
    FlowConfig fut;
    fut.integrator = FlowConfig::Integrator::rk2;
    fut.dt_override = 1e-4;
    fut.delta_floor = 1e-6;
    FlowConfig past = fut;
    past.orientation = FlowConfig::Orientation::past;
    const GraphState a = step(chart, st, make_constant_h(0.7, 1), fut);
    const GraphState b = step(chart, st, make_constant_h(-0.7, 1), past);
    const double diff = (a.w - b.w).abs().maxCoeff();
    return make_result("dual-orientation-flip", diff == 0.0 ? 1.0 : -diff,
                       "max |w_future - w_past| = " + fmt(diff));
}

VerifyResult check_csv_determinism() {
    ScenarioConfig cfg = preset("mink-selfsim-n1");
    cfg.nodes = 64;
    cfg.r_max = 2.0;
    cfg.flow.s_end = 0.05;
    cfg.flow.record_ds = 0.01;
    auto run_once = [&]() {
        ScenarioSetup setup = build_setup(cfg);
        const RunResult rr = run_flow(setup.chart, setup.initial, setup.H_field, setup.flow,
                                      setup.diag);
        std::ostringstream os;
        write_records_csv(os, rr.records);
        return os.str();
    };
    const std::string first = run_once();
    const std::string second = run_once();
    const bool same = first == second;
    return make_result("csv-determinism", same ? 1.0 : -1.0,
                       same ? "two runs produced bit-identical series"
                            : "series differ between identical runs");
}

VerifyResult check_config_validation() {
    int failures = 0;
    std::string detail;
    try {
        parse_config_text("[initial]\ntau0 = -1.0\n", "inline");
        ++failures;
        detail += "negative tau0 accepted; ";
    } catch (const ValidationError& e) {
        if (std::string(e.what()).find("tau0 must be positive") == std::string::npos) {
            ++failures;
            detail += "wrong tau0 message; ";
        }
    }
    try {
        parse_config_text("viscosity = 2\n", "inline");
        ++failures;
        detail += "unknown key accepted; ";
    } catch (const ParseError&) {
    }
    try {
        parse_config_text("[flow\ncfl = 0.2\n", "inline");
        ++failures;
        detail += "malformed header accepted; ";
    } catch (const ParseError&) {
    }
    if (detail.empty()) detail = "rejections and messages as expected";
    return make_result("config-validation", failures == 0 ? 1.0 : -double(failures), detail);
}

VerifyResult check_grid_derivative_order() {
    auto error_at = [](Eigen::Index nodes) {
        const SpatialGrid grid = SpatialGrid::radial_sinh(1, nodes, 6.0, 1.5);
        const Eigen::ArrayXd f = (0.7 * grid.r).cos();
        Eigen::ArrayXd fp, fpp;
        grid_derivatives(grid, f, fp, fpp, true);
        const Eigen::ArrayXd fp_exact = -0.7 * (0.7 * grid.r).sin();
        const Eigen::ArrayXd fpp_exact = -0.49 * (0.7 * grid.r).cos();
        double err = 0.0;
        for (Eigen::Index i = 0; i < nodes; ++i) {
            err = std::max(err, std::abs(fp[i] - fp_exact[i]));
            err = std::max(err, std::abs(fpp[i] - fpp_exact[i]));
        }
        return err;
    };
    const double c = error_at(201), f = error_at(401);
    const double ratio = c / f;
    const double margin = std::min(ratio - 3.5, 4.5 - ratio);
    return make_result("grid-derivative-order", margin, "h-halving ratio = " + fmt(ratio));
}

VerifyResult check_laplacian_quadratic() {
    const int n = 3;
    const SyncChart chart = make_minkowski_sync_chart(n);
    auto grid = std::make_shared<SpatialGrid>(SpatialGrid::radial_uniform(n, 201, 3.0));
    GraphState state;
    state.grid = grid;
    state.w = Eigen::ArrayXd::Constant(grid->nodes, 1.0);
    const SurfaceGeometry g = graph_geometry(chart, state);
    const Eigen::ArrayXd lap = surface_laplacian(g, grid->r * grid->r);
    double worst = 0.0;
    for (Eigen::Index i = 0; i + 1 < grid->nodes; ++i)
        worst = std::max(worst, std::abs(lap[i] - 2.0 * n));
    const double h = grid->r[1] - grid->r[0];
    const double tol = 100.0 * h * h + 1e-10;
    return make_result("laplacian-flat-quadratic", tol - worst,
                       "max |Lap r^2 - 2n| = " + fmt(worst));
}

VerifyResult check_lst_psi() {
    const double tau = 1.3, a = 0.8;
    const LstSurface surf = make_lst_surface_cos_theta(tau, a);
    double worst = 0.0;
    for (double theta : {0.3, 0.7, 1.1, 1.9, 2.6}) {
        const double s = std::sin(theta), c = std::cos(theta);
        const double psi_exact = -a * c * (tau * tau + a * a * s * s);
        const double phi_exact = -0.5 * (tau * tau + a * a * s * s);
        worst = std::max(worst, std::abs(surf.psi(theta) - psi_exact));
        worst = std::max(worst, std::abs(surf.phi(theta) - phi_exact));
    }
    const double tol = 1e-12;
    return make_result("lst-cut-function-values", tol - worst, "max defect = " + fmt(worst));
}

VerifyResult check_rstar() {
    double worst = std::abs(schwarzschild_rstar(1.0, 4.0) - 4.0);
    worst = std::max(worst, std::abs(schwarzschild_rstar(0.0, 7.5) - 7.5));
    const double r = 10.0, m = 1.0;
    const double exact = r + 2.0 * m * std::log(r / (2.0 * m) - 1.0);
    worst = std::max(worst, std::abs(schwarzschild_rstar(m, r) - exact));
    const double tol = 1e-12;
    return make_result("schwarzschild-rstar", tol - worst, "max defect = " + fmt(worst));
}

VerifyResult check_gradient_identity_live() {
    ScenarioConfig cfg = preset("mink-perturbed-cmc");
    cfg.nodes = 256;
    cfg.r_max = 8.0;
    cfg.flow.s_end = 0.3;
    cfg.flow.record_ds = 0.05;
    ScenarioSetup setup = build_setup(cfg);
    const RunResult rr = run_flow(setup.chart, setup.initial, setup.H_field, setup.flow,
                                  setup.diag);
    if (rr.termination != "completed")
        return make_result("gradient-identity-live", -1.0, "terminated: " + rr.termination);
    double h_phys = 0.0;
    for (Eigen::Index i = 0; i + 1 < setup.grid->nodes; ++i)
        h_phys = std::max(h_phys, setup.grid->r[i + 1] - setup.grid->r[i]);
    double margin = 1e300;
    double worst = 0.0;
    for (std::size_t k = 0; k < rr.states.size(); ++k) {
        const SurfaceGeometry g = graph_geometry(setup.chart, rr.states[k],
                                                 setup.diag.diag_frame);
        const double res = gradient_identity_residual(g);
        const double kap = rr.records[k].sup_kappa;
        const double gate = 25.0 * (1.0 + kap * kap) * h_phys * h_phys;
        margin = std::min(margin, gate - res);
        worst = std::max(worst, res);
    }
    return make_result("gradient-identity-live", margin,
                       "max residual over records = " + fmt(worst));
}

} // namespace

const std::vector<VerifyCheck>& verify_registry() {
    static const std::vector<VerifyCheck> registry = {
        {"metric-compatibility-milne", check_metric_compatibility},
        {"riemann-symmetries-schwarzschild", check_riemann_symmetries},
        {"ricci-flat-schwarzschild", check_ricci_flat},
        {"kretschmann-schwarzschild", check_kretschmann},
        {"tilt-equivalence-random", check_tilt_equivalence},
        {"umbilic-hyperboloid", check_umbilic_hyperboloid},
        {"milne-slice-cmc", check_milne_cmc},
        {"graph-vs-embedding-minkowski", check_graph_vs_embedding},
        {"foliation-closed-form", check_foliation_closed_form},
        {"foliation-chart-consistency", check_foliation_chart_consistency},
        {"example-h-monotone", check_example_h_monotone},
        {"example-h-sup-bound", check_example_h_sup},
        {"selfsim-tracking", check_selfsim_quick},
        {"newton-stationary", check_newton_quick},
        {"dual-orientation-flip", check_dual_orientation},
        {"csv-determinism", check_csv_determinism},
        {"config-validation", check_config_validation},
        {"grid-derivative-order", check_grid_derivative_order},
        {"laplacian-flat-quadratic", check_laplacian_quadratic},
        {"lst-cut-function-values", check_lst_psi},
        {"schwarzschild-rstar", check_rstar},
        {"gradient-identity-live", check_gradient_identity_live},
    };
    return registry;
}

std::vector<VerifyResult> verify_suite(const std::string& filter) {
    std::vector<VerifyResult> results;
    for (const VerifyCheck& check : verify_registry()) {
        if (!filter.empty() && check.name.find(filter) == std::string::npos) continue;
        const auto t0 = std::chrono::steady_clock::now();
        VerifyResult r;
        try {
            r = check.fn();
        } catch (const std::exception& e) {
            r.name = check.name;
            r.pass = false;
            r.margin = -1.0;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        results.push_back(std::move(r));
    }
    return results;
}

} // namespace pmcf
