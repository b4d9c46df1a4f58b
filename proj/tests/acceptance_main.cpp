// Acceptance gate: one binary, one printed line per product-level claim.
// Each criterion prints
//     Cxx <title>: PASS|FAIL (val=<measured>, thr=<gate>)
// and the process exits 0 only if every line passed.  Expensive scenario
// runs are cached by (preset, nodes, record interval) and shared between
// criteria, so the whole gate runs each configuration at most once.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pmcf/diagnostics.hpp"
#include "pmcf/embedding.hpp"
#include "pmcf/scenario.hpp"
#include "pmcf/spacetimes.hpp"
#include "pmcf/verify.hpp"

using namespace pmcf;
namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------------------
// Reporting

struct Line {
    std::string id, title;
    bool pass = false;
    std::string val, thr;
};

std::vector<Line>& lines() {
    static std::vector<Line> v;
    return v;
}

void report(const std::string& id, const std::string& title, bool pass, const std::string& val,
            const std::string& thr) {
    lines().push_back({id, title, pass, val, thr});
    std::printf("%s %s: %s (val=%s, thr=%s)\n", id.c_str(), title.c_str(),
                pass ? "PASS" : "FAIL", val.c_str(), thr.c_str());
    std::fflush(stdout);
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// Cached scenario runs

struct CachedRun {
    ScenarioConfig config;
    RunSummary summary;
    RunResult result;  // populated for flow-kind scenarios
};

fs::path out_root() {
    static fs::path root = [] {
        fs::path p = fs::temp_directory_path() / "pmcf_acceptance";
        fs::create_directories(p);
        return p;
    }();
    return root;
}

const CachedRun& cached_run(const std::string& preset_name, Eigen::Index nodes_override = 0,
                            double record_ds_override = -1.0) {
    static std::map<std::string, CachedRun> cache;
    std::ostringstream key;
    key << preset_name << "#" << nodes_override << "#" << record_ds_override;
    auto it = cache.find(key.str());
    if (it != cache.end()) return it->second;

    CachedRun entry;
    entry.config = preset(preset_name);
    if (nodes_override > 0) entry.config.nodes = nodes_override;
    if (record_ds_override >= 0.0) entry.config.flow.record_ds = record_ds_override;
    std::ostringstream dir;
    dir << preset_name << "-" << entry.config.nodes << "-" << entry.config.flow.record_ds;
    const fs::path out = out_root() / dir.str();
    fs::create_directories(out);
    entry.summary = run_scenario(entry.config, out.string(), &entry.result);
    return cache.emplace(key.str(), std::move(entry)).first->second;
}

double max_spacing(const SpatialGrid& grid) {
    double h = 0.0;
    for (Eigen::Index i = 0; i + 1 < grid.nodes; ++i)
        h = std::max(h, grid.r[i + 1] - grid.r[i]);
    return h;
}

// ---------------------------------------------------------------------------
// C01  Stationary drift: the exact constant-curvature slice stays put.

void criterion_stationary_drift() {
    const std::vector<std::string> names = {"mink-stationary-n1-tau05", "mink-stationary-n1-tau2",
                                            "mink-stationary-n3-tau05", "mink-stationary-n3-tau2"};
    bool pass = true;
    double worst_frac = 0.0, min_ratio = 1e300, max_wall = 0.0;
    for (const auto& name : names) {
        const CachedRun& full = cached_run(name);
        const Eigen::Index half_nodes = full.config.nodes / 2;
        const CachedRun& half = cached_run(name, half_nodes);
        const double tau0 = full.config.tau0;

        auto drift_of = [tau0](const CachedRun& run) {
            double d = 0.0;
            for (const auto& rec : run.result.records)
                d = std::max({d, std::abs(rec.u_min - tau0), std::abs(rec.u_max - tau0)});
            return d;
        };
        const double drift = drift_of(full);
        const double drift_coarse = drift_of(half);
        const double gate = 1e-3 * tau0;
        const double ratio = drift > 0.0 ? drift_coarse / drift : 1e300;

        pass = pass && full.summary.termination == "completed" &&
               half.summary.termination == "completed" && drift <= gate && ratio >= 3.5 &&
               full.summary.wall_time_seconds < 60.0 && half.summary.wall_time_seconds < 60.0;
        worst_frac = std::max(worst_frac, drift / gate);
        min_ratio = std::min(min_ratio, ratio);
        max_wall = std::max({max_wall, full.summary.wall_time_seconds,
                             half.summary.wall_time_seconds});
    }
    report("C01", "stationary slice drift", pass,
           "drift/gate " + fmt(worst_frac) + ", h-ratio " + fmt(min_ratio) + ", wall " +
               fmt(max_wall) + "s",
           "drift<=1e-3*tau0, ratio>=3.5, wall<60s");
}

// ---------------------------------------------------------------------------
// C02  Self-similar tracking converges at second order.

void criterion_selfsim_convergence() {
    bool pass = true;
    std::ostringstream val;
    for (int n : {1, 2}) {
        const std::string name = n == 1 ? "mink-selfsim-n1" : "mink-selfsim-n2";
        auto error_of = [n](const CachedRun& run) {
            const GraphState& st = run.result.final_state;
            const Eigen::ArrayXd exact =
                (1.0 + 2.0 * double(n) * st.s + st.grid->r * st.grid->r).sqrt();
            return (st.w - exact).abs().maxCoeff();
        };
        const CachedRun& coarse = cached_run(name);                    // 512 nodes
        const CachedRun& fine = cached_run(name, 1024, 0.025);
        const double e_c = error_of(coarse), e_f = error_of(fine);
        const double h_c = max_spacing(*coarse.result.final_state.grid);
        const double h_f = max_spacing(*fine.result.final_state.grid);
        const double dt_c = coarse.result.final_state.s / double(coarse.result.steps);
        const double dt_f = fine.result.final_state.s / double(fine.result.steps);
        const double gate_c = 5.0 * (h_c * h_c + dt_c * dt_c);
        const double gate_f = 5.0 * (h_f * h_f + dt_f * dt_f);
        const double order = std::log2(e_c / e_f);
        pass = pass && coarse.summary.termination == "completed" &&
               fine.summary.termination == "completed" && e_c <= gate_c && e_f <= gate_f &&
               order >= 1.8 && order <= 2.2 && coarse.summary.wall_time_seconds < 60.0 &&
               fine.summary.wall_time_seconds < 60.0;
        if (n == 2) val << "; ";
        val << "n" << n << " err " << fmt(e_c) << "/" << fmt(e_f) << " order " << fmt(order);
    }
    report("C02", "self-similar tracking order", pass, val.str(),
           "err<=5(h^2+dt^2), order in [1.8,2.2], wall<60s");
}

// ---------------------------------------------------------------------------
// C03  Graph engine vs parametric-embedding oracle on five surfaces.

// Returns sup over shared interior nodes of |H_graph - H_embedding|.
double mismatch_case(int which, int refine) {
    const Eigen::Index N = 128 * refine + 1;
    const int n_phi = 32 * refine;
    const int n_theta = 24 * refine + 1;

    if (which == 0) {
        // 1D tilted, bent slice over a Dirichlet box.
        const SyncChart sync = make_minkowski_sync_chart(1);
        auto grid = std::make_shared<SpatialGrid>(SpatialGrid::box(N, -1.0, 1.0, false));
        GraphState st;
        st.grid = grid;
        st.w = 0.2 * grid->r + 0.05 * (M_PI * grid->r).sin();
        const SurfaceGeometry g = graph_geometry(sync, st);

        const ChartSpec chart = make_minkowski_chart(1);
        const ParameterGrid pgrid = ParameterGrid::line(N, -1.0, 1.0);
        const EmbeddingMap map = [](const Vec& q) {
            Vec x(2);
            x << 0.2 * q[0] + 0.05 * std::sin(M_PI * q[0]), q[0];
            return x;
        };
        const EmbeddedGeometry eg = embedding_geometry(chart, pgrid, map);
        double sup = 0.0;
        for (Eigen::Index j = 0; j < pgrid.total(); ++j)
            if (eg.interior[std::size_t(j)]) sup = std::max(sup, std::abs(eg.H[j] - g.H[j]));
        return sup;
    }

    if (which == 1) {
        // Radial hyperboloid seen as a full-line embedding.
        const SyncChart sync = make_minkowski_sync_chart(1);
        auto grid = std::make_shared<SpatialGrid>(SpatialGrid::radial_uniform(1, N, 2.0));
        const GraphState st = hyperboloid_profile(1.0, grid);
        const SurfaceGeometry g = graph_geometry(sync, st);

        const ChartSpec chart = make_minkowski_chart(1);
        const ParameterGrid pgrid = ParameterGrid::line(2 * N - 1, -2.0, 2.0);
        const EmbeddingMap map = [](const Vec& q) {
            Vec x(2);
            x << std::sqrt(1.0 + q[0] * q[0]), q[0];
            return x;
        };
        const EmbeddedGeometry eg = embedding_geometry(chart, pgrid, map);
        double sup = 0.0;
        for (Eigen::Index j = N - 1; j < pgrid.total(); ++j) {
            if (!eg.interior[std::size_t(j)]) continue;
            sup = std::max(sup, std::abs(eg.H[j] - g.H[j - (N - 1)]));
        }
        return sup;
    }

    if (which == 2) {
        // Bumped hyperboloid surface of revolution, n = 2.
        const SyncChart sync = make_minkowski_sync_chart(2);
        auto grid = std::make_shared<SpatialGrid>(SpatialGrid::radial_uniform(2, N, 2.5));
        GraphState st;
        st.grid = grid;
        st.w = (1.0 + grid->r * grid->r).sqrt() + 0.05 * (-(grid->r * grid->r)).exp();
        const SurfaceGeometry g = graph_geometry(sync, st);

        const ChartSpec chart = make_minkowski_chart(2);
        const Eigen::ArrayXd raxis = grid->r.segment(1, N - 1);
        const Eigen::ArrayXd phi =
            Eigen::ArrayXd::LinSpaced(n_phi, 0.0, 2.0 * M_PI * double(n_phi - 1) / n_phi);
        const ParameterGrid pgrid = ParameterGrid::product({raxis, phi}, {false, true});
        const EmbeddingMap map = [](const Vec& q) {
            const double w = std::sqrt(1.0 + q[0] * q[0]) + 0.05 * std::exp(-q[0] * q[0]);
            Vec x(3);
            x << w, q[0] * std::cos(q[1]), q[0] * std::sin(q[1]);
            return x;
        };
        const EmbeddedGeometry eg = embedding_geometry(chart, pgrid, map);
        double sup = 0.0;
        for (Eigen::Index j = 0; j < pgrid.total(); ++j) {
            if (!eg.interior[std::size_t(j)]) continue;
            const Eigen::Index ir = eg.grid.unflatten(j)[0];
            sup = std::max(sup, std::abs(eg.H[j] - g.H[ir + 1]));
        }
        return sup;
    }

    if (which == 3) {
        // n = 3 hyperboloid with a two-angle spherical parameterization.
        const SyncChart sync = make_minkowski_sync_chart(3);
        auto grid = std::make_shared<SpatialGrid>(SpatialGrid::radial_uniform(3, N, 3.0));
        const GraphState st = hyperboloid_profile(1.5, grid);
        const SurfaceGeometry g = graph_geometry(sync, st);

        const ChartSpec chart = make_minkowski_chart(3);
        const Eigen::ArrayXd raxis = grid->r.segment(1, N - 1);
        const Eigen::ArrayXd theta = Eigen::ArrayXd::LinSpaced(n_theta, 0.4, M_PI - 0.4);
        const Eigen::ArrayXd phi =
            Eigen::ArrayXd::LinSpaced(n_phi, 0.0, 2.0 * M_PI * double(n_phi - 1) / n_phi);
        const ParameterGrid pgrid =
            ParameterGrid::product({raxis, theta, phi}, {false, false, true});
        const EmbeddingMap map = [](const Vec& q) {
            Vec x(4);
            x << std::sqrt(2.25 + q[0] * q[0]), q[0] * std::sin(q[1]) * std::cos(q[2]),
                q[0] * std::sin(q[1]) * std::sin(q[2]), q[0] * std::cos(q[1]);
            return x;
        };
        const EmbeddedGeometry eg = embedding_geometry(chart, pgrid, map);
        double sup = 0.0;
        for (Eigen::Index j = 0; j < pgrid.total(); ++j) {
            if (!eg.interior[std::size_t(j)]) continue;
            const Eigen::Index ir = eg.grid.unflatten(j)[0];
            sup = std::max(sup, std::abs(eg.H[j] - g.H[ir + 1]));
        }
        return sup;
    }

    // which == 4: gaussian graph over an expanding (time-dependent) chart.
    const SyncChart sync = make_milne_sync_chart(2, 1.0);
    auto grid = std::make_shared<SpatialGrid>(SpatialGrid::radial_uniform(2, N, 3.0));
    GraphState st;
    st.grid = grid;
    st.w = 0.1 * (-(grid->r * grid->r)).exp();
    const SurfaceGeometry g = graph_geometry(sync, st);

    const Eigen::ArrayXd raxis = grid->r.segment(1, N - 1);
    const Eigen::ArrayXd phi =
        Eigen::ArrayXd::LinSpaced(n_phi, 0.0, 2.0 * M_PI * double(n_phi - 1) / n_phi);
    const ParameterGrid pgrid = ParameterGrid::product({raxis, phi}, {false, true});
    const EmbeddingMap map = [](const Vec& q) {
        Vec x(3);
        x << 0.1 * std::exp(-q[0] * q[0]), q[0] * std::cos(q[1]), q[0] * std::sin(q[1]);
        return x;
    };
    const EmbeddedGeometry eg = embedding_geometry(sync.full, pgrid, map);
    double sup = 0.0;
    for (Eigen::Index j = 0; j < pgrid.total(); ++j) {
        if (!eg.interior[std::size_t(j)]) continue;
        const Eigen::Index ir = eg.grid.unflatten(j)[0];
        sup = std::max(sup, std::abs(eg.H[j] - g.H[ir + 1]));
    }
    return sup;
}

void criterion_graph_vs_embedding() {
    const char* labels[5] = {"box", "hyperboloid-n1", "bumped-n2", "hyperboloid-n3",
                             "milne-gauss-n2"};
    bool pass = true;
    std::ostringstream val;
    for (int c = 0; c < 5; ++c) {
        const double coarse = mismatch_case(c, 1);
        const double fine = mismatch_case(c, 2);
        const double ratio = fine > 0.0 ? coarse / fine : 1e300;
        pass = pass && ratio >= 3.5 && ratio <= 4.5;
        if (c) val << ", ";
        val << labels[c] << " " << fmt(ratio);
    }
    report("C03", "independent curvature pipelines agree at O(h^2)", pass, val.str(),
           "refinement ratio in [3.5,4.5] x5");
}

// ---------------------------------------------------------------------------
// C04  Gradient identity on every recorded state of every flow preset.

void criterion_gradient_identity() {
    bool pass = true;
    double worst = 0.0;
    std::string worst_at = "-";
    int states_checked = 0;
    for (const auto& name : preset_names()) {
        const ScenarioConfig probe = preset(name);
        if (probe.kind != ScenarioKind::flow) continue;
        const CachedRun& run = cached_run(name);
        const ScenarioSetup setup = build_setup(run.config);
        const double h_max = max_spacing(*setup.grid);
        for (std::size_t k = 0; k < run.result.states.size(); ++k) {
            const SurfaceGeometry g =
                graph_geometry(setup.chart, run.result.states[k], setup.diag.diag_frame);
            const double resid = gradient_identity_residual(g);
            const double kap = run.result.records[k].sup_kappa;
            const double gate =
                run.config.gradient_identity_scale * (1.0 + kap * kap) * h_max * h_max;
            const double frac = resid / gate;
            ++states_checked;
            if (frac > worst) {
                worst = frac;
                worst_at = name + "@s=" + fmt(run.result.records[k].s);
            }
            pass = pass && resid <= gate;
        }
    }
    report("C04", "tilt-gradient identity along all flows", pass,
           "worst resid/gate " + fmt(worst) + " at " + worst_at + " (" +
               std::to_string(states_checked) + " states)",
           "resid<=scale*(1+kappa^2)*h^2 each");
}

// ---------------------------------------------------------------------------
// C05  Evolution-identity residual columns shrink at the expected order.

void criterion_residual_orders() {
    // Coarse/fine pair 256 -> 512.  The r6 residual differentiates H twice
    // more, so its double-precision floor grows like 1/h^4 (amplified by
    // gamma^rr near the outer boundary) and overtakes its truncation error
    // past ~512 nodes at this r_max; the halving study must sit where
    // truncation still dominates both levels.
    const CachedRun& A = cached_run("mink-selfsim-n1", 256, 0.1);
    const CachedRun& B = cached_run("mink-selfsim-n1");  // 512, ds 0.05: h and ds halved
    auto col_max = [](const CachedRun& run, int col) {
        double m = 0.0;
        const auto& recs = run.result.records;
        for (std::size_t k = 1; k + 1 < recs.size(); ++k) {
            const double v = col == 0 ? recs[k].r1 : (col == 1 ? recs[k].r6 : recs[k].r7);
            m = std::max(m, std::abs(v));
        }
        return m;
    };
    const double o1 = std::log2(col_max(A, 0) / col_max(B, 0));
    const double o6 = std::log2(col_max(A, 1) / col_max(B, 1));
    const double o7 = std::log2(col_max(A, 2) / col_max(B, 2));
    const bool pass = o1 >= 1.5 && o1 <= 2.5 && o7 >= 1.5 && o7 <= 2.5 && o6 >= 0.9;
    report("C05", "evolution identity residual orders", pass,
           "r1 " + fmt(o1) + ", r6 " + fmt(o6) + ", r7 " + fmt(o7),
           "r1,r7 in [1.5,2.5]; r6>=0.9");
}

// ---------------------------------------------------------------------------
// C06  Perturbations of the constant-curvature slice decay exponentially.

void criterion_perturbation_decay() {
    const CachedRun& run = cached_run("mink-perturbed-cmc");
    std::vector<double> s, v;
    for (const auto& rec : run.result.records) {
        s.push_back(rec.s);
        v.push_back(rec.sup_H_minus_h);
    }
    bool pass = run.summary.termination == "completed";
    double rate = 0.0, resid = 1e300;
    try {
        const DecayFit fit = decay_fit(s, v, 0.2, 1.0);
        rate = fit.rate;
        resid = fit.fit_residual;
        pass = pass && rate > 0.0 && resid < 0.1;
    } catch (const Error&) {
        pass = false;
    }
    report("C06", "perturbation decay is exponential", pass,
           "rate " + fmt(rate) + ", fit resid " + fmt(resid), "rate>0, resid<0.1");
}

// ---------------------------------------------------------------------------
// C07  Curvature mismatch obeys the 1/s bound along self-similar flows.

void criterion_s_inverse_bound() {
    bool pass = true;
    double worst = 0.0;
    for (int n : {1, 2}) {
        const CachedRun& run = cached_run(n == 1 ? "mink-selfsim-n1" : "mink-selfsim-n2");
        for (const auto& rec : run.result.records) {
            if (rec.s < 0.05) continue;
            const double prod = rec.s * rec.sup_H_minus_h * rec.sup_H_minus_h;
            worst = std::max(worst, prod);
            pass = pass && prod <= 1.05;
        }
    }
    report("C07", "sup(H-Hcal)^2 <= 1.05/s along self-similar flows", pass,
           "max s*(sup)^2 = " + fmt(worst), "<=1.05 for s>=0.05");
}

// ---------------------------------------------------------------------------
// C08  Barriers: the pinched run never crosses its comparison slices.

void criterion_barrier() {
    const CachedRun& run = cached_run("mink-pinched-barrier");
    long long total = 0;
    for (const auto& rec : run.result.records) total += rec.barrier_violations;
    const bool pass = run.summary.termination == "completed" && total == 0;
    report("C08", "comparison barriers are never crossed", pass,
           "violations " + std::to_string(total) + ", termination " + run.summary.termination,
           "0 violations, completed");
}

// ---------------------------------------------------------------------------
// C09  Foliation integrator matches closed forms and the growth envelope.

void criterion_foliation() {
    bool pass = true;
    double min_margin = 1e300;
    std::ostringstream val;
    for (const std::string name : {"folia-hyperboloid", "folia-tanh"}) {
        const CachedRun& run = cached_run(name);
        const auto cf = run.summary.checks.find("closed_form");
        const auto env = run.summary.checks.find("envelope");
        const bool ok = run.summary.termination == "completed" &&
                        cf != run.summary.checks.end() && cf->second.pass &&
                        env != run.summary.checks.end() && env->second.pass;
        pass = pass && ok;
        if (cf != run.summary.checks.end()) min_margin = std::min(min_margin, cf->second.margin);
        if (env != run.summary.checks.end()) min_margin = std::min(min_margin, env->second.margin);
        if (name != "folia-hyperboloid") val << "; ";
        val << name << (ok ? " ok" : " FAIL");
    }
    report("C09", "normal foliation closed forms and envelope", pass,
           val.str() + ", min margin " + fmt(min_margin), "rel err<=1e-8, envelope holds");
}

// ---------------------------------------------------------------------------
// C10  Tilt norm equivalence between boosted resting frames.

void criterion_tilt_equivalence() {
    const auto results = verify_suite("tilt-equivalence");
    bool pass = !results.empty();
    double margin = 1e300;
    for (const auto& r : results) {
        pass = pass && r.pass;
        margin = std::min(margin, r.margin);
    }
    report("C10", "tilt norm equivalence bound", pass,
           results.empty() ? "no check matched" : "min clearance " + fmt(margin),
           "4v^2-weighted bound holds on 10^4 draws");
}

// ---------------------------------------------------------------------------
// C11  Stationary solutions: Newton convergence and linear response.

void criterion_newton_and_response() {
    const SyncChart chart = make_minkowski_sync_chart(1);
    auto grid = std::make_shared<SpatialGrid>(SpatialGrid::radial_sinh(1, 513, 10.0, 1.0));
    const PrescribedCurvatureField h_one = make_constant_h(1.0, 1);

    bool pass = true;
    std::ostringstream val;

    // Newton from a bumped seed: few iterations, superlinear tail.
    GraphState seed = hyperboloid_profile(1.0, grid);
    seed.w += 0.05 * (-(grid->r * grid->r)).exp();
    NewtonReport report_bump;
    GraphState wstar;
    double tail_order = 0.0;
    try {
        wstar = stationary_solve(chart, seed, h_one, 1e-8, 12, &report_bump);
        std::vector<double> res;
        for (double r : report_bump.residuals)
            if (r > 1e-13) res.push_back(r);
        if (res.size() >= 3) {
            const double a = res[res.size() - 3], b = res[res.size() - 2],
                         c = res[res.size() - 1];
            tail_order = std::log(c / b) / std::log(b / a);
        }
        pass = pass && report_bump.iterations <= 8 && report_bump.residuals.back() <= 1e-8 &&
               tail_order >= 1.5;
        val << "newton iters " << report_bump.iterations << ", tail order " << fmt(tail_order);
    } catch (const Error& e) {
        pass = false;
        val << "newton failed: " << e.what();
        report("C11", "stationary Newton convergence and linear response", false, val.str(),
               "iters<=8, tail>=1.5, m-ratio in [1.5,2.5], m(1e-4)<=1e-2");
        return;
    }

    // Linear response: first-order curvature mismatch under 100 seeded bumps.
    std::mt19937 rng(0x5EED);
    std::uniform_real_distribution<double> amp(0.5, 1.0), ctr(0.0, 1.5), wid(0.4, 0.8);
    double worst_ratio_lo = 1e300, worst_ratio_hi = 0.0, worst_m = 0.0;
    bool ratios_ok = true;
    for (int i = 0; i < 100; ++i) {
        const double a = amp(rng), c = ctr(rng), sg = wid(rng);
        // Mirrored pair: smooth axisymmetric data has zero radial slope at
        // the axis, so the bump is symmetrized about r = 0.
        const Eigen::ArrayXd phi = a * ((-(grid->r - c).square() / (2.0 * sg * sg)).exp() +
                                        (-(grid->r + c).square() / (2.0 * sg * sg)).exp());
        auto mismatch = [&](double eps) {
            GraphState st = wstar;
            st.w += eps * phi;
            const SurfaceGeometry g = graph_geometry(chart, st);
            double m = 0.0;
            for (Eigen::Index k = 0; k + 1 < grid->nodes; ++k)
                m = std::max(m, std::abs(g.H[k] - 1.0));
            return m;
        };
        const double m1 = mismatch(1e-4), m2 = mismatch(5e-5);
        const double ratio = m1 / m2;
        ratios_ok = ratios_ok && ratio >= 1.5 && ratio <= 2.5;
        worst_ratio_lo = std::min(worst_ratio_lo, ratio);
        worst_ratio_hi = std::max(worst_ratio_hi, ratio);
        worst_m = std::max(worst_m, m1);
    }
    pass = pass && ratios_ok && worst_m <= 1e-2;
    val << ", m-ratio [" << fmt(worst_ratio_lo) << "," << fmt(worst_ratio_hi) << "], max m(1e-4) "
        << fmt(worst_m);
    report("C11", "stationary Newton convergence and linear response", pass, val.str(),
           "iters<=8, tail>=1.5, m-ratio in [1.5,2.5], m(1e-4)<=1e-2");
}

// ---------------------------------------------------------------------------
// C12  Schwarzschild large-sphere expansion approaches the flat limit.

void criterion_schwarzschild() {
    const CachedRun& run = cached_run("schw-expansion");
    const auto h0 = run.summary.checks.find("h0_match");
    const auto ric = run.summary.checks.find("richardson");
    const bool pass = run.summary.termination == "completed" &&
                      h0 != run.summary.checks.end() && h0->second.pass &&
                      ric != run.summary.checks.end() && ric->second.pass &&
                      run.summary.wall_time_seconds < 120.0;
    report("C12", "Schwarzschild expansion flat limit", pass,
           "|H0-3| margin " + fmt(h0 != run.summary.checks.end() ? h0->second.margin : -1.0) +
               ", richardson margin " +
               fmt(ric != run.summary.checks.end() ? ric->second.margin : -1.0) + ", wall " +
               fmt(run.summary.wall_time_seconds) + "s",
           "|H0-3|<=1e-3, x^2 ratios in [3.2,4.8], wall<120s");
}

// ---------------------------------------------------------------------------
// C13  The example prescription is admissible: monotone and within gates.

void criterion_example_field() {
    const PrescribedCurvatureField f = make_example_prescribed_h(3);
    std::mt19937 rng(0x5EED);
    std::uniform_real_distribution<double> tdist(0.2, 3.0), xdist(-2.0, 2.0), chi(0.0, 2.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double min_pairing = 1e300;
    for (int i = 0; i < 100000; ++i) {
        Vec p(4);
        p << tdist(rng), xdist(rng), xdist(rng), xdist(rng);
        Vec dir(3);
        dir << gauss(rng), gauss(rng), gauss(rng);
        if (dir.norm() < 1e-12) continue;
        dir.normalize();
        const double rap = chi(rng);
        Vec T(4);
        T << std::cosh(rap), std::sinh(rap) * dir[0], std::sinh(rap) * dir[1],
            std::sinh(rap) * dir[2];
        min_pairing = std::min(min_pairing, f.grad_or_fd(p).dot(T));
    }
    double sup = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        const double r = 8.0 * double(i) / 4000.0;
        const double t = std::sqrt(r * r + 0.25);
        sup = std::max(sup, std::abs(f.at(t, r, 3) - 2.0));
    }
    const double gate = std::exp(-0.5);
    const bool pass = min_pairing >= 0.0 && sup <= gate;
    report("C13", "example prescription monotone and inside its gate", pass,
           "min pairing " + fmt(min_pairing) + ", sup dev " + fmt(sup),
           "pairing>=0 (1e5 draws), sup<=e^{-1/2}");
}

} // namespace

int main() {
    std::printf("acceptance gate (single process, cached runs under %s)\n",
                out_root().string().c_str());
    criterion_stationary_drift();
    criterion_selfsim_convergence();
    criterion_graph_vs_embedding();
    criterion_gradient_identity();
    criterion_residual_orders();
    criterion_perturbation_decay();
    criterion_s_inverse_bound();
    criterion_barrier();
    criterion_foliation();
    criterion_tilt_equivalence();
    criterion_newton_and_response();
    criterion_schwarzschild();
    criterion_example_field();

    int failed = 0;
    for (const auto& line : lines())
        if (!line.pass) ++failed;
    std::printf("%zu criteria, %d failed\n", lines().size(), failed);
    return failed == 0 ? 0 : 1;
}
