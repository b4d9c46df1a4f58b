// Monitored quantities, evolution-identity residuals (with the tangential
// corrections of the graph parametrization), decay fits, barriers, and CSV
// serialization.
#include "pmcf/diagnostics.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace pmcf {

Eigen::ArrayXd ecker_quantity(const SurfaceGeometry& geom, const Eigen::ArrayXd& Hcal,
                              double lambda, double mu) {
    return (lambda * geom.u).exp() * geom.kappa * geom.kappa +
           mu * (geom.H - Hcal) * (geom.H - Hcal);
}

Eigen::ArrayXd ecker_quantity(const SurfaceGeometry& geom, const PrescribedCurvatureField& H_field,
                              double lambda, double mu) {
    const Eigen::Index N = geom.grid->nodes;
    Eigen::ArrayXd hcal(N);
    for (Eigen::Index i = 0; i < N; ++i)
        hcal[i] = H_field.at(geom.w[i], geom.grid->r[i], geom.n + 1);
    return ecker_quantity(geom, hcal, lambda, mu);
}

namespace {

struct GeomBundle {
    SurfaceGeometry geom;
    Eigen::ArrayXd hcal;     // prescribed curvature on the surface
    Eigen::ArrayXd f;        // H - Hcal
    double s = 0.0;
};

GeomBundle make_bundle(const SyncChart& chart, const PrescribedCurvatureField& field,
                       const GraphState& st, const std::optional<TimeFunction>& frame) {
    GeomBundle b;
    b.geom = graph_geometry(chart, st, frame, 0.0);
    b.s = st.s;
    const Eigen::Index N = st.grid->nodes;
    b.hcal.resize(N);
    for (Eigen::Index i = 0; i < N; ++i)
        b.hcal[i] = field.at(st.w[i], st.grid->r[i], st.grid->n + 1);
    b.f = b.geom.H - b.hcal;
    return b;
}

// Derivative weights of the Lagrange quadratic through (s0,s1,s2) at s_eval.
void lagrange_prime(double s0, double s1, double s2, double s_eval, double& w0, double& w1,
                    double& w2) {
    w0 = ((s_eval - s1) + (s_eval - s2)) / ((s0 - s1) * (s0 - s2));
    w1 = ((s_eval - s0) + (s_eval - s2)) / ((s1 - s0) * (s1 - s2));
    w2 = ((s_eval - s0) + (s_eval - s1)) / ((s2 - s0) * (s2 - s1));
}

// Residuals at one of the three window states (eval = 0, 1 or 2).
ResidualTriple residual_core(const SyncChart& chart, const PrescribedCurvatureField& field,
                             const GeomBundle& b0, const GeomBundle& b1, const GeomBundle& b2,
                             int eval, double ricci_normal) {
    const GeomBundle& bm = (eval == 0) ? b0 : (eval == 1 ? b1 : b2);
    const SurfaceGeometry& g = bm.geom;
    const SpatialGrid& grid = *g.grid;
    const Eigen::Index N = grid.nodes;
    const int n = grid.n;
    const bool radial = grid.radial();

    double w0 = 0.0, w1 = 0.0, w2 = 0.0;
    lagrange_prime(b0.s, b1.s, b2.s, bm.s, w0, w1, w2);

    auto dds = [&](const Eigen::ArrayXd& a0, const Eigen::ArrayXd& a1,
                   const Eigen::ArrayXd& a2) -> Eigen::ArrayXd {
        return w0 * a0 + w1 * a1 + w2 * a2;
    };

    const Eigen::ArrayXd w_s = dds(b0.geom.w, b1.geom.w, b2.geom.w);
    const Eigen::ArrayXd grr_s = dds(b0.geom.gamma_rr, b1.geom.gamma_rr, b2.geom.gamma_rr);
    const Eigen::ArrayXd gang_s = dds(b0.geom.gamma_ang, b1.geom.gamma_ang, b2.geom.gamma_ang);
    const Eigen::ArrayXd f_s = dds(b0.f, b1.f, b2.f);
    const Eigen::ArrayXd u_s = dds(b0.geom.u, b1.geom.u, b2.geom.u);

    // Tangential velocity of the fixed-x parametrization: V^r = -w_s g^{rr} w_r.
    // Odd under r -> -r (w' is odd), so the axis row must not use the even
    // reflection; the one-sided stencil keeps second order there.
    const Eigen::ArrayXd Vr = -w_s * g.inv_rr * g.wp;
    Eigen::ArrayXd Vr_p, Vr_pp;
    grid_derivatives(grid, Vr, Vr_p, Vr_pp, /*even_at_origin=*/false);

    Eigen::ArrayXd grr_p, grr_pp, gang_p, gang_pp;
    grid_derivatives(grid, g.gamma_rr, grr_p, grr_pp, radial);
    grid_derivatives(grid, g.gamma_ang, gang_p, gang_pp, radial);

    Eigen::ArrayXd f_p, f_pp, u_p, u_pp;
    grid_derivatives(grid, bm.f, f_p, f_pp, radial);
    grid_derivatives(grid, g.u, u_p, u_pp, radial);

    const Eigen::ArrayXd lap_f = surface_laplacian(g, bm.f);

    // dHcal(nu) = nu^t Hcal_t + nu^r Hcal_r.
    Eigen::ArrayXd dh_nu(N);
    for (Eigen::Index i = 0; i < N; ++i) {
        dh_nu[i] = g.nu_t[i] * field.dt(g.w[i], grid.r[i], n + 1) +
                   g.nu_r[i] * field.dr(g.w[i], grid.r[i], n + 1);
    }

    // Pinned boundary rows satisfy the Dirichlet condition, not the flow.
    Eigen::Index lo = 0, hi = N;
    if (grid.topology == Topology::radial) hi = N - 1;
    if (grid.topology == Topology::box_dirichlet) {
        lo = 1;
        hi = N - 1;
    }
    // The boundary rows' geometry comes from one-sided stencils whose error
    // coefficient differs from the centered interior's, so any centered
    // derivative taken one row in picks up the coefficient jump divided by
    // 2h: an O(h) artifact for the first-derivative terms of r1/r7 and an
    // O(1) one for the Laplacian in r6.  All three residuals therefore skip
    // the rows whose stencils touch a one-sided row.
    Eigen::Index lo6 = lo, hi6 = hi;
    if (grid.topology == Topology::radial) hi6 = hi - 1;
    if (grid.topology == Topology::box_dirichlet) {
        lo6 = lo + 1;
        hi6 = hi - 1;
    }

    ResidualTriple out;
    for (Eigen::Index i = lo6; i < hi6; ++i) {
        // r1: d_s gamma = 2 (H - Hcal) A + L_V gamma, componentwise in the
        // gamma-norm.
        const double lie_rr = Vr[i] * grr_p[i] + 2.0 * g.gamma_rr[i] * Vr_p[i];
        const double d_rr =
            grr_s[i] - 2.0 * bm.f[i] * g.A_rr[i] - lie_rr;
        double r1sq = d_rr * g.inv_rr[i] * d_rr * g.inv_rr[i];
        if (radial && n > 1) {
            const double lie_ang = Vr[i] * gang_p[i];
            const double d_ang = gang_s[i] - 2.0 * bm.f[i] * g.A_ang[i] - lie_ang;
            const double ratio = d_ang * g.inv_ang[i];
            r1sq += double(n - 1) * ratio * ratio;
        }
        out.r1 = std::max(out.r1, std::sqrt(r1sq));

        // r6: d_s f = V.grad f + Lap f - (|A|^2 + Ric(nu,nu) + dHcal(nu)) f.
        const double rhs6 = Vr[i] * f_p[i] + lap_f[i] -
                            (g.A_norm[i] * g.A_norm[i] + ricci_normal + dh_nu[i]) * bm.f[i];
        out.r6 = std::max(out.r6, std::abs(f_s[i] - rhs6));

        // r7: d_s u = alpha^{-1} kappa (H - Hcal) + V.grad u.
        const double rhs7 = g.kappa[i] * bm.f[i] / g.alpha[i] + Vr[i] * u_p[i];
        out.r7 = std::max(out.r7, std::abs(u_s[i] - rhs7));
    }
    return out;
}

} // namespace

ResidualTriple evolution_residuals(const SyncChart& chart, const PrescribedCurvatureField& H_field,
                                   const GraphState& prev, const GraphState& mid,
                                   const GraphState& next,
                                   const std::optional<TimeFunction>& diag_frame,
                                   double ricci_normal) {
    if (!(prev.s < mid.s && mid.s < next.s))
        throw WindowError("evolution_residuals: states must be ordered in s");
    const double ds1 = mid.s - prev.s;
    const double ds2 = next.s - mid.s;
    if (std::abs(ds2 - ds1) > 1e-6 * std::max(ds1, ds2))
        throw WindowError("evolution_residuals: window spacing is not uniform");
    if (prev.grid->nodes != mid.grid->nodes || mid.grid->nodes != next.grid->nodes)
        throw WindowError("evolution_residuals: states live on different grids");

    const GeomBundle b0 = make_bundle(chart, H_field, prev, diag_frame);
    const GeomBundle b1 = make_bundle(chart, H_field, mid, diag_frame);
    const GeomBundle b2 = make_bundle(chart, H_field, next, diag_frame);
    return residual_core(chart, H_field, b0, b1, b2, 1, ricci_normal);
}

void fill_residuals(std::vector<DiagnosticsRecord>& records, const std::vector<GraphState>& states,
                    const SyncChart& chart, const PrescribedCurvatureField& H_field,
                    const std::optional<TimeFunction>& diag_frame, double ricci_normal) {
    const std::size_t K = states.size();
    if (K < 3 || records.size() != K) return;

    std::vector<GeomBundle> bundles;
    bundles.reserve(K);
    for (const auto& st : states) bundles.push_back(make_bundle(chart, H_field, st, diag_frame));

    for (std::size_t k = 0; k < K; ++k) {
        std::size_t a, eval;
        if (k == 0) {
            a = 0;
            eval = 0;
        } else if (k == K - 1) {
            a = K - 3;
            eval = 2;
        } else {
            a = k - 1;
            eval = 1;
        }
        const ResidualTriple t = residual_core(chart, H_field, bundles[a], bundles[a + 1],
                                               bundles[a + 2], int(eval), ricci_normal);
        records[k].r1 = t.r1;
        records[k].r6 = t.r6;
        records[k].r7 = t.r7;
    }
}

DecayFit decay_fit(const std::vector<double>& s, const std::vector<double>& value, double s_a,
                   double s_b) {
    if (s.size() != value.size()) throw ValidationError("decay_fit: series length mismatch");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] < s_a || s[i] > s_b) continue;
        if (!(value[i] > 0.0)) {
            std::ostringstream os;
            os << "decay_fit: non-positive value " << value[i] << " at s = " << s[i];
            throw NonPositiveValue(os.str());
        }
        xs.push_back(s[i]);
        ys.push_back(std::log(value[i]));
    }
    if (xs.size() < 8) {
        std::ostringstream os;
        os << "decay_fit: only " << xs.size() << " samples in window [" << s_a << ", " << s_b
           << "], need at least 8";
        throw InsufficientData(os.str());
    }
    const double nn = double(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = nn * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0)) throw InsufficientData("decay_fit: degenerate sample window");
    const double slope = (nn * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / nn;

    DecayFit fit;
    fit.rate = -slope;
    fit.amplitude = std::exp(intercept);
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double resid = ys[i] - (intercept + slope * xs[i]);
        ss += resid * resid;
    }
    fit.fit_residual = std::sqrt(ss / nn);
    return fit;
}

BarrierFlags barrier_check(const Eigen::ArrayXd& u, const Eigen::ArrayXd& r,
                           const BarrierSpec& spec) {
    BarrierFlags flags;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        double margin = 1e300;
        if (spec.lower) margin = std::min(margin, u[i] - spec.lower(r[i]));
        if (spec.upper) margin = std::min(margin, spec.upper(r[i]) - u[i]);
        if (margin == 1e300) continue;
        flags.worst_margin = std::min(flags.worst_margin, margin);
        if (margin < 0.0) ++flags.violations;
    }
    return flags;
}

double gradient_identity_residual(const SurfaceGeometry& geom) {
    const SpatialGrid& grid = *geom.grid;
    Eigen::ArrayXd up, upp;
    grid_derivatives(grid, geom.u, up, upp, /*even_at_origin=*/grid.radial());
    double worst = 0.0;
    for (Eigen::Index i = 0; i < grid.nodes; ++i) {
        const double grad2 = geom.inv_rr[i] * up[i] * up[i];
        const double rhs = (geom.kappa[i] * geom.kappa[i] - 1.0) / (geom.alpha[i] * geom.alpha[i]);
        worst = std::max(worst, std::abs(grad2 - rhs));
    }
    return worst;
}

const char* kRecordCsvHeader =
    "s,sup_H_minus_h,sup_kappa,sup_A,sup_phi,u_min,u_max,q_min,r1,r6,r7,barrier_violations";

namespace {
void append_g17(std::string& line, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    line += buf;
}
} // namespace

void write_records_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& records) {
    os << kRecordCsvHeader << "\n";
    for (const auto& r : records) {
        std::string line;
        append_g17(line, r.s);
        line += ',';
        append_g17(line, r.sup_H_minus_h);
        line += ',';
        append_g17(line, r.sup_kappa);
        line += ',';
        append_g17(line, r.sup_A);
        line += ',';
        append_g17(line, r.sup_phi);
        line += ',';
        append_g17(line, r.u_min);
        line += ',';
        append_g17(line, r.u_max);
        line += ',';
        append_g17(line, r.q_min);
        line += ',';
        append_g17(line, r.r1);
        line += ',';
        append_g17(line, r.r6);
        line += ',';
        append_g17(line, r.r7);
        line += ',';
        line += std::to_string(r.barrier_violations);
        os << line << "\n";
    }
}

void write_records_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("write_records_csv: cannot open " + path);
    write_records_csv(os, records);
}

} // namespace pmcf
