// Extrinsic geometry of spacelike graphs in the rotationally-symmetric
// reduction, plus the intrinsic Laplacian and the spacelike margin.
#include "pmcf/surface.hpp"

#include <cmath>
#include <sstream>

namespace pmcf {

namespace {

// f'/r with the even-symmetry limit f''(0) at the axis node.
Eigen::ArrayXd ratio_over_r(const SpatialGrid& grid, const Eigen::ArrayXd& fp,
                            const Eigen::ArrayXd& fpp) {
    Eigen::ArrayXd out(grid.nodes);
    out[0] = fpp[0];
    for (Eigen::Index i = 1; i < grid.nodes; ++i) out[i] = fp[i] / grid.r[i];
    return out;
}

} // namespace

SurfaceGeometry graph_geometry(const SyncChart& chart, const GraphState& state,
                               const std::optional<TimeFunction>& diag_frame,
                               double delta_floor) {
    const SpatialGrid& grid = *state.grid;
    const Eigen::Index N = grid.nodes;
    const bool radial = grid.radial();
    const int n = grid.n;

    SurfaceGeometry g;
    g.n = n;
    g.grid = state.grid;
    g.w = state.w;
    grid_derivatives(grid, state.w, g.wp, g.wpp, /*even_at_origin=*/radial);

    g.q.resize(N);
    g.lambda.resize(N);
    g.gamma_rr.resize(N);
    g.gamma_ang.resize(N);
    g.inv_rr.resize(N);
    g.inv_ang.resize(N);
    g.nu_t.resize(N);
    g.nu_r.resize(N);
    g.A_rr.resize(N);
    g.A_ang.resize(N);
    g.H.resize(N);
    g.A_norm.resize(N);
    g.kappa.resize(N);
    g.u.resize(N);
    g.alpha.resize(N);

    const Eigen::ArrayXd wp_over_r =
        radial ? ratio_over_r(grid, g.wp, g.wpp) : Eigen::ArrayXd::Zero(N);

    double q_min = 1e300;
    for (Eigen::Index i = 0; i < N; ++i) {
        const double r = grid.r[i];
        const double w = state.w[i];
        const double wp = g.wp[i];
        const double wpp = g.wpp[i];
        const RadialChartTerms c = chart.terms(w, r);

        const double q = 1.0 - wp * wp / c.R;
        g.q[i] = q;
        q_min = std::min(q_min, q);
        if (!(q > 0.0)) continue;  // reported below; avoid NaN churn meanwhile
        const double lam = 1.0 / std::sqrt(q);
        g.lambda[i] = lam;

        g.gamma_rr[i] = c.R * q;
        g.inv_rr[i] = 1.0 / g.gamma_rr[i];
        g.nu_t[i] = lam;
        g.nu_r[i] = lam * wp / c.R;

        // A_rr = lambda [ w'' - w' R_r/(2R) - w'^2 R_t/R + R_t/2 ].
        g.A_rr[i] = lam * (wpp - wp * c.R_r / (2.0 * c.R) - wp * wp * c.R_t / c.R + 0.5 * c.R_t);
        const double radial_part = g.A_rr[i] * g.inv_rr[i];

        double angular_part = 0.0;
        if (radial) {
            const double S = r * r * c.Sh;
            g.gamma_ang[i] = S;
            g.inv_ang[i] = (i == 0) ? 0.0 : 1.0 / S;  // axis value appears only in products
            // A_ang / gamma_ang, written in the origin-regular variables:
            // S_t/S = Sh_t/Sh and w' S_r/(R S) = 2 (w'/r)/R + w' Sh_r/(R Sh).
            angular_part = 0.5 * lam *
                           (c.Sh_t / c.Sh + 2.0 * wp_over_r[i] / c.R + wp * c.Sh_r / (c.R * c.Sh));
            g.A_ang[i] = angular_part * S;
        } else {
            g.gamma_ang[i] = 1.0;
            g.inv_ang[i] = 1.0;
            g.A_ang[i] = 0.0;
        }

        g.H[i] = radial_part + double(n - 1) * angular_part;
        g.A_norm[i] = std::sqrt(radial_part * radial_part +
                                double(n - 1) * angular_part * angular_part);

        Vec p = Vec::Zero(chart.full.dim);
        p[0] = w;
        if (chart.full.dim > 1) p[1] = r;
        if (!chart.full.valid_at(p)) {
            std::ostringstream os;
            os << "graph_geometry: node " << i << " at (t=" << w << ", r=" << r
               << ") left the chart validity region";
            throw DomainError(os.str());
        }
        if (diag_frame) {
            g.u[i] = diag_frame->tau(p);
            g.alpha[i] = diag_frame->lapse(p);
            Vec T = diag_frame->frame(p);
            // kappa = -<nu, T> with nu_lower = lambda (-dt + w' dr):
            g.kappa[i] = lam * (T[0] - wp * (chart.full.dim > 1 ? T[1] : 0.0));
        } else {
            g.u[i] = w;
            g.alpha[i] = 1.0;
            g.kappa[i] = lam;
        }
    }
    g.q_min = q_min;

    if (!(q_min > 0.0)) {
        std::ostringstream os;
        os << "graph_geometry: graph is not spacelike (q_min = " << q_min << ")";
        throw SpacelikeViolation(os.str());
    }
    if (q_min < delta_floor) {
        std::ostringstream os;
        os << "graph_geometry: spacelike margin q_min = " << q_min << " fell below the floor "
           << delta_floor;
        throw SpacelikeViolation(os.str());
    }
    return g;
}

Eigen::ArrayXd surface_laplacian(const SurfaceGeometry& geom, const Eigen::ArrayXd& field) {
    const SpatialGrid& grid = *geom.grid;
    const Eigen::Index N = grid.nodes;
    if (field.size() != N) throw ValidationError("surface_laplacian: field size mismatch");
    const bool radial = grid.radial();

    Eigen::ArrayXd fp, fpp;
    grid_derivatives(grid, field, fp, fpp, /*even_at_origin=*/radial);

    // Metric coefficients are nodal arrays; differentiate them numerically
    // (they are even in r for symmetric radial data).
    Eigen::ArrayXd grr_p, grr_pp;
    grid_derivatives(grid, geom.gamma_rr, grr_p, grr_pp, /*even_at_origin=*/radial);

    Eigen::ArrayXd out(N);
    if (radial && geom.n > 1) {
        Eigen::ArrayXd gang_p, gang_pp;
        grid_derivatives(grid, geom.gamma_ang, gang_p, gang_pp, /*even_at_origin=*/true);
        for (Eigen::Index i = 0; i < N; ++i) {
            if (i == 0) {
                // Axis limit of the conservative form: n gamma^{rr} f''(0).
                out[i] = double(geom.n) * geom.inv_rr[i] * fpp[i];
                continue;
            }
            const double dlog_rr = grr_p[i] / geom.gamma_rr[i];
            const double dlog_ang = gang_p[i] / geom.gamma_ang[i];
            out[i] = geom.inv_rr[i] *
                     (fpp[i] - 0.5 * dlog_rr * fp[i] +
                      0.5 * double(geom.n - 1) * dlog_ang * fp[i]);
        }
    } else {
        for (Eigen::Index i = 0; i < N; ++i) {
            if (radial && i == 0) {
                out[i] = geom.inv_rr[i] * fpp[i];
                continue;
            }
            const double dlog_rr = grr_p[i] / geom.gamma_rr[i];
            out[i] = geom.inv_rr[i] * (fpp[i] - 0.5 * dlog_rr * fp[i]);
        }
    }
    return out;
}

double spacelike_margin(const SyncChart& chart, const GraphState& state) {
    const SpatialGrid& grid = *state.grid;
    Eigen::ArrayXd wp, wpp;
    grid_derivatives(grid, state.w, wp, wpp, /*even_at_origin=*/grid.radial());
    double q_min = 1e300;
    for (Eigen::Index i = 0; i < grid.nodes; ++i) {
        const RadialChartTerms c = chart.terms(state.w[i], grid.r[i]);
        q_min = std::min(q_min, 1.0 - wp[i] * wp[i] / c.R);
    }
    return q_min;
}

} // namespace pmcf
