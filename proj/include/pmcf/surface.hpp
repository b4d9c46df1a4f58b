// Extrinsic geometry of spacelike graphs over synchronous charts with
// rotationally symmetric (or 1D box) spatial metrics, plus the intrinsic
// surface Laplacian.
//
// The synchronous spatial metric is g = R(t,r) dr^2 + r^2 Shat(t,r) dsigma^2
// (for boxes, g = R(t,x) dx^2).  Writing the angular factor as r^2 * Shat
// keeps every origin limit finite; profile evaluators return the handful of
// t/r partials the geometry and linearization need.
#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "pmcf/chart.hpp"
#include "pmcf/grid.hpp"

namespace pmcf {

// Metric profile values at one (t, r): R and Shat with the partial
// derivatives used by curvature and linearized coefficients.
struct RadialChartTerms {
    double R = 1.0, R_t = 0.0, R_r = 0.0, R_tt = 0.0, R_tr = 0.0;
    double Sh = 1.0, Sh_t = 0.0, Sh_r = 0.0, Sh_tt = 0.0, Sh_tr = 0.0;
};

// Synchronous chart in the engine's rotationally-symmetric form.  `full`
// carries the generic ChartSpec view of the same spacetime for the oracle
// and diagnostics paths.
struct SyncChart {
    int n = 1;                 // surface dimension
    bool static_flat = false;  // R = Shat = 1 identically (fast path)
    std::function<RadialChartTerms(double t, double r)> eval;
    ChartSpec full;
    std::string name;

    RadialChartTerms terms(double t, double r) const {
        if (static_flat) return RadialChartTerms{};
        return eval(t, r);
    }
};

// Per-node extrinsic geometry of a spacelike graph.  Rotational symmetry
// reduces the induced metric and second fundamental form to a radial and an
// angular component: gamma = gamma_rr dr^2 + gamma_ang dsigma^2 and
// A = A_rr dr^2 + A_ang dsigma^2 (boxes have no angular part).
struct SurfaceGeometry {
    int n = 1;
    std::shared_ptr<const SpatialGrid> grid;
    Eigen::ArrayXd w;          // height samples the geometry was built from
    Eigen::ArrayXd wp, wpp;    // physical-coordinate derivatives of w
    Eigen::ArrayXd q;          // spacelike margin 1 - |grad w|^2_g
    Eigen::ArrayXd lambda;     // (1 - |grad w|^2)^{-1/2}
    Eigen::ArrayXd gamma_rr, gamma_ang;
    Eigen::ArrayXd inv_rr, inv_ang;
    Eigen::ArrayXd nu_t, nu_r;  // future unit normal components (chart basis)
    Eigen::ArrayXd A_rr, A_ang;
    Eigen::ArrayXd H;           // mean curvature, trace convention H = gamma^{ij} A_ij
    Eigen::ArrayXd A_norm;      // |A| in the induced metric
    Eigen::ArrayXd kappa;       // tilt factor vs the diagnostic frame
    Eigen::ArrayXd u;           // height: diagnostic time function on the surface
    Eigen::ArrayXd alpha;       // lapse of the diagnostic frame on the surface
    double q_min = 0.0;
};

// Full geometry of a graph state.  kappa/u/alpha are measured against
// `diag_frame` when given, else against the chart's d_t (u = w, alpha = 1).
// Throws SpacelikeViolation if q < delta_floor anywhere and DomainError if a
// surface point leaves the chart validity region.
SurfaceGeometry graph_geometry(const SyncChart& chart, const GraphState& state,
                               const std::optional<TimeFunction>& diag_frame = std::nullopt,
                               double delta_floor = 0.0);

// Conservative-form Laplace-Beltrami of a nodal field on the surface:
// Delta f = (1/sqrt(det gamma)) d_i( sqrt(det gamma) gamma^{ij} d_j f ).
Eigen::ArrayXd surface_laplacian(const SurfaceGeometry& geom, const Eigen::ArrayXd& field);

// Spacelike margin of a state (no full geometry); minimum over nodes.
double spacelike_margin(const SyncChart& chart, const GraphState& state);

} // namespace pmcf
