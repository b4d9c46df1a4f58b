// Gaussian-normal-foliation ODE system: per-node matrix Riccati integration
//   d_t g = 2A,   d_t A = Rbar + A g^{-1} A,
// with the comparison-envelope check e^{-2 b0 t} g0 <= g(t) <= e^{+2 b0 t} g0
// and |A|_{g(t)} <= b0, b0 = 2 sqrt(a0^2 + c0 v0^2).
#pragma once

#include <functional>
#include <vector>

#include "pmcf/chart.hpp"

namespace pmcf {

// Ambient curvature supplier: the tidal block Rbar_{ij}(t) at a node, given
// the current metric (some suppliers, like the isotropic Rbar = g example,
// need it).  For a synchronous chart this is tidal_matrix at (t, node).
using CurvatureSupplier = std::function<Mat(double t, int node, const Mat& g_current)>;

struct FoliationInit {
    std::vector<Mat> g0, A0;   // per node, symmetric
    double a0 = 0.0;           // initial sup |A|_{g0}
    double c0 = 0.0;           // curvature bound sup |||Rbar|||
    double v0 = 1.0;           // initial tilt bound
    double chart_extent = 1e30;  // the `a` in the guaranteed-window formula

    double b0() const;                  // 2 sqrt(a0^2 + c0 v0^2)
    double guaranteed_window(double window_constant = 1.0) const;
};

// sup over nodes of |A|_g (metric norm of a symmetric 2-tensor).
double sup_metric_norm(const std::vector<Mat>& A, const std::vector<Mat>& g);

struct FoliationSeries {
    FoliationInit init;
    std::vector<double> t;
    std::vector<std::vector<Mat>> g, A;  // [sample][node]
};

// Fixed-step RK4 integration, sampling every `sample_every` steps (and at
// t_end).  Throws DegenerateMetric when det g falls below 1e-12 of its
// initial value at any node, and ValidationError if t_end exceeds the
// guaranteed window without `override_window`.
FoliationSeries integrate_foliation(const FoliationInit& init, const CurvatureSupplier& Rbar,
                                    double t_end, double dt, int sample_every = 10,
                                    bool override_window = false,
                                    double window_constant = 1.0);

struct FoliationBoundsReport {
    bool all_pass = true;
    int failed_samples = 0;
    double worst_lower_margin = 1e300;   // min over samples of eig_min(g wrt g0) / e^{-2 b0 t} - 1
    double worst_upper_margin = 1e300;   // min over samples of 1 - eig_max(g wrt g0) / e^{+2 b0 t}
    double worst_A_margin = 1e300;       // min over samples of 1 - |A|_g / b0
};

// Envelope and |A| comparison for every sample in the series.
FoliationBoundsReport foliation_bounds_check(const FoliationSeries& series, double tol = 1e-9);

// Synchronous chart whose spatial metric is the integrated foliation of a
// radial data set: g(t, node) interpolated in t from a dense series (cubic
// Hermite; d_t g = 2A supplies exact slopes).  Used by the consistency check
// between this module and chart-core.
ChartSpec foliation_backed_chart(const FoliationSeries& dense_series,
                                 const std::vector<double>& node_r);

} // namespace pmcf
