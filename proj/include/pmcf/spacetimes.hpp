// Concrete charts, frames, surfaces and prescribed-curvature fields:
// Minkowski (with the hyperboloid time function and the explicit monotone
// Hcal example), the Milne-type expanding synchronous chart, the
// Schwarzschild exterior in retarded null coordinates, and the LST surface
// family near null infinity.
#pragma once

#include "pmcf/embedding.hpp"
#include "pmcf/flow.hpp"
#include "pmcf/surface.hpp"

namespace pmcf {

// Flat synchronous chart of R^{1,n} in Cartesian coordinates (t, x^1..x^n).
ChartSpec make_minkowski_chart(int n);

// Engine view of the same spacetime (R = Shat = 1, static fast path).
SyncChart make_minkowski_sync_chart(int n);

// Expanding synchronous chart G = -dt^2 + ((tau0+t)/tau0)^2 g_H(tau0): the
// Gaussian normal chart of Minkowski around the hyperboloid S_tau0, in graph
// radial coordinates.  Constant-t slices have H = n/(tau0+t) exactly; the
// metric is t-dependent, so it exercises every d_t g term.
SyncChart make_milne_sync_chart(int n, double tau0);

// w(x) = sqrt(tau0^2 + r^2) sampled on the grid.
GraphState hyperboloid_profile(double tau0, std::shared_ptr<const SpatialGrid> grid);

struct HyperboloidFrame {
    // tau = sqrt(t^2 - r^2) on the interior of the future cone; alpha = 1;
    // T = (t d_t + r d_r)/tau; rho = log(r + 2).
    TimeFunction time_function;                    // tau, alpha, T as chart fields
    std::function<double(const Vec&)> rho;
};

// Frame evaluators throw DomainError outside the future cone t > r.
HyperboloidFrame make_hyperboloid_frame(int n);

// Hcal(t,x) = 2 - f with f = exp(-4t + sqrt(r^2+1)); analytic gradient;
// monotone along every future timelike direction.
PrescribedCurvatureField make_example_prescribed_h(int n);

// Constant Hcal field.
PrescribedCurvatureField make_constant_h(double value, int n);

// Hcal identically zero (pure mean curvature flow).
PrescribedCurvatureField make_zero_h(int n);

// Schwarzschild exterior in retarded null coordinates (theta, phi, x, v),
// x = 1/r in (0, 1/(2m)):  G = -(1-2mx) dv^2 + 2 x^{-2} dv dx + x^{-2} sigma.
// m = 0 is the flat limit (validity x > 0); m < 0 is rejected.
ChartSpec make_schwarzschild_chart(double m);

// Tortoise coordinate r_* = r + 2m log(r/(2m) - 1) (r > 2m; r_* = r at m=0).
double schwarzschild_rstar(double m, double r);

struct LstSurface {
    double tau = 1.0;
    std::function<double(double theta)> f;           // axisymmetric cut function
    std::function<double(double theta)> grad_f_sq;   // |grad f|^2 on S^2
    std::function<double(double theta)> lap_f;       // Delta f on S^2
    std::function<double(double theta)> grad_pair;   // <grad |grad f|^2, grad f>

    double phi(double theta) const { return -0.5 * (tau * tau + grad_f_sq(theta)); }
    double psi(double theta) const {
        return 0.5 * (tau * tau * lap_f(theta) + grad_pair(theta));
    }
    // P(x, theta) = f + x phi + x^2 psi / 2; the surface is v = -P.
    double P(double x, double theta) const {
        return f(theta) + x * phi(theta) + 0.5 * x * x * psi(theta);
    }
};

LstSurface make_lst_surface(double tau);                   // f = 0
LstSurface make_lst_surface_cos_theta(double tau, double amplitude = 1.0);  // f = a cos(theta)

// Parameter grid (theta, phi, x) on [theta_min, pi - theta_min] x [0, 2pi) x
// [x_lo, x_hi] and the embedding map (theta, phi, x) -> (theta, phi, x, -P),
// ready for embedding_geometry against make_schwarzschild_chart.
EmbeddingSamples lst_embedding(const LstSurface& surface, int n_theta, int n_phi,
                               double x_lo, double x_hi, int n_x,
                               double theta_min = 1e-2);

} // namespace pmcf
