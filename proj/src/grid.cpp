// Spatial grid factories and finite-difference derivative kernels.
#include "pmcf/grid.hpp"

#include <cmath>

namespace pmcf {

namespace {

void require_nodes(Eigen::Index nodes) {
    if (nodes < 9) throw ValidationError("grid: at least 9 nodes required");
}

} // namespace

SpatialGrid SpatialGrid::radial_uniform(int n, Eigen::Index nodes, double r_max) {
    require_nodes(nodes);
    if (n < 1) throw ValidationError("grid: dimension must be >= 1");
    if (!(r_max > 0.0)) throw ValidationError("grid: r_max must be positive");
    SpatialGrid g;
    g.n = n;
    g.topology = Topology::radial;
    g.nodes = nodes;
    g.r_max = r_max;
    g.h = r_max / double(nodes - 1);
    g.xi = Eigen::ArrayXd::LinSpaced(nodes, 0.0, r_max);
    g.r = g.xi;
    g.J = Eigen::ArrayXd::Ones(nodes);
    g.Jp = Eigen::ArrayXd::Zero(nodes);
    return g;
}

SpatialGrid SpatialGrid::radial_sinh(int n, Eigen::Index nodes, double r_max, double scale) {
    require_nodes(nodes);
    if (n < 1) throw ValidationError("grid: dimension must be >= 1");
    if (!(r_max > 0.0)) throw ValidationError("grid: r_max must be positive");
    if (!(scale > 0.0)) throw ValidationError("grid: stretch scale must be positive");
    SpatialGrid g;
    g.n = n;
    g.topology = Topology::radial;
    g.nodes = nodes;
    g.r_max = r_max;
    const double xi_max = scale * std::asinh(r_max / scale);
    g.h = xi_max / double(nodes - 1);
    g.xi = Eigen::ArrayXd::LinSpaced(nodes, 0.0, xi_max);
    g.r = scale * (g.xi / scale).sinh();
    g.J = (g.xi / scale).cosh();
    g.Jp = (g.xi / scale).sinh() / scale;
    g.r[0] = 0.0;
    g.r[nodes - 1] = r_max;
    return g;
}

SpatialGrid SpatialGrid::radial_sinh_axis(int n, Eigen::Index nodes, double r_max, double scale,
                                          double axis_dilation) {
    require_nodes(nodes);
    if (n < 1) throw ValidationError("grid: dimension must be >= 1");
    if (!(r_max > 0.0)) throw ValidationError("grid: r_max must be positive");
    if (!(scale > 0.0)) throw ValidationError("grid: stretch scale must be positive");
    if (!(axis_dilation >= 1.0)) throw ValidationError("grid: axis dilation must be >= 1");
    SpatialGrid g;
    g.n = n;
    g.topology = Topology::radial;
    g.nodes = nodes;
    g.r_max = r_max;
    const double d = axis_dilation;
    const double xi_max = scale * std::asinh(r_max / (d * scale));
    g.h = xi_max / double(nodes - 1);
    g.xi = Eigen::ArrayXd::LinSpaced(nodes, 0.0, xi_max);
    g.r = d * scale * (g.xi / scale).sinh();
    g.J = d * (g.xi / scale).cosh();
    g.Jp = d * (g.xi / scale).sinh() / scale;
    g.r[0] = 0.0;
    g.r[nodes - 1] = r_max;
    return g;
}

SpatialGrid SpatialGrid::box(Eigen::Index nodes, double x_min, double x_max, bool periodic_topology) {
    require_nodes(nodes);
    if (!(x_max > x_min)) throw ValidationError("grid: x_max must exceed x_min");
    SpatialGrid g;
    g.n = 1;
    g.topology = periodic_topology ? Topology::box_periodic : Topology::box_dirichlet;
    g.nodes = nodes;
    g.r_max = x_max;
    const double L = x_max - x_min;
    if (periodic_topology) {
        // The node at x_max is identified with x_min, so spacing is L/nodes.
        g.h = L / double(nodes);
        g.xi = Eigen::ArrayXd::LinSpaced(nodes, x_min, x_max - g.h);
    } else {
        g.h = L / double(nodes - 1);
        g.xi = Eigen::ArrayXd::LinSpaced(nodes, x_min, x_max);
    }
    g.r = g.xi;
    g.J = Eigen::ArrayXd::Ones(nodes);
    g.Jp = Eigen::ArrayXd::Zero(nodes);
    return g;
}

void grid_derivatives(const SpatialGrid& grid, const Eigen::ArrayXd& f, Eigen::ArrayXd& fp,
                      Eigen::ArrayXd& fpp, bool even_at_origin) {
    const Eigen::Index N = grid.nodes;
    if (f.size() != N) throw ValidationError("grid_derivatives: field size mismatch");
    fp.resize(N);
    fpp.resize(N);
    const double h = grid.h;
    const double h2 = h * h;

    // Derivatives with respect to the uniform generator coordinate xi.
    Eigen::ArrayXd fx(N), fxx(N);
    if (grid.topology == Topology::box_periodic) {
        for (Eigen::Index i = 0; i < N; ++i) {
            Eigen::Index ip = (i + 1) % N;
            Eigen::Index im = (i + N - 1) % N;
            fx[i] = (f[ip] - f[im]) / (2.0 * h);
            fxx[i] = (f[ip] - 2.0 * f[i] + f[im]) / h2;
        }
    } else {
        for (Eigen::Index i = 1; i + 1 < N; ++i) {
            fx[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
            fxx[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
        }
        if (grid.topology == Topology::radial && even_at_origin) {
            // Even reflection through r = 0: f(-h) = f(h).
            fx[0] = 0.0;
            fxx[0] = 2.0 * (f[1] - f[0]) / h2;
        } else {
            fx[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
            fxx[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
        }
        fx[N - 1] = (3.0 * f[N - 1] - 4.0 * f[N - 2] + f[N - 3]) / (2.0 * h);
        fxx[N - 1] = (2.0 * f[N - 1] - 5.0 * f[N - 2] + 4.0 * f[N - 3] - f[N - 4]) / h2;
    }

    // Chain rule to the physical coordinate: f' = f_xi / J,
    // f'' = (f_xixi - f_xi * Jp / J) / J^2.
    fp = fx / grid.J;
    fpp = (fxx - fx * grid.Jp / grid.J) / (grid.J * grid.J);
}

} // namespace pmcf
