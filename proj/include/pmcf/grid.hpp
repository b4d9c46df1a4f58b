// Spatial grids for graph states: radial and 1D box topologies, with an
// optional analytic node-coordinate generator (sinh stretching) that keeps
// hyperboloidal problems uniformly parabolic.
//
// Nodes are uniform in a generator coordinate xi; the physical coordinate is
// r = r(xi) with Jacobian J = dr/dxi supplied analytically.  A uniform grid
// is the identity generator.
#pragma once

#include <memory>

#include <Eigen/Dense>

#include "pmcf/errors.hpp"

namespace pmcf {

enum class Topology { radial, box_dirichlet, box_periodic };

struct SpatialGrid {
    int n = 1;                 // spatial dimension of the surface
    Topology topology = Topology::radial;
    Eigen::Index nodes = 0;    // nodes per axis (1D engines: total nodes)
    double h = 0.0;            // uniform spacing in the generator coordinate
    Eigen::ArrayXd xi;         // generator coordinate samples
    Eigen::ArrayXd r;          // physical coordinate r(xi) (or x for boxes)
    Eigen::ArrayXd J;          // dr/dxi at nodes
    Eigen::ArrayXd Jp;         // dJ/dxi at nodes
    double r_max = 0.0;

    bool radial() const { return topology == Topology::radial; }
    bool periodic() const { return topology == Topology::box_periodic; }

    // Uniform radial grid on [0, r_max] with a node at r = 0.
    static SpatialGrid radial_uniform(int n, Eigen::Index nodes, double r_max);
    // Sinh-stretched radial grid: r = scale*sinh(xi/scale).  Near the origin
    // spacing matches the uniform xi spacing; toward r_max it coarsens, which
    // keeps the effective diffusion coefficient of hyperboloidal graphs O(1).
    static SpatialGrid radial_sinh(int n, Eigen::Index nodes, double r_max, double scale);
    // Sinh stretch with an extra axis dilation: r = d*scale*sinh(xi/scale),
    // J(0) = d.  With d = sqrt(n) the origin row's larger diffusion
    // coefficient (the angular second-order limit contributes n-1 there) no
    // longer dominates the explicit stability bound, so dt improves by ~n.
    static SpatialGrid radial_sinh_axis(int n, Eigen::Index nodes, double r_max, double scale,
                                        double axis_dilation);
    // 1D box on [x_min, x_max], Dirichlet or periodic.  For the periodic
    // topology the last node is the one before the wrap (spacing h = L/nodes).
    static SpatialGrid box(Eigen::Index nodes, double x_min, double x_max, bool periodic_topology);
};

struct GraphState {
    std::shared_ptr<const SpatialGrid> grid;
    Eigen::ArrayXd w;  // height sample per node (chart time units)
    double s = 0.0;    // flow time

    Eigen::Index nodes() const { return w.size(); }
};

// First and second physical-coordinate derivatives of a nodal field.
// Radial grids use the even-symmetry ghost at r = 0 when `even_at_origin`;
// Dirichlet ends use second-order one-sided stencils; periodic wraps.
void grid_derivatives(const SpatialGrid& grid, const Eigen::ArrayXd& f,
                      Eigen::ArrayXd& fp, Eigen::ArrayXd& fpp, bool even_at_origin);

} // namespace pmcf
