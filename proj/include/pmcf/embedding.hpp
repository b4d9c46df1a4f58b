// General parametric-surface geometry in an arbitrary chart: tangents by
// central differences on a structured parameter grid, the future unit normal
// from orthogonality, and the second fundamental form via chart Christoffels.
// This pipeline shares no code with the graph engine and serves as its
// independent oracle.
#pragma once

#include <vector>

#include "pmcf/chart.hpp"

namespace pmcf {

struct ParameterGrid {
    int n = 0;                       // surface dimension
    std::vector<Eigen::Index> shape; // nodes per axis
    std::vector<double> h;           // spacing per axis
    std::vector<bool> periodic;      // per axis
    std::vector<Eigen::ArrayXd> axes;

    Eigen::Index total() const {
        Eigen::Index t = 1;
        for (auto s : shape) t *= s;
        return t;
    }
    Eigen::Index flatten(const std::vector<Eigen::Index>& idx) const;
    std::vector<Eigen::Index> unflatten(Eigen::Index flat) const;
    Vec params_at(const std::vector<Eigen::Index>& idx) const;
    // Node with idx[axis] +- 1 (periodic wrap where declared); valid=false at
    // a non-periodic edge.
    bool neighbor(const std::vector<Eigen::Index>& idx, int axis, int dir,
                  Eigen::Index& flat_out) const;

    static ParameterGrid line(Eigen::Index nodes, double lo, double hi);
    static ParameterGrid product(const std::vector<Eigen::ArrayXd>& axes,
                                 const std::vector<bool>& periodic);
};

using EmbeddingMap = std::function<Vec(const Vec& params)>;

struct EmbeddingSamples {
    ParameterGrid grid;
    EmbeddingMap map;
};

struct EmbeddedGeometry {
    ParameterGrid grid;
    std::vector<Vec> point;          // chart coordinates per node
    std::vector<Mat> gamma, gamma_inv;
    std::vector<Vec> nu;             // future unit normal (upper components)
    std::vector<Mat> A;              // valid on interior nodes only
    Eigen::ArrayXd H;                // NaN at nodes without a full stencil
    Eigen::ArrayXd kappa;            // tilt vs the chart's time function/future field
    Eigen::ArrayXd u;                // chart time function on the surface (0 if absent)
    std::vector<bool> interior;      // true where A and H are populated
};

// Throws NotSpacelike if the induced metric fails positive definiteness and
// OrientationError if no future normal can be determined.
EmbeddedGeometry embedding_geometry(const ChartSpec& chart, const ParameterGrid& grid,
                                    const EmbeddingMap& map);

} // namespace pmcf
