// Parametric-surface geometry oracle: tangents and normal derivatives by
// central differences on the parameter grid, curvature via chart
// Christoffels.  Independent of the graph engine by construction.
#include "pmcf/embedding.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace pmcf {

Eigen::Index ParameterGrid::flatten(const std::vector<Eigen::Index>& idx) const {
    Eigen::Index flat = 0;
    for (std::size_t d = 0; d < shape.size(); ++d) flat = flat * shape[d] + idx[d];
    return flat;
}

std::vector<Eigen::Index> ParameterGrid::unflatten(Eigen::Index flat) const {
    std::vector<Eigen::Index> idx(shape.size());
    for (std::size_t d = shape.size(); d-- > 0;) {
        idx[d] = flat % shape[d];
        flat /= shape[d];
    }
    return idx;
}

Vec ParameterGrid::params_at(const std::vector<Eigen::Index>& idx) const {
    Vec p(n);
    for (int d = 0; d < n; ++d) p[d] = axes[d][idx[d]];
    return p;
}

bool ParameterGrid::neighbor(const std::vector<Eigen::Index>& idx, int axis, int dir,
                             Eigen::Index& flat_out) const {
    std::vector<Eigen::Index> nb = idx;
    nb[axis] += dir;
    if (periodic[axis]) {
        nb[axis] = (nb[axis] + shape[axis]) % shape[axis];
    } else if (nb[axis] < 0 || nb[axis] >= shape[axis]) {
        return false;
    }
    flat_out = flatten(nb);
    return true;
}

ParameterGrid ParameterGrid::line(Eigen::Index nodes, double lo, double hi) {
    if (nodes < 3) throw ValidationError("ParameterGrid::line: need at least 3 nodes");
    std::vector<Eigen::ArrayXd> axes{Eigen::ArrayXd::LinSpaced(nodes, lo, hi)};
    return product(axes, {false});
}

ParameterGrid ParameterGrid::product(const std::vector<Eigen::ArrayXd>& axes,
                                     const std::vector<bool>& periodic) {
    if (axes.empty() || axes.size() != periodic.size())
        throw ValidationError("ParameterGrid::product: axis/periodicity mismatch");
    ParameterGrid g;
    g.n = int(axes.size());
    g.axes = axes;
    g.periodic = periodic;
    for (const auto& ax : axes) {
        if (ax.size() < 2) throw ValidationError("ParameterGrid::product: axis too short");
        g.shape.push_back(ax.size());
        g.h.push_back(ax[1] - ax[0]);
    }
    return g;
}

EmbeddedGeometry embedding_geometry(const ChartSpec& chart, const ParameterGrid& grid,
                                    const EmbeddingMap& map) {
    const Eigen::Index total = grid.total();
    const int n = grid.n;
    const int dim = chart.dim;
    if (dim != n + 1)
        throw ValidationError("embedding_geometry: surface dimension must be chart dim - 1");

    EmbeddedGeometry out;
    out.grid = grid;
    out.point.resize(std::size_t(total));
    out.gamma.resize(std::size_t(total));
    out.gamma_inv.resize(std::size_t(total));
    out.nu.resize(std::size_t(total));
    out.A.assign(std::size_t(total), Mat());
    out.H = Eigen::ArrayXd::Constant(total, std::numeric_limits<double>::quiet_NaN());
    out.kappa = Eigen::ArrayXd::Constant(total, std::numeric_limits<double>::quiet_NaN());
    out.u = Eigen::ArrayXd::Zero(total);
    out.interior.assign(std::size_t(total), false);

    // Cache the mapped points, then differentiate the cached table.
    for (Eigen::Index f = 0; f < total; ++f) {
        const Vec prm = grid.params_at(grid.unflatten(f));
        Vec z = map(prm);
        if (z.size() != dim)
            throw ValidationError("embedding_geometry: map returned wrong-dimension point");
        out.point[std::size_t(f)] = std::move(z);
    }

    // Tangent along one axis at one node: central where possible, one-sided
    // at non-periodic edges.  The edge stencil is third-order (four points)
    // on purpose: interior curvature takes a central difference of the
    // normal field across the edge node, so an edge-normal error of O(h^2)
    // with a stencil-dependent coefficient would leave O(h) in H one row in.
    // O(h^3) edge tangents keep the normal-field error uniformly O(h^2).
    auto tangent = [&](const std::vector<Eigen::Index>& idx, Eigen::Index flat, int axis) -> Vec {
        Eigen::Index prev = 0, next = 0;
        const bool has_prev = grid.neighbor(idx, axis, -1, prev);
        const bool has_next = grid.neighbor(idx, axis, +1, next);
        const double h = grid.h[axis];
        if (has_prev && has_next)
            return (out.point[std::size_t(next)] - out.point[std::size_t(prev)]) / (2.0 * h);
        const int dir = has_next ? +1 : -1;
        const double sgn = has_next ? 1.0 : -1.0;
        auto ahead = [&](Eigen::Index k) {
            std::vector<Eigen::Index> ik = idx;
            ik[axis] += dir * k;
            return out.point[std::size_t(grid.flatten(ik))];
        };
        if (grid.shape[axis] >= 4) {
            return sgn *
                   (-11.0 * ahead(0) + 18.0 * ahead(1) - 9.0 * ahead(2) + 2.0 * ahead(3)) /
                   (6.0 * h);
        }
        return sgn * (-3.0 * ahead(0) + 4.0 * ahead(1) - ahead(2)) / (2.0 * h);
    };

    std::vector<Mat> tangents;  // rows: e_i^a
    tangents.resize(std::size_t(total));

    for (Eigen::Index f = 0; f < total; ++f) {
        const auto idx = grid.unflatten(f);
        const Vec& z = out.point[std::size_t(f)];
        const Mat G = metric_at(chart, z);

        Mat E(n, dim);
        for (int d = 0; d < n; ++d) E.row(d) = tangent(idx, f, d).transpose();
        tangents[std::size_t(f)] = E;

        Mat gamma = E * G * E.transpose();
        gamma = 0.5 * (gamma + gamma.transpose());
        Eigen::LLT<Mat> llt(gamma);
        if (llt.info() != Eigen::Success) {
            std::ostringstream os;
            os << "embedding_geometry: induced metric not positive definite at flat index " << f;
            throw NotSpacelike(os.str());
        }
        out.gamma[std::size_t(f)] = gamma;
        out.gamma_inv[std::size_t(f)] = gamma.inverse();

        // Normal: nonzero kernel vector of the n x (n+1) system (E G) nu = 0.
        Eigen::FullPivLU<Mat> lu(E * G);
        if (lu.dimensionOfKernel() != 1)
            throw OrientationError(
                "embedding_geometry: normal space is not one-dimensional (degenerate tangents)");
        Vec nu = lu.kernel().col(0);
        const double s2 = nu.dot(G * nu);
        if (!(s2 < 0.0))
            throw NotSpacelike("embedding_geometry: normal direction is not timelike");
        nu /= std::sqrt(-s2);
        const Vec fut = chart.future_at(z);
        if (nu.dot(G * fut) > 0.0) nu = -nu;
        out.nu[std::size_t(f)] = nu;

        if (chart.time_function) {
            out.u[f] = chart.time_function->tau(z);
            out.kappa[f] = -nu.dot(G * chart.time_function->frame(z));
        } else {
            const double ff = fut.dot(G * fut);
            if (ff < 0.0) out.kappa[f] = -nu.dot(G * fut) / std::sqrt(-ff);
        }
    }

    // Second pass: A_ij = <grad_{e_i} nu, e_j> on nodes with full stencils.
    for (Eigen::Index f = 0; f < total; ++f) {
        const auto idx = grid.unflatten(f);
        bool interior = true;
        for (int d = 0; d < n && interior; ++d) {
            Eigen::Index tmp;
            interior = grid.neighbor(idx, d, -1, tmp) && grid.neighbor(idx, d, +1, tmp);
        }
        if (!interior) continue;

        const Vec& z = out.point[std::size_t(f)];
        const Mat G = metric_at(chart, z);
        const Tensor3 Gam = christoffel_at(chart, z);
        const Mat& E = tangents[std::size_t(f)];
        const Vec& nu = out.nu[std::size_t(f)];

        Mat A(n, n);
        for (int i = 0; i < n; ++i) {
            Eigen::Index prev = 0, next = 0;
            grid.neighbor(idx, i, -1, prev);
            grid.neighbor(idx, i, +1, next);
            // The normal field on centered nodes carries one smooth O(h^2)
            // error coefficient; an edge node carries a different one, and a
            // centered difference straddling it would keep the mismatch / 2h
            // = O(h).  Next to an edge, difference over centered nodes only.
            const auto at_edge = [&](Eigen::Index k) {
                const auto kidx = grid.unflatten(k);
                return !grid.periodic[std::size_t(i)] &&
                       (kidx[std::size_t(i)] == 0 ||
                        kidx[std::size_t(i)] == grid.shape[std::size_t(i)] - 1);
            };
            Vec dnu;
            const auto shifted = [&](Eigen::Index steps) {
                auto sidx = idx;
                sidx[std::size_t(i)] += steps;
                return grid.flatten(sidx);
            };
            if (at_edge(prev) && grid.shape[std::size_t(i)] >= 4) {
                dnu = (-3.0 * out.nu[std::size_t(f)] + 4.0 * out.nu[std::size_t(next)] -
                       out.nu[std::size_t(shifted(2))]) /
                      (2.0 * grid.h[i]);
            } else if (at_edge(next) && grid.shape[std::size_t(i)] >= 4) {
                dnu = (3.0 * out.nu[std::size_t(f)] - 4.0 * out.nu[std::size_t(prev)] +
                       out.nu[std::size_t(shifted(-2))]) /
                      (2.0 * grid.h[i]);
            } else {
                dnu = (out.nu[std::size_t(next)] - out.nu[std::size_t(prev)]) /
                      (2.0 * grid.h[i]);
            }
            Vec cov = dnu;  // (grad_{e_i} nu)^a = d_i nu^a + Gamma^a_{cd} e_i^c nu^d
            for (int a = 0; a < dim; ++a) {
                double s = 0.0;
                for (int c = 0; c < dim; ++c)
                    for (int dd = 0; dd < dim; ++dd) s += Gam(a, c, dd) * E(i, c) * nu[dd];
                cov[a] += s;
            }
            for (int j = 0; j < n; ++j) A(i, j) = cov.dot(G * E.row(j).transpose());
        }
        A = 0.5 * (A + A.transpose()).eval();
        out.A[std::size_t(f)] = A;
        out.H[f] = (out.gamma_inv[std::size_t(f)] * A).trace();
        out.interior[std::size_t(f)] = true;
    }
    return out;
}

} // namespace pmcf
