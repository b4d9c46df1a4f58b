// Lorentz background charts: metric evaluation, connection, curvature,
// reference Riemannian norms and tilt factors.
//
// A chart carries the metric as a plain-double functor plus optional
// dual-number functors for exact first and second derivatives.  Factories
// built from a scalar-generic functor fill all three slots at once; charts
// constructed with only the double slot fall back to central finite
// differences with a per-coordinate relative step.
#pragma once

#include <functional>
#include <optional>
#include <string>

#include "pmcf/dual.hpp"
#include "pmcf/errors.hpp"
#include "pmcf/tensors.hpp"

namespace pmcf {

template <typename S>
using PointOf = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <typename S>
using MatOf = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

// Diagnostic time function: tau with its lapse and unit future frame T.
struct TimeFunction {
    std::function<double(const Vec&)> tau;
    std::function<double(const Vec&)> lapse;   // alpha, alpha^{-2} = -<grad tau, grad tau>
    std::function<Vec(const Vec&)> frame;      // T = -alpha * grad tau (components, upper index)
};

struct ChartSpec {
    int dim = 0;  // spacetime dimension n+1
    std::function<Mat(const Vec&)> metric;
    // Optional exact-derivative paths (dual scalars); empty => FD fallback.
    std::function<MatOf<Dual1>(const PointOf<Dual1>&)> metric_d1;
    std::function<MatOf<Dual2>(const PointOf<Dual2>&)> metric_d2;
    bool synchronous = false;          // G = -dt^2 + g(t,x) with x^0 = t
    std::optional<TimeFunction> time_function;
    std::function<double(const Vec&)> proper_function;  // rho > 0; empty = absent
    double fd_step = 1e-4;             // relative FD step, scaled by |x^a| + 1
    std::function<bool(const Vec&)> validity;           // empty = everywhere valid
    int time_index = 0;                // coordinate whose axis is the declared future
    std::function<Vec(const Vec&)> future_field;        // empty = unit vector e_{time_index}

    bool valid_at(const Vec& p) const { return !validity || validity(p); }
    Vec future_at(const Vec& p) const {
        if (future_field) return future_field(p);
        Vec e = Vec::Zero(dim);
        e[time_index] = 1.0;
        return e;
    }
};

// Build a chart from one scalar-generic metric functor; registers the plain,
// first-derivative and second-derivative evaluation paths together.
template <typename F>
ChartSpec make_chart(int dim, F f) {
    ChartSpec c;
    c.dim = dim;
    c.metric = [f](const Vec& p) -> Mat { return f(p); };
    c.metric_d1 = [f](const PointOf<Dual1>& p) -> MatOf<Dual1> { return f(p); };
    c.metric_d2 = [f](const PointOf<Dual2>& p) -> MatOf<Dual2> { return f(p); };
    return c;
}

struct ReferenceFrame {
    Vec base_point;
    Vec T_components;  // future unit timelike vector (upper components)
    Mat G;             // chart metric at base_point
    Mat G_E;           // G + 2 omega (x) omega, omega = metric dual of T
    Mat G_E_inv;
};

// --- chart-core operations ---

// Metric at a point; symmetry and Lorentz signature are checked on every
// evaluation (relative eigenvalue tolerance 1e-10).
Mat metric_at(const ChartSpec& chart, const Vec& point);

// Christoffel symbols Gamma^a_{bc}; exact when the chart registered a dual
// path, central finite differences otherwise.
Tensor3 christoffel_at(const ChartSpec& chart, const Vec& point);

// Lowered Riemann tensor R_{abcd}; antisymmetry in the first and last index
// pairs is enforced by averaging.  Convention (documented once, tested in the
// foliation consistency suite):
//   R^e_{cab} = d_a Gamma^e_{bc} - d_b Gamma^e_{ac}
//             + Gamma^e_{af} Gamma^f_{bc} - Gamma^e_{bf} Gamma^f_{ac},
//   R_{ecab}  = G_{ed} R^d_{cab},
// so that the tidal operator entering the normal-foliation Riccati equation
// is +R^0_{i0j} for a synchronous chart.
Tensor4 riemann_at(const ChartSpec& chart, const Vec& point);

// Ricci tensor from a lowered Riemann tensor: Ric_{bd} = G^{ac} R_{abcd}
// with the raised pair contracted per the convention above (unit round
// sphere gives Ric_{phi,phi} = +sin^2 theta).
Mat ricci_from_riemann(const Mat& G, const Tensor4& R);

// Full-contraction curvature scalar R_{abcd} R^{abcd} (all indices raised
// with G^{-1}); convention-independent, used as an independent oracle.
double kretschmann_scalar(const Mat& G, const Tensor4& R);

// Tidal matrix R^0_{i0j} (spatial i,j) for synchronous charts; this is the
// curvature block the normal-foliation ODE consumes.
Mat tidal_matrix(const ChartSpec& chart, const Vec& point);

// Reference frame construction; throws OrientationError unless T is future
// unit timelike (tolerance 1e-8 on the unit condition).
ReferenceFrame make_reference_frame(const ChartSpec& chart, const Vec& point, const Vec& T);

// ||| . ||| norms with respect to G_E.  Vectors carry upper components and
// contract with G_E directly; rank-2..4 arrays are lower-index and contract
// with the inverse.
double reference_norm(const ReferenceFrame& frame, const Vec& vector_upper);
double reference_norm(const ReferenceFrame& frame, const Mat& tensor_lower);
double reference_norm(const ReferenceFrame& frame, const Tensor3& tensor_lower);
double reference_norm(const ReferenceFrame& frame, const Tensor4& tensor_lower);

// Tilt factor -G(T, T'); both arguments must be future unit timelike.
double tilt_factor(const Mat& G, const Vec& T, const Vec& Tprime);

} // namespace pmcf
