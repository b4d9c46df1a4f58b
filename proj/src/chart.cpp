// Chart-core implementation: metric/connection/curvature evaluation with
// exact-dual or finite-difference derivative paths, reference norms, tilt.
#include "pmcf/chart.hpp"

#include <cmath>
#include <sstream>

namespace pmcf {

namespace {

std::string point_str(const Vec& p) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ")";
    return os.str();
}

void require_valid(const ChartSpec& chart, const Vec& point, const char* who) {
    if (point.size() != chart.dim)
        throw DomainError(std::string(who) + ": point has wrong dimension");
    if (!chart.valid_at(point))
        throw DomainError(std::string(who) + ": point " + point_str(point) +
                          " outside chart validity region");
}

// Per-coordinate FD step: relative step scaled by |x^a| + 1.
double fd_h(const ChartSpec& chart, const Vec& p, int a) {
    return chart.fd_step * (std::abs(p[a]) + 1.0);
}

Mat raw_metric(const ChartSpec& chart, const Vec& point, const char* who) {
    require_valid(chart, point, who);
    Mat G = chart.metric(point);
    double scale = G.cwiseAbs().maxCoeff();
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw SignatureError(std::string(who) + ": metric not finite at " + point_str(point));
    if ((G - G.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw SignatureError(std::string(who) + ": metric not symmetric at " + point_str(point));
    return 0.5 * (G + G.transpose());
}

void check_signature(const Mat& G, const Vec& point, const char* who) {
    Eigen::SelfAdjointEigenSolver<Mat> es(G, Eigen::EigenvaluesOnly);
    const Vec& ev = es.eigenvalues();
    double tol = 1e-10 * ev.cwiseAbs().maxCoeff();
    int neg = 0, pos = 0;
    for (int i = 0; i < ev.size(); ++i) {
        if (ev[i] < -tol)
            ++neg;
        else if (ev[i] > tol)
            ++pos;
    }
    if (neg != 1 || pos != G.rows() - 1) {
        std::ostringstream os;
        os << who << ": metric at " << point_str(point) << " has signature (" << neg
           << " negative, " << pos << " positive), expected (1, " << G.rows() - 1 << ")";
        throw SignatureError(os.str());
    }
}

// First derivatives dG[a](i,j) = d_a G_ij: exact when the dual path exists.
std::vector<Mat> metric_derivatives(const ChartSpec& chart, const Vec& p) {
    const int d = chart.dim;
    std::vector<Mat> dG(d);
    if (chart.metric_d1) {
        for (int a = 0; a < d; ++a) {
            PointOf<Dual1> pd(d);
            for (int i = 0; i < d; ++i) pd[i] = Dual1(p[i], i == a ? 1.0 : 0.0);
            MatOf<Dual1> Gd = chart.metric_d1(pd);
            dG[a] = Mat(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) dG[a](i, j) = Gd(i, j).b;
        }
        return dG;
    }
    for (int a = 0; a < d; ++a) {
        double h = fd_h(chart, p, a);
        Vec pp = p, pm = p;
        pp[a] += h;
        pm[a] -= h;
        if (!chart.valid_at(pp) || !chart.valid_at(pm))
            throw DomainError("christoffel_at: FD stencil exits validity region at " +
                              point_str(p));
        dG[a] = (chart.metric(pp) - chart.metric(pm)) / (2.0 * h);
    }
    return dG;
}

// Second derivatives ddG(a,b) = d_a d_b G_ij, exact (nested duals).
Mat metric_second_derivative(const ChartSpec& chart, const Vec& p, int a, int b) {
    const int d = chart.dim;
    PointOf<Dual2> pd(d);
    for (int i = 0; i < d; ++i) {
        Dual2 x(Dual1(p[i], i == b ? 1.0 : 0.0), Dual1(i == a ? 1.0 : 0.0, 0.0));
        pd[i] = x;
    }
    MatOf<Dual2> Gd = chart.metric_d2(pd);
    Mat out(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out(i, j) = d2_of(Gd(i, j));
    return out;
}

Tensor3 christoffel_from(const Mat& Ginv, const std::vector<Mat>& dG) {
    const int d = Ginv.rows();
    Tensor3 gamma(d);
    for (int e = 0; e < d; ++e)
        for (int c = 0; c < d; ++c)
            for (int dd = c; dd < d; ++dd) {
                double s = 0.0;
                for (int f = 0; f < d; ++f)
                    s += Ginv(e, f) * (dG[c](f, dd) + dG[dd](f, c) - dG[f](c, dd));
                s *= 0.5;
                gamma(e, c, dd) = s;
                gamma(e, dd, c) = s;
            }
    return gamma;
}

} // namespace

Mat metric_at(const ChartSpec& chart, const Vec& point) {
    Mat G = raw_metric(chart, point, "metric_at");
    check_signature(G, point, "metric_at");
    return G;
}

Tensor3 christoffel_at(const ChartSpec& chart, const Vec& point) {
    require_valid(chart, point, "christoffel_at");
    Mat G = raw_metric(chart, point, "christoffel_at");
    Mat Ginv = G.inverse();
    return christoffel_from(Ginv, metric_derivatives(chart, point));
}

Tensor4 riemann_at(const ChartSpec& chart, const Vec& point) {
    require_valid(chart, point, "riemann_at");
    const int d = chart.dim;
    Mat G = raw_metric(chart, point, "riemann_at");
    Mat Ginv = G.inverse();

    std::vector<Mat> dG = metric_derivatives(chart, point);
    Tensor3 gamma = christoffel_from(Ginv, dG);

    // dgamma[b](e, c, d) = d_b Gamma^e_{cd}
    std::vector<Tensor3> dgamma(d, Tensor3(d));
    if (chart.metric_d2) {
        for (int b = 0; b < d; ++b) {
            Mat dGinv = -Ginv * dG[b] * Ginv;
            std::vector<Mat> ddG(d);
            for (int a = 0; a < d; ++a) ddG[a] = metric_second_derivative(chart, point, b, a);
            for (int e = 0; e < d; ++e)
                for (int c = 0; c < d; ++c)
                    for (int dd = c; dd < d; ++dd) {
                        double s = 0.0;
                        for (int f = 0; f < d; ++f) {
                            s += dGinv(e, f) * (dG[c](f, dd) + dG[dd](f, c) - dG[f](c, dd));
                            s += Ginv(e, f) * (ddG[c](f, dd) + ddG[dd](f, c) - ddG[f](c, dd));
                        }
                        s *= 0.5;
                        dgamma[b](e, c, dd) = s;
                        dgamma[b](e, dd, c) = s;
                    }
        }
    } else {
        for (int b = 0; b < d; ++b) {
            double h = fd_h(chart, point, b);
            Vec pp = point, pm = point;
            pp[b] += h;
            pm[b] -= h;
            if (!chart.valid_at(pp) || !chart.valid_at(pm))
                throw DomainError("riemann_at: FD stencil exits validity region at " +
                                  point_str(point));
            Tensor3 gp = christoffel_at(chart, pp);
            Tensor3 gm = christoffel_at(chart, pm);
            for (int e = 0; e < d; ++e)
                for (int c = 0; c < d; ++c)
                    for (int dd = 0; dd < d; ++dd)
                        dgamma[b](e, c, dd) = (gp(e, c, dd) - gm(e, c, dd)) / (2.0 * h);
        }
    }

    // R^e_{cab} = d_a Gamma^e_{bc} - d_b Gamma^e_{ac}
    //           + Gamma^e_{af} Gamma^f_{bc} - Gamma^e_{bf} Gamma^f_{ac}
    Tensor4 R(d);
    for (int e = 0; e < d; ++e)
        for (int c = 0; c < d; ++c)
            for (int a = 0; a < d; ++a)
                for (int b = a + 1; b < d; ++b) {
                    double s = dgamma[a](e, b, c) - dgamma[b](e, a, c);
                    for (int f = 0; f < d; ++f)
                        s += gamma(e, a, f) * gamma(f, b, c) - gamma(e, b, f) * gamma(f, a, c);
                    R(e, c, a, b) = s;
                    R(e, c, b, a) = -s;
                }

    // Lower the first index: R_{ecab} = G_{ed} R^d_{cab}.
    Tensor4 Rl(d);
    for (int e = 0; e < d; ++e)
        for (int c = 0; c < d; ++c)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                    double s = 0.0;
                    for (int dd = 0; dd < d; ++dd) s += G(e, dd) * R(dd, c, a, b);
                    Rl(e, c, a, b) = s;
                }

    // Enforce the antisymmetries by averaging (FD noise removal).
    Tensor4 out(d);
    for (int e = 0; e < d; ++e)
        for (int c = 0; c < d; ++c)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                    out(e, c, a, b) = 0.25 * (Rl(e, c, a, b) - Rl(c, e, a, b) -
                                              Rl(e, c, b, a) + Rl(c, e, b, a));
    return out;
}

Mat ricci_from_riemann(const Mat& G, const Tensor4& R) {
    const int d = G.rows();
    Mat Ginv = G.inverse();
    Mat ric = Mat::Zero(d, d);
    for (int b = 0; b < d; ++b)
        for (int dd = 0; dd < d; ++dd) {
            double s = 0.0;
            for (int a = 0; a < d; ++a)
                for (int c = 0; c < d; ++c) s += Ginv(a, c) * R(a, b, c, dd);
            ric(b, dd) = s;
        }
    return ric;
}

double kretschmann_scalar(const Mat& G, const Tensor4& R) {
    const int d = G.rows();
    Mat Gi = G.inverse();
    double k = 0.0;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                for (int e = 0; e < d; ++e) {
                    // (R with all indices raised)_{abce}
                    double raised = 0.0;
                    for (int p = 0; p < d; ++p)
                        for (int q = 0; q < d; ++q)
                            for (int r = 0; r < d; ++r)
                                for (int s = 0; s < d; ++s)
                                    raised += Gi(a, p) * Gi(b, q) * Gi(c, r) * Gi(e, s) *
                                              R(p, q, r, s);
                    k += raised * R(a, b, c, e);
                }
    return k;
}

Mat tidal_matrix(const ChartSpec& chart, const Vec& point) {
    if (!chart.synchronous)
        throw DomainError("tidal_matrix: chart is not synchronous");
    Tensor4 R = riemann_at(chart, point);
    const int n = chart.dim - 1;
    // R^0_{i0j} = G^{00} R_{0i0j} = -R_{0i0j} for a unit-lapse chart.
    Mat tidal(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) tidal(i, j) = -R(0, i + 1, 0, j + 1);
    return tidal;
}

ReferenceFrame make_reference_frame(const ChartSpec& chart, const Vec& point, const Vec& T) {
    ReferenceFrame f;
    f.base_point = point;
    f.T_components = T;
    f.G = metric_at(chart, point);
    double tt = T.dot(f.G * T);
    if (std::abs(tt + 1.0) > 1e-8)
        throw OrientationError("make_reference_frame: T is not unit timelike (G(T,T) = " +
                               std::to_string(tt) + ")");
    Vec fut = chart.future_at(point);
    if (T.dot(f.G * fut) >= 0.0)
        throw OrientationError("make_reference_frame: T is past-directed");
    Vec omega = f.G * T;
    f.G_E = f.G + 2.0 * omega * omega.transpose();
    Eigen::LLT<Mat> llt(f.G_E);
    if (llt.info() != Eigen::Success)
        throw SignatureError("make_reference_frame: G_E not positive definite");
    f.G_E_inv = f.G_E.inverse();
    return f;
}

double reference_norm(const ReferenceFrame& frame, const Vec& vector_upper) {
    return std::sqrt(vector_upper.dot(frame.G_E * vector_upper));
}

double reference_norm(const ReferenceFrame& frame, const Mat& tensor_lower) {
    const Mat& Ei = frame.G_E_inv;
    return std::sqrt(((Ei * tensor_lower * Ei).cwiseProduct(tensor_lower)).sum());
}

double reference_norm(const ReferenceFrame& frame, const Tensor3& t) {
    const Mat& Ei = frame.G_E_inv;
    const int d = t.dim();
    double n2 = 0.0;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                for (int p = 0; p < d; ++p)
                    for (int q = 0; q < d; ++q)
                        for (int r = 0; r < d; ++r)
                            n2 += Ei(a, p) * Ei(b, q) * Ei(c, r) * t(a, b, c) * t(p, q, r);
    return std::sqrt(std::max(0.0, n2));
}

double reference_norm(const ReferenceFrame& frame, const Tensor4& t) {
    const Mat& Ei = frame.G_E_inv;
    const int d = t.dim();
    double n2 = 0.0;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                for (int e = 0; e < d; ++e) {
                    double raised = 0.0;
                    for (int p = 0; p < d; ++p)
                        for (int q = 0; q < d; ++q)
                            for (int r = 0; r < d; ++r)
                                for (int s = 0; s < d; ++s)
                                    raised += Ei(a, p) * Ei(b, q) * Ei(c, r) * Ei(e, s) *
                                              t(p, q, r, s);
                    n2 += raised * t(a, b, c, e);
                }
    return std::sqrt(std::max(0.0, n2));
}

double tilt_factor(const Mat& G, const Vec& T, const Vec& Tprime) {
    double tt = T.dot(G * T);
    double pp = Tprime.dot(G * Tprime);
    if (std::abs(tt + 1.0) > 1e-6 || std::abs(pp + 1.0) > 1e-6)
        throw Error("tilt_factor: arguments must be unit timelike");
    double v = -T.dot(G * Tprime);
    if (v < 0.0)
        throw OrientationError("tilt_factor: opposite time orientations (-G(T,T') = " +
                               std::to_string(v) + ")");
    return v;
}

} // namespace pmcf
