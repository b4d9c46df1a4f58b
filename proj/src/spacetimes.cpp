// Concrete spacetimes, frames, prescribed-curvature fields and the LST
// surface family.
#include "pmcf/spacetimes.hpp"

#include <cmath>
#include <sstream>

namespace pmcf {

namespace {

// Scalar-generic squared spatial radius of a chart point (t, x^1..x^n).
template <typename S>
S spatial_r2(const Eigen::Matrix<S, Eigen::Dynamic, 1>& p) {
    S r2 = p[1] * p[1];
    for (Eigen::Index i = 2; i < p.size(); ++i) r2 += p[i] * p[i];
    return r2;
}

} // namespace

ChartSpec make_minkowski_chart(int n) {
    auto f = [n]<typename S>(const Eigen::Matrix<S, Eigen::Dynamic, 1>&)
        -> Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> {
        Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> G =
            Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>::Zero(n + 1, n + 1);
        G(0, 0) = S(-1.0);
        for (int i = 1; i <= n; ++i) G(i, i) = S(1.0);
        return G;
    };
    ChartSpec c = make_chart(n + 1, f);
    c.synchronous = true;
    c.time_index = 0;
    return c;
}

SyncChart make_minkowski_sync_chart(int n) {
    SyncChart c;
    c.n = n;
    c.static_flat = true;
    c.full = make_minkowski_chart(n);
    c.name = "minkowski";
    return c;
}

SyncChart make_milne_sync_chart(int n, double tau0) {
    if (!(tau0 > 0.0)) throw ValidationError("milne chart: tau0 must be positive");
    SyncChart c;
    c.n = n;
    c.static_flat = false;
    c.name = "milne";

    // R = A^2 tau0^2/(tau0^2+r^2), Shat = A^2, A = (tau0+t)/tau0.
    c.eval = [tau0](double t, double r) -> RadialChartTerms {
        RadialChartTerms o;
        const double A = (tau0 + t) / tau0;
        const double rho = tau0 * tau0 / (tau0 * tau0 + r * r);
        const double rho_r = -2.0 * r * rho / (tau0 * tau0 + r * r);
        o.R = A * A * rho;
        o.R_t = 2.0 * A * rho / tau0;
        o.R_tt = 2.0 * rho / (tau0 * tau0);
        o.R_r = A * A * rho_r;
        o.R_tr = 2.0 * A * rho_r / tau0;
        o.Sh = A * A;
        o.Sh_t = 2.0 * A / tau0;
        o.Sh_tt = 2.0 / (tau0 * tau0);
        o.Sh_r = 0.0;
        o.Sh_tr = 0.0;
        return o;
    };

    auto f = [n, tau0]<typename S>(const Eigen::Matrix<S, Eigen::Dynamic, 1>& p)
        -> Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> {
        // Cartesian form: G_ij = A^2 (delta_ij - x_i x_j / (tau0^2 + r^2)).
        Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> G =
            Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>::Zero(n + 1, n + 1);
        const S A = (p[0] + tau0) / tau0;
        const S A2 = A * A;
        const S denom = spatial_r2(p) + tau0 * tau0;
        G(0, 0) = S(-1.0);
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j <= n; ++j) {
                S gij = -p[i] * p[j] / denom;
                if (i == j) gij += 1.0;
                G(i, j) = A2 * gij;
            }
        }
        return G;
    };
    c.full = make_chart(n + 1, f);
    c.full.synchronous = true;
    c.full.time_index = 0;
    c.full.validity = [tau0](const Vec& p) { return p[0] > -tau0; };
    return c;
}

GraphState hyperboloid_profile(double tau0, std::shared_ptr<const SpatialGrid> grid) {
    if (!(tau0 > 0.0)) throw ValidationError("hyperboloid_profile: tau0 must be positive");
    GraphState st;
    st.grid = std::move(grid);
    st.w = (st.grid->r * st.grid->r + tau0 * tau0).sqrt();
    st.s = 0.0;
    return st;
}

HyperboloidFrame make_hyperboloid_frame(int n) {
    HyperboloidFrame f;
    auto tau_at = [](const Vec& p) -> double {
        double r2 = 0.0;
        for (Eigen::Index i = 1; i < p.size(); ++i) r2 += p[i] * p[i];
        const double t2 = p[0] * p[0];
        if (!(p[0] > 0.0) || t2 <= r2) {
            std::ostringstream os;
            os << "hyperboloid frame: point (t = " << p[0] << ", r = " << std::sqrt(r2)
               << ") is outside the future cone";
            throw DomainError(os.str());
        }
        return std::sqrt(t2 - r2);
    };
    f.time_function.tau = tau_at;
    f.time_function.lapse = [tau_at](const Vec& p) {
        tau_at(p);  // domain check
        return 1.0;
    };
    f.time_function.frame = [tau_at](const Vec& p) -> Vec {
        const double tau = tau_at(p);
        return Vec(p / tau);  // T = (t d_t + x^i d_i)/tau
    };
    f.rho = [](const Vec& p) {
        double r2 = 0.0;
        for (Eigen::Index i = 1; i < p.size(); ++i) r2 += p[i] * p[i];
        return std::log(std::sqrt(r2) + 2.0);
    };
    (void)n;
    return f;
}

PrescribedCurvatureField make_example_prescribed_h(int n) {
    PrescribedCurvatureField f;
    f.name = "example";
    f.monotone_declared = true;
    f.value = [](const Vec& p) {
        double r2 = 0.0;
        for (Eigen::Index i = 1; i < p.size(); ++i) r2 += p[i] * p[i];
        return 2.0 - std::exp(-4.0 * p[0] + std::sqrt(r2 + 1.0));
    };
    f.gradient = [](const Vec& p) -> Vec {
        double r2 = 0.0;
        for (Eigen::Index i = 1; i < p.size(); ++i) r2 += p[i] * p[i];
        const double root = std::sqrt(r2 + 1.0);
        const double e = std::exp(-4.0 * p[0] + root);
        Vec g(p.size());
        g[0] = 4.0 * e;
        for (Eigen::Index i = 1; i < p.size(); ++i) g[i] = -e * p[i] / root;
        return g;
    };
    (void)n;
    return f;
}

PrescribedCurvatureField make_constant_h(double value, int n) {
    PrescribedCurvatureField f;
    f.name = "constant";
    f.monotone_declared = true;  // weakly: gradient vanishes
    f.constant_declared = true;
    f.constant_value = value;
    f.value = [value](const Vec&) { return value; };
    f.gradient = [n](const Vec& p) -> Vec { return Vec::Zero(p.size()); };
    return f;
}

PrescribedCurvatureField make_zero_h(int n) {
    PrescribedCurvatureField f = make_constant_h(0.0, n);
    f.name = "zero";
    return f;
}

ChartSpec make_schwarzschild_chart(double m) {
    if (m < 0.0) throw ValidationError("schwarzschild chart: mass must be >= 0");
    auto f = [m]<typename S>(const Eigen::Matrix<S, Eigen::Dynamic, 1>& p)
        -> Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> {
        // Coordinates (theta, phi, x, v), x = 1/r:
        //   G = x^{-2} (dtheta^2 + sin^2 theta dphi^2) + 2 x^{-2} dv dx
        //       - (1 - 2 m x) dv^2.
        Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> G =
            Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>::Zero(4, 4);
        const S x = p[2];
        const S x2i = 1.0 / (x * x);
        const S st = sin(p[0]);
        G(0, 0) = x2i;
        G(1, 1) = st * st * x2i;
        G(2, 3) = x2i;
        G(3, 2) = x2i;
        G(3, 3) = -(1.0 - 2.0 * m * x);
        return G;
    };
    ChartSpec c = make_chart(4, f);
    c.synchronous = false;
    c.time_index = 3;  // v increases toward the future
    c.validity = [m](const Vec& p) {
        if (!(p[2] > 0.0)) return false;
        if (m > 0.0 && !(p[2] < 1.0 / (2.0 * m))) return false;
        return p[0] > 0.0 && p[0] < M_PI;
    };
    return c;
}

double schwarzschild_rstar(double m, double r) {
    if (m == 0.0) return r;
    if (!(r > 2.0 * m)) throw DomainError("schwarzschild_rstar: r must exceed 2m");
    return r + 2.0 * m * std::log(r / (2.0 * m) - 1.0);
}

LstSurface make_lst_surface(double tau) {
    LstSurface s;
    s.tau = tau;
    s.f = [](double) { return 0.0; };
    s.grad_f_sq = [](double) { return 0.0; };
    s.lap_f = [](double) { return 0.0; };
    s.grad_pair = [](double) { return 0.0; };
    return s;
}

LstSurface make_lst_surface_cos_theta(double tau, double amplitude) {
    LstSurface s;
    s.tau = tau;
    const double a = amplitude;
    s.f = [a](double th) { return a * std::cos(th); };
    s.grad_f_sq = [a](double th) {
        const double st = std::sin(th);
        return a * a * st * st;
    };
    s.lap_f = [a](double th) { return -2.0 * a * std::cos(th); };
    s.grad_pair = [a](double th) {
        const double st = std::sin(th);
        return -2.0 * a * a * a * st * st * std::cos(th);
    };
    return s;
}

EmbeddingSamples lst_embedding(const LstSurface& surface, int n_theta, int n_phi, double x_lo,
                               double x_hi, int n_x, double theta_min) {
    if (n_theta < 5 || n_phi < 4 || n_x < 3)
        throw ValidationError("lst_embedding: parameter grid too small");
    if (!(x_lo > 0.0) || !(x_hi > x_lo))
        throw ValidationError("lst_embedding: need 0 < x_lo < x_hi");

    std::vector<Eigen::ArrayXd> axes(3);
    axes[0] = Eigen::ArrayXd::LinSpaced(n_theta, theta_min, M_PI - theta_min);
    axes[1] = Eigen::ArrayXd::LinSpaced(n_phi, 0.0, 2.0 * M_PI * (n_phi - 1) / n_phi);
    axes[2] = Eigen::ArrayXd::LinSpaced(n_x, x_lo, x_hi);
    EmbeddingSamples out;
    out.grid = ParameterGrid::product(axes, {false, true, false});
    LstSurface surf = surface;
    out.map = [surf](const Vec& prm) -> Vec {
        Vec z(4);
        z[0] = prm[0];
        z[1] = prm[1];
        z[2] = prm[2];
        z[3] = -surf.P(prm[2], prm[0]);
        return z;
    };
    return out;
}

} // namespace pmcf
