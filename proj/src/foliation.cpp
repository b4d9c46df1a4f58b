// Gaussian-normal-foliation integration (matrix Riccati system per node),
// comparison-envelope checks, and the foliation-backed chart used by the
// cross-module consistency tests.
#include "pmcf/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace pmcf {

double FoliationInit::b0() const { return 2.0 * std::sqrt(a0 * a0 + c0 * v0 * v0); }

double FoliationInit::guaranteed_window(double window_constant) const {
    const double b = b0();
    if (!(b > 0.0)) return chart_extent;
    return std::min(chart_extent, window_constant / b);
}

double sup_metric_norm(const std::vector<Mat>& A, const std::vector<Mat>& g) {
    if (A.size() != g.size())
        throw ValidationError("sup_metric_norm: per-node array sizes differ");
    double sup = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) {
        const Mat gi = g[i].inverse();
        const Mat M = gi * A[i];
        sup = std::max(sup, std::sqrt(std::max(0.0, (M * M).trace())));
    }
    return sup;
}

FoliationSeries integrate_foliation(const FoliationInit& init, const CurvatureSupplier& Rbar,
                                    double t_end, double dt, int sample_every,
                                    bool override_window, double window_constant) {
    if (init.g0.empty() || init.g0.size() != init.A0.size())
        throw ValidationError("integrate_foliation: empty or mismatched initial data");
    if (!(dt > 0.0) || !(t_end > 0.0))
        throw ValidationError("integrate_foliation: dt and t_end must be positive");
    if (!override_window && t_end > init.guaranteed_window(window_constant)) {
        std::ostringstream os;
        os << "integrate_foliation: t_end = " << t_end << " exceeds the guaranteed window "
           << init.guaranteed_window(window_constant)
           << " (pass override_window to integrate anyway)";
        throw ValidationError(os.str());
    }

    const std::size_t nodes = init.g0.size();
    std::vector<double> det0(nodes);
    for (std::size_t i = 0; i < nodes; ++i) det0[i] = init.g0[i].determinant();

    FoliationSeries series;
    series.init = init;

    std::vector<Mat> g = init.g0, A = init.A0;
    double t = 0.0;

    auto sample = [&]() {
        series.t.push_back(t);
        series.g.push_back(g);
        series.A.push_back(A);
    };
    auto rhs = [&](double tt, const std::vector<Mat>& gg, const std::vector<Mat>& AA,
                   std::vector<Mat>& dg, std::vector<Mat>& dA) {
        for (std::size_t i = 0; i < nodes; ++i) {
            dg[i] = 2.0 * AA[i];
            dA[i] = Rbar(tt, int(i), gg[i]) + AA[i] * gg[i].inverse() * AA[i];
        }
    };

    sample();
    std::vector<Mat> k1g(nodes), k1A(nodes), k2g(nodes), k2A(nodes), k3g(nodes), k3A(nodes),
        k4g(nodes), k4A(nodes), tg(nodes), tA(nodes);
    const long long steps = std::max(1LL, (long long)std::ceil(t_end / dt - 1e-12));
    for (long long step = 0; step < steps; ++step) {
        const double h = std::min(dt, t_end - t);
        rhs(t, g, A, k1g, k1A);
        for (std::size_t i = 0; i < nodes; ++i) {
            tg[i] = g[i] + 0.5 * h * k1g[i];
            tA[i] = A[i] + 0.5 * h * k1A[i];
        }
        rhs(t + 0.5 * h, tg, tA, k2g, k2A);
        for (std::size_t i = 0; i < nodes; ++i) {
            tg[i] = g[i] + 0.5 * h * k2g[i];
            tA[i] = A[i] + 0.5 * h * k2A[i];
        }
        rhs(t + 0.5 * h, tg, tA, k3g, k3A);
        for (std::size_t i = 0; i < nodes; ++i) {
            tg[i] = g[i] + h * k3g[i];
            tA[i] = A[i] + h * k3A[i];
        }
        rhs(t + h, tg, tA, k4g, k4A);
        for (std::size_t i = 0; i < nodes; ++i) {
            g[i] += (h / 6.0) * (k1g[i] + 2.0 * k2g[i] + 2.0 * k3g[i] + k4g[i]);
            A[i] += (h / 6.0) * (k1A[i] + 2.0 * k2A[i] + 2.0 * k3A[i] + k4A[i]);
        }
        t += h;

        for (std::size_t i = 0; i < nodes; ++i) {
            if (g[i].determinant() < 1e-12 * det0[i]) {
                std::ostringstream os;
                os << "integrate_foliation: metric degenerated at node " << i << ", t = " << t
                   << " (focal point)";
                throw DegenerateMetric(os.str());
            }
        }
        if ((step + 1) % std::max(1, sample_every) == 0 || step + 1 == steps) sample();
    }
    return series;
}

FoliationBoundsReport foliation_bounds_check(const FoliationSeries& series, double tol) {
    FoliationBoundsReport rep;
    const double b0 = series.init.b0();
    const std::size_t nodes = series.init.g0.size();

    for (std::size_t k = 0; k < series.t.size(); ++k) {
        const double t = series.t[k];
        const double lo = std::exp(-2.0 * b0 * t);
        const double hi = std::exp(+2.0 * b0 * t);
        bool sample_fail = false;
        for (std::size_t i = 0; i < nodes; ++i) {
            // Generalized eigenvalues of g(t) with respect to g0.
            Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(series.g[k][i], series.init.g0[i]);
            const double mu_min = es.eigenvalues().minCoeff();
            const double mu_max = es.eigenvalues().maxCoeff();
            const double lower_margin = mu_min / lo - 1.0;
            const double upper_margin = 1.0 - mu_max / hi;
            rep.worst_lower_margin = std::min(rep.worst_lower_margin, lower_margin);
            rep.worst_upper_margin = std::min(rep.worst_upper_margin, upper_margin);
            if (lower_margin < -tol || upper_margin < -tol) sample_fail = true;
        }
        const double sup_A = sup_metric_norm(series.A[k], series.g[k]);
        const double a_margin = (b0 > 0.0) ? 1.0 - sup_A / b0 : (sup_A <= tol ? 0.0 : -1.0);
        rep.worst_A_margin = std::min(rep.worst_A_margin, a_margin);
        if (a_margin < -tol) sample_fail = true;
        if (sample_fail) {
            rep.all_pass = false;
            ++rep.failed_samples;
        }
    }
    return rep;
}

ChartSpec foliation_backed_chart(const FoliationSeries& dense_series,
                                 const std::vector<double>& node_r) {
    if (node_r.size() != 1 || dense_series.init.g0.size() != 1)
        throw ValidationError(
            "foliation_backed_chart: only homogeneous (single-node) series are supported");
    if (dense_series.t.size() < 2)
        throw ValidationError("foliation_backed_chart: series needs at least two samples");

    const int n = int(dense_series.init.g0[0].rows());
    const auto series = std::make_shared<FoliationSeries>(dense_series);
    const double t_lo = series->t.front();
    const double t_hi = series->t.back();

    ChartSpec c;
    c.dim = n + 1;
    c.synchronous = true;
    c.time_index = 0;
    c.validity = [t_lo, t_hi](const Vec& p) { return p[0] >= t_lo && p[0] <= t_hi; };
    c.metric = [series, n](const Vec& p) -> Mat {
        const double t = p[0];
        const auto& ts = series->t;
        // Hermite cubic on the bracketing interval; d_t g = 2A gives slopes.
        std::size_t k = std::size_t(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
        if (k == 0) k = 1;
        if (k >= ts.size()) k = ts.size() - 1;
        const double t0 = ts[k - 1], t1 = ts[k], dt = t1 - t0;
        const double x = (t - t0) / dt;
        const Mat& g0 = series->g[k - 1][0];
        const Mat& g1 = series->g[k][0];
        const Mat m0 = 2.0 * dt * series->A[k - 1][0];
        const Mat m1 = 2.0 * dt * series->A[k][0];
        const double h00 = (1.0 + 2.0 * x) * (1.0 - x) * (1.0 - x);
        const double h10 = x * (1.0 - x) * (1.0 - x);
        const double h01 = x * x * (3.0 - 2.0 * x);
        const double h11 = x * x * (x - 1.0);
        const Mat g = h00 * g0 + h10 * m0 + h01 * g1 + h11 * m1;
        Mat G = Mat::Zero(n + 1, n + 1);
        G(0, 0) = -1.0;
        G.block(1, 1, n, n) = g;
        return G;
    };
    c.fd_step = 1e-5;
    return c;
}

} // namespace pmcf
