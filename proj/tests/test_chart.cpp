#include <cmath>

#include "doctest.h"
#include "pmcf/chart.hpp"
#include "pmcf/spacetimes.hpp"

using namespace pmcf;

namespace {

// Minkowski in polar coordinates (t, r, theta): G = diag(-1, 1, r^2).
ChartSpec polar_minkowski() {
    auto f = []<typename S>(const Eigen::Matrix<S, Eigen::Dynamic, 1>& p)
        -> Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> {
        Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> G =
            Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>::Zero(3, 3);
        G(0, 0) = S(-1.0);
        G(1, 1) = S(1.0);
        G(2, 2) = p[1] * p[1];
        return G;
    };
    ChartSpec c = make_chart(3, f);
    c.synchronous = true;
    return c;
}

// Flat expanding chart G = -dt^2 + e^{2t} delta (scale factor a = e^t).
ChartSpec exp_flrw(int n) {
    auto f = [n]<typename S>(const Eigen::Matrix<S, Eigen::Dynamic, 1>& p)
        -> Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> {
        Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> G =
            Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>::Zero(n + 1, n + 1);
        G(0, 0) = S(-1.0);
        using std::exp;
        const S a2 = exp(S(2.0) * p[0]);
        for (int i = 1; i <= n; ++i) G(i, i) = a2;
        return G;
    };
    ChartSpec c = make_chart(n + 1, f);
    c.synchronous = true;
    return c;
}

} // namespace

TEST_CASE("metric evaluation rejects non-Lorentzian signatures") {
    auto f = []<typename S>(const Eigen::Matrix<S, Eigen::Dynamic, 1>&)
        -> Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> {
        return Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>::Identity(2, 2);
    };
    ChartSpec euclid = make_chart(2, f);
    Vec p = Vec::Zero(2);
    CHECK_THROWS_AS(metric_at(euclid, p), SignatureError);
}

TEST_CASE("polar Christoffels match the classical values") {
    const ChartSpec chart = polar_minkowski();
    Vec p(3);
    p << 0.0, 1.7, 0.4;
    const Tensor3 G = christoffel_at(chart, p);
    // Gamma^r_{theta theta} = -r, Gamma^theta_{r theta} = 1/r.
    CHECK(G(1, 2, 2) == doctest::Approx(-1.7).epsilon(1e-12));
    CHECK(G(2, 1, 2) == doctest::Approx(1.0 / 1.7).epsilon(1e-12));
    CHECK(G(0, 1, 1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("finite-difference Christoffels converge at second order to the exact path") {
    // Same metric registered once with and once without the dual-number path.
    const ChartSpec exact = exp_flrw(2);
    ChartSpec fd;
    fd.dim = 3;
    fd.metric = exact.metric;  // only the plain-double slot: FD fallback
    fd.synchronous = true;

    Vec p(3);
    p << 0.3, 0.4, -0.2;
    const Tensor3 ref = christoffel_at(exact, p);

    auto err_at = [&](double step) {
        fd.fd_step = step;
        const Tensor3 g = christoffel_at(fd, p);
        double e = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c) e = std::max(e, std::abs(g(a, b, c) - ref(a, b, c)));
        return e;
    };
    const double e1 = err_at(2e-2);
    const double e2 = err_at(1e-2);
    CHECK(e1 > 1e-8);  // the comparison is non-trivial
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("schwarzschild chart metric components at a frozen point") {
    const ChartSpec chart = make_schwarzschild_chart(1.0);
    Vec p(4);
    p << M_PI / 2.0, 0.3, 0.25, 1.0;  // (theta, phi, x, v)
    const Mat G = metric_at(chart, p);
    CHECK(G(0, 0) == doctest::Approx(16.0).epsilon(1e-14));             // x^{-2}
    CHECK(G(1, 1) == doctest::Approx(16.0).epsilon(1e-14));             // sin^2(pi/2) x^{-2}
    CHECK(G(3, 3) == doctest::Approx(-0.5).epsilon(1e-14));             // -(1 - 2mx)
    CHECK(G(2, 3) == doctest::Approx(16.0).epsilon(1e-14));             // x^{-2}
    CHECK(G(2, 2) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(G(2, 3) == G(3, 2));

    CHECK_THROWS_AS(make_schwarzschild_chart(-0.5), ValidationError);
    Vec bad = p;
    bad[2] = 0.6;  // beyond x = 1/(2m)
    CHECK(!chart.valid_at(bad));
    CHECK(chart.valid_at(p));
    // The declared future direction is the retarded-time axis.
    CHECK(chart.time_index == 3);
    CHECK(chart.future_at(p)[3] == doctest::Approx(1.0));
}

TEST_CASE("schwarzschild curvature: Ricci-flat with the frozen Kretschmann value") {
    const ChartSpec chart = make_schwarzschild_chart(1.0);
    Vec p(4);
    p << 1.2, 0.3, 0.1, 0.7;
    const Mat G = metric_at(chart, p);
    const Tensor4 R = riemann_at(chart, p);
    const Mat ric = ricci_from_riemann(G, R);
    CHECK(ric.cwiseAbs().maxCoeff() < 1e-9);
    // K = 48 m^2 x^6 = 4.8e-5 at m = 1, x = 0.1 (convention independent).
    CHECK(kretschmann_scalar(G, R) == doctest::Approx(4.8e-5).epsilon(1e-9));
}

TEST_CASE("riemann on the unit sphere block gives Ric_{phi phi} = sin^2 theta") {
    // Metric dtheta^2 + sin^2 theta dphi^2 embedded in a Lorentz chart
    // -dt^2 + dtheta^2 + sin^2 theta dphi^2 (the t direction is flat).
    auto f = []<typename S>(const Eigen::Matrix<S, Eigen::Dynamic, 1>& p)
        -> Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> {
        Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> G =
            Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>::Zero(3, 3);
        G(0, 0) = S(-1.0);
        G(1, 1) = S(1.0);
        using std::sin;
        const S s = sin(p[1]);
        G(2, 2) = s * s;
        return G;
    };
    const ChartSpec chart = make_chart(3, f);
    Vec p(3);
    p << 0.0, 1.1, 0.5;
    const Mat ric = ricci_from_riemann(metric_at(chart, p), riemann_at(chart, p));
    const double s2 = std::sin(1.1) * std::sin(1.1);
    CHECK(ric(2, 2) == doctest::Approx(s2).epsilon(1e-10));
    CHECK(ric(1, 1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(ric(0, 0)) < 1e-10);
}

TEST_CASE("tidal matrix of the exponential scale factor is a*a'' = e^{2t}") {
    const ChartSpec chart = exp_flrw(3);
    Vec p(4);
    p << 0.3, 0.1, -0.4, 0.2;
    const Mat tidal = tidal_matrix(chart, p);
    const double expect = std::exp(0.6);
    for (int i = 0; i < 3; ++i) {
        CHECK(tidal(i, i) == doctest::Approx(expect).epsilon(1e-9));
        for (int j = 0; j < 3; ++j)
            if (i != j) CHECK(std::abs(tidal(i, j)) < 1e-9);
    }
}

TEST_CASE("reference frames: resting frame gives the Euclidean norm") {
    const ChartSpec chart = make_minkowski_chart(3);
    Vec p = Vec::Zero(4);
    Vec T = Vec::Zero(4);
    T[0] = 1.0;
    const ReferenceFrame F = make_reference_frame(chart, p, T);
    CHECK((F.G_E - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
    Vec w(4);
    w << 1.0, 2.0, -2.0, 0.0;
    CHECK(reference_norm(F, w) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("reference frames reject spacelike and past directions") {
    const ChartSpec chart = make_minkowski_chart(2);
    Vec p = Vec::Zero(3);
    Vec bad = Vec::Zero(3);
    bad[1] = 1.0;  // spacelike
    CHECK_THROWS_AS(make_reference_frame(chart, p, bad), OrientationError);
    Vec past = Vec::Zero(3);
    past[0] = -1.0;
    CHECK_THROWS_AS(make_reference_frame(chart, p, past), OrientationError);
    Vec scaled = Vec::Zero(3);
    scaled[0] = 2.0;  // timelike but not unit
    CHECK_THROWS_AS(make_reference_frame(chart, p, scaled), OrientationError);
}

TEST_CASE("tilt factor equals the relative boost factor") {
    const ChartSpec chart = make_minkowski_chart(2);
    Vec p = Vec::Zero(3);
    const Mat G = metric_at(chart, p);
    Vec T = Vec::Zero(3);
    T[0] = 1.0;
    const double chi = 0.8;
    Vec Tp(3);
    Tp << std::cosh(chi), std::sinh(chi), 0.0;
    CHECK(tilt_factor(G, T, T) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(tilt_factor(G, T, Tp) == doctest::Approx(std::cosh(chi)).epsilon(1e-14));
    CHECK(tilt_factor(G, Tp, T) == doctest::Approx(std::cosh(chi)).epsilon(1e-14));
}

TEST_CASE("rank-2 reference norms contract lower indices with the inverse") {
    const ChartSpec chart = make_minkowski_chart(1);
    Vec p = Vec::Zero(2);
    Vec T = Vec::Zero(2);
    T[0] = 1.0;
    const ReferenceFrame F = make_reference_frame(chart, p, T);
    Mat M = Mat::Zero(2, 2);
    M(0, 0) = 3.0;
    M(1, 1) = -4.0;
    // G_E = identity: |||M|||^2 = sum of squared entries.
    CHECK(reference_norm(F, M) == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("milne chart is an exact vacuum synchronous chart") {
    const SyncChart milne = make_milne_sync_chart(3, 1.0);
    Vec p(4);
    p << 0.2, 0.4, -0.1, 0.3;
    const Mat G = metric_at(milne.full, p);
    // Synchronous: G_{00} = -1, zero shift.
    CHECK(G(0, 0) == doctest::Approx(-1.0).epsilon(1e-13));
    for (int i = 1; i < 4; ++i) CHECK(std::abs(G(0, i)) < 1e-13);
    // Flat spacetime in disguise: curvature vanishes identically.
    const Tensor4 R = riemann_at(milne.full, p);
    CHECK(R.max_abs() < 1e-8);
    // Chart validity is t > -tau0.
    Vec bad = p;
    bad[0] = -1.5;
    CHECK(!milne.full.valid_at(bad));
}
