#include <cmath>

#include "doctest.h"
#include "pmcf/flow.hpp"
#include "pmcf/spacetimes.hpp"

using namespace pmcf;

TEST_CASE("example prescribed curvature: frozen value, gradient, and sup bound") {
    const PrescribedCurvatureField f = make_example_prescribed_h(1);
    // Hcal(0.5, 0) = 2 - e^{-1}.
    CHECK(f.at(0.5, 0.0, 2) == doctest::Approx(1.6321205588285577).epsilon(1e-15));

    // Analytic gradient against a central difference.
    Vec p(2);
    p << 0.4, 0.9;
    const Vec g = f.grad_or_fd(p);
    const double h = 1e-6;
    for (int k = 0; k < 2; ++k) {
        Vec pp = p, pm = p;
        pp[k] += h;
        pm[k] -= h;
        const double fd = (f.value(pp) - f.value(pm)) / (2.0 * h);
        CHECK(g[k] == doctest::Approx(fd).epsilon(1e-7));
    }
    CHECK(g[0] > 0.0);  // increasing along d_t
    CHECK(f.monotone_declared);

    // sup over the tau = 1/2 hyperboloid of |Hcal - 2| is e^{-1} (at r = 0)
    // and in particular below the e^{-1/2} gate.
    double sup = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        const double r = 8.0 * double(i) / 4000.0;
        const double t = std::sqrt(r * r + 0.25);
        sup = std::max(sup, std::abs(f.at(t, r, 2) - 2.0));
    }
    CHECK(sup == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(sup < std::exp(-0.5));
}

TEST_CASE("constant fields declare their value for the kernel fast path") {
    const PrescribedCurvatureField c = make_constant_h(1.25, 3);
    CHECK(c.constant_declared);
    CHECK(c.constant_value == 1.25);
    CHECK(c.at(2.0, 1.0, 4) == 1.25);
    CHECK(c.dt(2.0, 1.0, 4) == 0.0);
    CHECK(c.dr(2.0, 1.0, 4) == 0.0);
    const PrescribedCurvatureField z = make_zero_h(2);
    CHECK(z.constant_declared);
    CHECK(z.at(0.3, 0.4, 3) == 0.0);
}

TEST_CASE("milne chart profile terms carry the exact expanding metric") {
    const SyncChart chart = make_milne_sync_chart(3, 1.0);
    CHECK(chart.n == 3);
    CHECK(!chart.static_flat);
    const RadialChartTerms at0 = chart.terms(0.0, 1.0);
    CHECK(at0.R == doctest::Approx(0.5).epsilon(1e-14));       // 1/(1+r^2)
    CHECK(at0.R_t == doctest::Approx(1.0).epsilon(1e-14));     // 2(tau0+t)/tau0^2 / (1+r^2)
    CHECK(at0.Sh == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(at0.Sh_t == doctest::Approx(2.0).epsilon(1e-14));    // 2(tau0+t)/tau0^2
    CHECK(at0.Sh_r == 0.0);
    const RadialChartTerms later = chart.terms(0.5, 2.0);
    CHECK(later.R == doctest::Approx(2.25 / 5.0).epsilon(1e-14));
    CHECK(later.Sh == doctest::Approx(2.25).epsilon(1e-14));
}

TEST_CASE("hyperboloid frame evaluates tau and throws outside the cone") {
    const HyperboloidFrame frame = make_hyperboloid_frame(2);
    Vec p(3);
    p << 2.0, 1.0, 0.0;
    CHECK(frame.time_function.tau(p) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    CHECK(frame.time_function.lapse(p) == doctest::Approx(1.0).epsilon(1e-14));
    const Vec T = frame.time_function.frame(p);
    // T = (t d_t + r d_r)/tau: components (2, 1, 0)/sqrt(3).
    CHECK(T[0] == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-13));
    CHECK(T[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-13));
    CHECK(std::abs(T[2]) < 1e-14);
    CHECK(frame.rho(p) == doctest::Approx(std::log(3.0)).epsilon(1e-13));

    Vec outside(3);
    outside << 1.0, 2.0, 0.0;
    CHECK_THROWS_AS(frame.time_function.tau(outside), DomainError);
}

TEST_CASE("lst cut functions: exact phi and psi for the cos-theta family") {
    const double tau = 1.3, a = 0.8;
    const LstSurface s = make_lst_surface_cos_theta(tau, a);
    for (double theta : {0.2, 0.8, 1.5707963267948966, 2.4, 2.9}) {
        const double st = std::sin(theta), ct = std::cos(theta);
        CHECK(s.f(theta) == doctest::Approx(a * ct).epsilon(1e-14));
        CHECK(s.grad_f_sq(theta) == doctest::Approx(a * a * st * st).epsilon(1e-13));
        CHECK(s.lap_f(theta) == doctest::Approx(-2.0 * a * ct).epsilon(1e-13));
        CHECK(s.phi(theta) ==
              doctest::Approx(-0.5 * (tau * tau + a * a * st * st)).epsilon(1e-13));
        CHECK(s.psi(theta) ==
              doctest::Approx(-a * ct * (tau * tau + a * a * st * st)).epsilon(1e-13));
    }
    // Frozen point: tau = 1, a = 1, theta = pi/3 -> psi = -0.875.
    const LstSurface unit = make_lst_surface_cos_theta(1.0, 1.0);
    CHECK(unit.psi(M_PI / 3.0) == doctest::Approx(-0.875).epsilon(1e-14));

    const LstSurface flat = make_lst_surface(2.0);
    CHECK(flat.f(0.7) == 0.0);
    CHECK(flat.phi(0.7) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(flat.psi(0.7) == 0.0);
    // P(x, theta) = f + x phi + x^2 psi / 2.
    CHECK(flat.P(0.1, 0.7) == doctest::Approx(-0.2).epsilon(1e-13));
}

TEST_CASE("tortoise coordinate: frozen values and the flat limit") {
    CHECK(schwarzschild_rstar(1.0, 4.0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(schwarzschild_rstar(0.0, 7.5) == doctest::Approx(7.5).epsilon(1e-15));
    CHECK(schwarzschild_rstar(1.0, 10.0) ==
          doctest::Approx(10.0 + 2.0 * std::log(4.0)).epsilon(1e-14));
}

TEST_CASE("hyperboloid profile samples w = sqrt(tau0^2 + r^2)") {
    auto grid = std::make_shared<SpatialGrid>(SpatialGrid::radial_uniform(2, 33, 2.0));
    const GraphState st = hyperboloid_profile(0.7, grid);
    CHECK(st.s == 0.0);
    for (Eigen::Index i = 0; i < grid->nodes; ++i)
        CHECK(st.w[i] ==
              doctest::Approx(std::sqrt(0.49 + grid->r[i] * grid->r[i])).epsilon(1e-15));
}
