// Flow engine: graph-flow velocity kernel, linearized coefficients, explicit
// stepping under a parabolic CFL rule, the recording run loop, and the Newton
// stationary solver.
#include "pmcf/flow.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "pmcf/diagnostics.hpp"

namespace pmcf {

namespace {

// Engine fields are evaluated on the axis representative (t, r, 0, ..., 0);
// the buffer is reused so the per-node hot path never allocates.
const Vec& field_point(double t, double r, int dim) {
    static thread_local Vec p;
    if (p.size() != dim) p = Vec::Zero(dim);
    p[0] = t;
    if (dim > 1) p[1] = r;
    return p;
}

// Past orientation = same engine with the prescription's sign reversed
// (velocity sign flip plus normal reversal compose to exactly this).
PrescribedCurvatureField negated(const PrescribedCurvatureField& f) {
    PrescribedCurvatureField g;
    auto value = f.value;
    g.value = [value](const Vec& p) { return -value(p); };
    if (f.gradient) {
        auto grad = f.gradient;
        g.gradient = [grad](const Vec& p) -> Vec { return -grad(p); };
    }
    g.monotone_declared = false;
    g.constant_declared = f.constant_declared;
    g.constant_value = -f.constant_value;
    g.fd_step = f.fd_step;
    g.name = f.name + "-reversed";
    return g;
}

struct KernelScratch {
    Eigen::ArrayXd wp, wpp, wp_over_r;
    // Reusable stepping buffers so the run loop never allocates per step.
    Eigen::ArrayXd w_next, w_stage, k2, k3, k4, cfl_ratio;
    // Per-grid precomputed factors for the kernels (the grid never changes
    // within a run; rebinding is a pointer compare).
    const SpatialGrid* bound_grid = nullptr;
    Eigen::ArrayXd inv_r, invJ, invJ2, JpovJ;

    void bind(const SpatialGrid& grid) {
        if (bound_grid == &grid) return;
        bound_grid = &grid;
        invJ = 1.0 / grid.J;
        invJ2 = invJ * invJ;
        JpovJ = grid.Jp * invJ;
        if (grid.radial()) {
            inv_r.resize(grid.nodes);
            inv_r[0] = 0.0;
            for (Eigen::Index i = 1; i < grid.nodes; ++i) inv_r[i] = 1.0 / grid.r[i];
        }
    }
};

// Specialized velocity kernel for the flat static chart on radial grids:
// R = Shat = 1 collapses every chart term, so a single fused pass computes
// the stencil, the spacelike margin and V = sqrt(q)(H - Hcal) with no
// temporaries, no per-node indirect calls for constant prescriptions, and
// one division + one square root per node.  This is the explicit stepper's
// hot path; the general kernel below is its reference semantics.
// Fills scratch.wp as a side product (stationary_solve consumes it).
void flat_radial_kernel(const SpatialGrid& grid, const Eigen::ArrayXd& w,
                        const PrescribedCurvatureField& H_field, KernelScratch& sc,
                        Eigen::ArrayXd& V, double& q_min, Eigen::ArrayXd* cfl_ratio) {
    sc.bind(grid);
    const Eigen::Index N = grid.nodes;
    const int n = grid.n;
    const int dim = n + 1;
    const double inv2h = 1.0 / (2.0 * grid.h);
    const double invh2 = 1.0 / (grid.h * grid.h);
    const double nm1 = double(n - 1);
    V.resize(N);
    sc.wp.resize(N);
    if (cfl_ratio) cfl_ratio->resize(N);

    const double* w_ = w.data();
    const double* iJ = sc.invJ.data();
    const double* iJ2 = sc.invJ2.data();
    const double* JpJ = sc.JpovJ.data();
    const double* ir = sc.inv_r.data();
    const double* r_ = grid.r.data();
    double* V_ = V.data();
    double* wp_ = sc.wp.data();
    double* a_ = cfl_ratio ? cfl_ratio->data() : nullptr;

    const bool cf = H_field.constant_declared;
    const double ch = H_field.constant_value;
    double qmin = 1.0;  // the axis row has q = 1 exactly

    // Axis row: even reflection through r = 0 gives w' = 0 and the angular
    // term contributes its L'Hopital limit (n-1) w'' to the diffusion.
    {
        const double wpp = 2.0 * (w_[1] - w_[0]) * invh2 * iJ2[0];
        wp_[0] = 0.0;
        const double hcal = cf ? ch : H_field.at(w_[0], 0.0, dim);
        V_[0] = (1.0 + nm1) * wpp - hcal;
        if (a_) a_[0] = (1.0 + nm1) * iJ2[0];
    }
    // Outer row: second-order one-sided stencils (the boundary condition
    // overwrites the height afterwards, but the CFL scan still reads it).
    {
        const Eigen::Index i = N - 1;
        const double fx = (3.0 * w_[i] - 4.0 * w_[i - 1] + w_[i - 2]) * inv2h;
        const double fxx =
            (2.0 * w_[i] - 5.0 * w_[i - 1] + 4.0 * w_[i - 2] - w_[i - 3]) * invh2;
        const double wp = fx * iJ[i];
        const double wpp = (fxx - fx * JpJ[i]) * iJ2[i];
        const double q = 1.0 - wp * wp;
        wp_[i] = wp;
        qmin = std::min(qmin, q);
        const double qg = q > 0.0 ? q : 1.0;
        const double lam2 = 1.0 / qg;
        const double hcal = cf ? ch : H_field.at(w_[i], r_[i], dim);
        const double v = lam2 * wpp + nm1 * wp * ir[i] - hcal * std::sqrt(qg);
        V_[i] = q > 0.0 ? v : 0.0;
        if (a_) a_[i] = q > 0.0 ? lam2 * iJ2[i] : 0.0;
    }
    // Interior: branch-free (guarded q keeps the arithmetic well defined on
    // rows that have left the spacelike set; those rows are zeroed and the
    // caller aborts on q_min).  Split on field constancy so the constant
    // case vectorizes cleanly.
    if (cf) {
        for (Eigen::Index i = 1; i + 1 < N; ++i) {
            const double fx = (w_[i + 1] - w_[i - 1]) * inv2h;
            const double fxx = (w_[i + 1] - 2.0 * w_[i] + w_[i - 1]) * invh2;
            const double wp = fx * iJ[i];
            const double wpp = (fxx - fx * JpJ[i]) * iJ2[i];
            const double q = 1.0 - wp * wp;
            wp_[i] = wp;
            qmin = q < qmin ? q : qmin;
            const double qg = q > 0.0 ? q : 1.0;
            const double lam2 = 1.0 / qg;
            const double v = lam2 * wpp + nm1 * wp * ir[i] - ch * std::sqrt(qg);
            V_[i] = q > 0.0 ? v : 0.0;
            if (a_) a_[i] = q > 0.0 ? lam2 * iJ2[i] : 0.0;
        }
    } else {
        for (Eigen::Index i = 1; i + 1 < N; ++i) {
            const double fx = (w_[i + 1] - w_[i - 1]) * inv2h;
            const double fxx = (w_[i + 1] - 2.0 * w_[i] + w_[i - 1]) * invh2;
            const double wp = fx * iJ[i];
            const double wpp = (fxx - fx * JpJ[i]) * iJ2[i];
            const double q = 1.0 - wp * wp;
            wp_[i] = wp;
            qmin = q < qmin ? q : qmin;
            const double qg = q > 0.0 ? q : 1.0;
            const double lam2 = 1.0 / qg;
            const double hcal = H_field.at(w_[i], r_[i], dim);
            const double v = lam2 * wpp + nm1 * wp * ir[i] - hcal * std::sqrt(qg);
            V_[i] = q > 0.0 ? v : 0.0;
            if (a_) a_[i] = q > 0.0 ? lam2 * iJ2[i] : 0.0;
        }
    }
    q_min = qmin;
}

// General velocity kernel: V = sqrt(q) (H - Hcal) for any synchronous
// radial/box profile, plus, on request, the per-node CFL ratio a / J^2 with
// diffusion coefficient a = lambda^2 / R (origin row: (lambda^2 + n - 1)/R).
void general_kernel(const SyncChart& chart, const SpatialGrid& grid, const Eigen::ArrayXd& w,
                    const PrescribedCurvatureField& H_field, KernelScratch& scratch,
                    Eigen::ArrayXd& V, double& q_min, Eigen::ArrayXd* cfl_ratio) {
    const Eigen::Index N = grid.nodes;
    const bool radial = grid.radial();
    const int n = grid.n;
    const int dim = n + 1;

    scratch.bind(grid);
    grid_derivatives(grid, w, scratch.wp, scratch.wpp, /*even_at_origin=*/radial);
    if (radial) {
        scratch.wp_over_r.resize(N);
        scratch.wp_over_r[0] = scratch.wpp[0];
        for (Eigen::Index i = 1; i < N; ++i) scratch.wp_over_r[i] = scratch.wp[i] / grid.r[i];
    }

    V.resize(N);
    if (cfl_ratio) cfl_ratio->resize(N);
    const bool cf = H_field.constant_declared;
    const double ch = H_field.constant_value;
    double qmin = 1e300;

    for (Eigen::Index i = 0; i < N; ++i) {
        const double r = grid.r[i];
        const double wi = w[i];
        const double wp = scratch.wp[i];
        const double wpp = scratch.wpp[i];
        const RadialChartTerms c = chart.terms(wi, r);

        const double q = 1.0 - wp * wp / c.R;
        qmin = std::min(qmin, q);
        if (!(q > 0.0)) {
            V[i] = 0.0;
            if (cfl_ratio) (*cfl_ratio)[i] = 0.0;
            continue;
        }
        const double lam2 = 1.0 / q;
        const double hcal = cf ? ch : H_field.at(wi, r, dim);

        double v = lam2 * (wpp - wp * c.R_r / (2.0 * c.R)) / c.R -
                   lam2 * c.R_t * wp * wp / (2.0 * c.R * c.R) + c.R_t / (2.0 * c.R) -
                   hcal * std::sqrt(q);
        if (radial && n > 1) {
            v += double(n - 1) * (c.Sh_t / (2.0 * c.Sh) + scratch.wp_over_r[i] / c.R +
                                  wp * c.Sh_r / (2.0 * c.Sh * c.R));
        }
        V[i] = v;
        if (cfl_ratio) {
            double a = lam2 / c.R;
            if (radial && i == 0) a = (lam2 + double(n - 1)) / c.R;
            (*cfl_ratio)[i] = a * scratch.invJ2[i];
        }
    }
    q_min = qmin;
}

void velocity_kernel(const SyncChart& chart, const SpatialGrid& grid, const Eigen::ArrayXd& w,
                     const PrescribedCurvatureField& H_field, KernelScratch& scratch,
                     Eigen::ArrayXd& V, double& q_min, Eigen::ArrayXd* cfl_ratio) {
    if (chart.static_flat && grid.radial())
        flat_radial_kernel(grid, w, H_field, scratch, V, q_min, cfl_ratio);
    else
        general_kernel(chart, grid, w, H_field, scratch, V, q_min, cfl_ratio);
}

struct BoundaryApplier {
    const FlowConfig* cfg = nullptr;
    const SpatialGrid* grid = nullptr;
    double w_first = 0.0, w_last = 0.0;  // pin-initial values

    void operator()(Eigen::ArrayXd& w, double s) const {
        if (grid->periodic()) return;
        const Eigen::Index N = grid->nodes;
        if (cfg->boundary == FlowConfig::Boundary::pin_profile && cfg->boundary_profile) {
            w[N - 1] = cfg->boundary_profile(grid->r[N - 1], s);
            if (grid->topology == Topology::box_dirichlet)
                w[0] = cfg->boundary_profile(grid->r[0], s);
        } else {
            w[N - 1] = w_last;
            if (grid->topology == Topology::box_dirichlet) w[0] = w_first;
        }
    }
};

double compute_dt(const SyncChart& chart, const GraphState& state,
                  const PrescribedCurvatureField& H_field, const FlowConfig& config,
                  KernelScratch& scratch, Eigen::ArrayXd& V, double& q_min) {
    velocity_kernel(chart, *state.grid, state.w, H_field, scratch, V, q_min,
                    &scratch.cfl_ratio);
    if (config.dt_override > 0.0) return config.dt_override;
    const double amax = scratch.cfl_ratio.maxCoeff();
    if (!(amax > 0.0)) throw StepTooSmall("step: diffusion coefficient not positive");
    return config.cfl * state.grid->h * state.grid->h / amax;
}

// One explicit update of `state` by exactly dt (V0/q0 already evaluated at
// the base state).  Works on copies; throws before mutating `state`.
void advance(const SyncChart& chart, GraphState& state, const PrescribedCurvatureField& H_field,
             const FlowConfig& config, double dt, KernelScratch& scratch,
             const Eigen::ArrayXd& V0, double q0) {
    if (dt < 1e-14) {
        std::ostringstream os;
        os << "step: dt = " << dt << " underflowed the representable floor";
        throw StepTooSmall(os.str());
    }
    if (q0 < config.delta_floor) {
        std::ostringstream os;
        os << "step: spacelike margin q_min = " << q0 << " below floor " << config.delta_floor;
        throw SpacelikeViolation(os.str());
    }

    BoundaryApplier bc{&config, state.grid.get(), state.w[0], state.w[state.grid->nodes - 1]};
    const double s0 = state.s;

    auto stage_velocity = [&](const Eigen::ArrayXd& w, Eigen::ArrayXd& k) {
        double q = 0.0;
        velocity_kernel(chart, *state.grid, w, H_field, scratch, k, q, nullptr);
        if (q < config.delta_floor) {
            std::ostringstream os;
            os << "step: intermediate stage margin q_min = " << q << " below floor "
               << config.delta_floor;
            throw SpacelikeViolation(os.str());
        }
    };

    // All stage buffers live in the scratch, so steady-state stepping does
    // not allocate.
    Eigen::ArrayXd& w_new = scratch.w_next;
    switch (config.integrator) {
        case FlowConfig::Integrator::euler: {
            w_new = state.w + dt * V0;
            break;
        }
        case FlowConfig::Integrator::rk2: {
            Eigen::ArrayXd& w_half = scratch.w_stage;
            w_half = state.w + 0.5 * dt * V0;
            bc(w_half, s0 + 0.5 * dt);
            stage_velocity(w_half, scratch.k2);
            w_new = state.w + dt * scratch.k2;
            break;
        }
        case FlowConfig::Integrator::rk4: {
            Eigen::ArrayXd& w_stage = scratch.w_stage;
            w_stage = state.w + 0.5 * dt * V0;
            bc(w_stage, s0 + 0.5 * dt);
            stage_velocity(w_stage, scratch.k2);
            w_stage = state.w + 0.5 * dt * scratch.k2;
            bc(w_stage, s0 + 0.5 * dt);
            stage_velocity(w_stage, scratch.k3);
            w_stage = state.w + dt * scratch.k3;
            bc(w_stage, s0 + dt);
            stage_velocity(w_stage, scratch.k4);
            w_new = state.w +
                    (dt / 6.0) * (V0 + 2.0 * scratch.k2 + 2.0 * scratch.k3 + scratch.k4);
            break;
        }
    }
    bc(w_new, s0 + dt);
    state.w.swap(w_new);
    state.s = s0 + dt;
}

} // namespace

double PrescribedCurvatureField::at(double t, double r, int dim) const {
    if (constant_declared) return constant_value;
    return value(field_point(t, r, dim));
}

double PrescribedCurvatureField::dt(double t, double r, int dim) const {
    if (constant_declared) return 0.0;
    if (gradient) return gradient(field_point(t, r, dim))[0];
    const double h = fd_step * (std::abs(t) + 1.0);
    return (value(field_point(t + h, r, dim)) - value(field_point(t - h, r, dim))) / (2.0 * h);
}

double PrescribedCurvatureField::dr(double t, double r, int dim) const {
    if (dim < 2 || constant_declared) return 0.0;
    if (gradient) return gradient(field_point(t, r, dim))[1];
    const double h = fd_step * (std::abs(r) + 1.0);
    return (value(field_point(t, r + h, dim)) - value(field_point(t, r - h, dim))) / (2.0 * h);
}

Vec PrescribedCurvatureField::grad_or_fd(const Vec& point) const {
    if (gradient) return gradient(point);
    Vec g(point.size());
    for (Eigen::Index a = 0; a < point.size(); ++a) {
        const double h = fd_step * (std::abs(point[a]) + 1.0);
        Vec pp = point, pm = point;
        pp[a] += h;
        pm[a] -= h;
        g[a] = (value(pp) - value(pm)) / (2.0 * h);
    }
    return g;
}

Eigen::ArrayXd flow_velocity(const SyncChart& chart, const GraphState& state,
                             const PrescribedCurvatureField& H_field) {
    KernelScratch scratch;
    Eigen::ArrayXd V;
    double q_min = 0.0;
    velocity_kernel(chart, *state.grid, state.w, H_field, scratch, V, q_min, nullptr);
    if (!(q_min > 0.0)) {
        std::ostringstream os;
        os << "flow_velocity: graph is not spacelike (q_min = " << q_min << ")";
        throw SpacelikeViolation(os.str());
    }
    return V;
}

LinearizedCoefficients linearized_coefficients(const SyncChart& chart, const GraphState& state,
                                               const PrescribedCurvatureField& H_field) {
    const SpatialGrid& grid = *state.grid;
    const Eigen::Index N = grid.nodes;
    const bool radial = grid.radial();
    const int n = grid.n;
    const int dim = n + 1;

    Eigen::ArrayXd wp, wpp;
    grid_derivatives(grid, state.w, wp, wpp, /*even_at_origin=*/radial);

    LinearizedCoefficients lc;
    lc.a.resize(N);
    lc.b.resize(N);
    lc.c.resize(N);

    for (Eigen::Index i = 0; i < N; ++i) {
        const double r = grid.r[i];
        const double w = state.w[i];
        const double vp = wp[i];
        const double vpp = wpp[i];
        const double wpr = radial ? (i == 0 ? wpp[0] : vp / r) : 0.0;
        const RadialChartTerms t = chart.terms(w, r);
        const double R = t.R;

        const double q = 1.0 - vp * vp / R;
        if (!(q > 0.0))
            throw SpacelikeViolation("linearized_coefficients: graph is not spacelike");
        const double lam2 = 1.0 / q;
        const double lam = std::sqrt(lam2);
        const double lam4 = lam2 * lam2;
        const double X = vpp - t.R_r * vp / (2.0 * R);
        const double hcal = H_field.at(w, r, dim);
        const double hcal_t = H_field.dt(w, r, dim);

        // a: exact diffusion coefficient g^{rr} + v^r v^r / q = lambda^2 / R;
        // the axis row absorbs the angular second-order limit.
        lc.a[i] = (radial && i == 0) ? (lam2 + double(n - 1)) / R : lam2 / R;

        // b = -dV/dv' (regular part; the axis value is 0 by symmetry).
        double b = -2.0 * lam4 * vp * X / (R * R) + lam2 * t.R_r / (2.0 * R * R) +
                   lam4 * vp * t.R_t / (R * R) - hcal * lam * vp / R;
        if (radial && n > 1) {
            if (i == 0)
                b = 0.0;
            else
                b -= double(n - 1) * (2.0 / r + t.Sh_r / t.Sh) / (2.0 * R);
        }
        if (radial && i == 0) b = 0.0;
        lc.b[i] = b;

        // c = -dV/dt (all chart partials evaluated on the surface).
        double c = lam4 * vp * vp * t.R_t * X / (R * R * R) + lam2 * X * t.R_t / (R * R) +
                   lam2 * vp * t.R_tr / (2.0 * R * R) - lam2 * vp * t.R_r * t.R_t / (2.0 * R * R * R) -
                   lam4 * vp * vp * vp * vp * t.R_t * t.R_t / (2.0 * R * R * R * R) +
                   lam2 * vp * vp * t.R_tt / (2.0 * R * R) - lam2 * vp * vp * t.R_t * t.R_t / (R * R * R) -
                   t.R_tt / (2.0 * R) + t.R_t * t.R_t / (2.0 * R * R) + hcal_t / lam +
                   hcal * lam * vp * vp * t.R_t / (2.0 * R * R);
        if (radial && n > 1) {
            const double sh = t.Sh;
            const double dlog_sr = 2.0 * wpr + vp * t.Sh_r / sh;  // w' S_r / S
            c -= 0.5 * double(n - 1) *
                 (t.Sh_tt / sh + (2.0 * wpr * t.Sh_t / sh + vp * t.Sh_tr / sh) / R -
                  dlog_sr * t.R_t / (R * R) -
                  (t.Sh_t / sh) * (t.Sh_t / sh + dlog_sr / R));
        }
        lc.c[i] = c;
    }
    return lc;
}

Eigen::ArrayXd apply_linearized(const SpatialGrid& grid, const LinearizedCoefficients& lc,
                                const Eigen::ArrayXd& phi) {
    Eigen::ArrayXd pp, ppp;
    grid_derivatives(grid, phi, pp, ppp, /*even_at_origin=*/grid.radial());
    return -lc.a * ppp + lc.b * pp + lc.c * phi;
}

GraphState step(const SyncChart& chart, const GraphState& state,
                const PrescribedCurvatureField& H_field, const FlowConfig& config) {
    const PrescribedCurvatureField* field = &H_field;
    PrescribedCurvatureField reversed;
    if (config.orientation == FlowConfig::Orientation::past) {
        reversed = negated(H_field);
        field = &reversed;
    }
    KernelScratch scratch;
    Eigen::ArrayXd V;
    double q0 = 0.0;
    const double dt = compute_dt(chart, state, *field, config, scratch, V, q0);
    GraphState next = state;
    advance(chart, next, *field, config, dt, scratch, V, q0);
    return next;
}

RunResult run_flow(const SyncChart& chart, const GraphState& initial,
                   const PrescribedCurvatureField& H_field, const FlowConfig& config,
                   const DiagnosticsConfig& diag) {
    const auto wall0 = std::chrono::steady_clock::now();

    RunResult out;
    PrescribedCurvatureField field =
        config.orientation == FlowConfig::Orientation::past ? negated(H_field) : H_field;
    FlowConfig cfg = config;
    cfg.orientation = FlowConfig::Orientation::future;

    GraphState state = initial;
    const SpatialGrid& grid = *state.grid;
    const Eigen::Index N = grid.nodes;
    const int dim = grid.n + 1;
    const double s_eps = 1e-12 * std::max(1.0, std::abs(cfg.s_end));

    out.termination = "completed";

    const bool barrier_present = bool(diag.barrier.lower) || bool(diag.barrier.upper);

    // Emits one diagnostics row; returns false when a configured fatal
    // condition (barrier / height window) fires.
    auto record_now = [&](const GraphState& st) -> bool {
        SurfaceGeometry geom = graph_geometry(chart, st, diag.diag_frame, 0.0);
        DiagnosticsRecord rec;
        rec.s = st.s;
        Eigen::ArrayXd hcal(N);
        for (Eigen::Index i = 0; i < N; ++i) hcal[i] = field.at(st.w[i], grid.r[i], dim);
        rec.sup_H_minus_h = (geom.H - hcal).abs().maxCoeff();
        rec.sup_kappa = geom.kappa.maxCoeff();
        rec.sup_A = geom.A_norm.maxCoeff();
        rec.sup_phi = ecker_quantity(geom, hcal, diag.lambda, diag.mu).maxCoeff();
        rec.u_min = geom.u.minCoeff();
        rec.u_max = geom.u.maxCoeff();
        rec.q_min = geom.q_min;
        BarrierFlags flags;
        if (barrier_present) {
            flags = barrier_check(geom.u, grid.r, diag.barrier);
            rec.barrier_violations = flags.violations;
        }
        out.records.push_back(rec);
        if (diag.keep_states) out.states.push_back(st);
        if (rec.q_min < cfg.delta_warn) ++out.warn_count;
        if (diag.barrier.fatal && flags.violations > 0) {
            out.termination = "barrier_violation";
            return false;
        }
        if (diag.height_window_enabled &&
            (rec.u_max >= diag.tau_plus || rec.u_min <= diag.tau_minus)) {
            out.termination = "height_escape";
            return false;
        }
        return true;
    };

    KernelScratch scratch;
    Eigen::ArrayXd V;

    try {
        bool go = record_now(state);
        long long k_record = 0;  // index of the last exact-s record emitted
        while (go && state.s < cfg.s_end - s_eps) {
            if (out.steps >= cfg.max_steps) {
                out.termination = "max_steps";
                break;
            }
            double q0 = 0.0;
            double dt = compute_dt(chart, state, field, cfg, scratch, V, q0);

            double target = cfg.s_end;
            bool lands_on_record = false;
            if (cfg.record_ds > 0.0) {
                const double next_rec = double(k_record + 1) * cfg.record_ds;
                if (next_rec < target - s_eps) target = next_rec;
            }
            if (state.s + dt >= target - s_eps) {
                dt = target - state.s;
                lands_on_record = true;
            }

            advance(chart, state, field, cfg, dt, scratch, V, q0);
            ++out.steps;

            bool do_record = false;
            if (cfg.record_ds > 0.0) {
                if (lands_on_record) {
                    state.s = target;  // snap: keeps record spacing exactly uniform
                    if (std::abs(target - double(k_record + 1) * cfg.record_ds) <= s_eps)
                        ++k_record;
                    do_record = true;
                }
            } else {
                do_record = (out.steps % std::max(1, cfg.record_every) == 0) ||
                            state.s >= cfg.s_end - s_eps;
            }
            if (do_record) go = record_now(state);
        }
        if (go && out.termination == "completed" && !out.records.empty() &&
            out.records.back().s < state.s - s_eps)
            record_now(state);
    } catch (const SpacelikeViolation&) {
        out.termination = "spacelike_violation";
    } catch (const StepTooSmall&) {
        out.termination = "step_too_small";
    } catch (const DomainError&) {
        out.termination = "domain_error";
    }

    out.final_state = state;
    if (diag.keep_states && out.states.size() >= 3)
        fill_residuals(out.records, out.states, chart, field, diag.diag_frame, diag.ricci_normal);

    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    return out;
}

GraphState stationary_solve(const SyncChart& chart, const GraphState& initial,
                            const PrescribedCurvatureField& H_field, double tol, int max_iter,
                            NewtonReport* report, double delta_floor) {
    const SpatialGrid& grid = *initial.grid;
    const Eigen::Index N = grid.nodes;
    const bool radial = grid.radial();
    if (report) {
        report->iterations = 0;
        report->residuals.clear();
    }

    GraphState state = initial;
    KernelScratch scratch;
    Eigen::ArrayXd V;

    for (int iter = 0; iter <= max_iter; ++iter) {
        double q_min = 0.0;
        velocity_kernel(chart, *state.grid, state.w, H_field, scratch, V, q_min, nullptr);
        if (q_min < delta_floor) {
            std::ostringstream os;
            os << "stationary_solve: iterate left the spacelike set (q_min = " << q_min << ")";
            throw SpacelikeViolation(os.str());
        }
        // sup |H - Hcal| = sup |V| / sqrt(q), over the solved rows only: the
        // Dirichlet-pinned nodes are data, not unknowns, and their one-sided
        // curvature stencil is a diagnostic the iteration cannot act on.
        double resid = 0.0;
        for (Eigen::Index i = 0; i < N; ++i) {
            const bool pinned = (grid.topology == Topology::radial && i == N - 1) ||
                                (grid.topology == Topology::box_dirichlet &&
                                 (i == 0 || i == N - 1));
            if (pinned) continue;
            resid = std::max(resid, std::abs(V[i]) / std::sqrt(1.0 - scratch.wp[i] * scratch.wp[i] /
                                                                chart.terms(state.w[i], grid.r[i]).R));
        }
        if (report) {
            report->iterations = iter;
            report->residuals.push_back(resid);
        }
        if (resid <= tol) return state;
        if (iter == max_iter) break;

        const LinearizedCoefficients lc = linearized_coefficients(chart, state, H_field);

        // Assemble L phi = V in the generator coordinate xi.
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(std::size_t(3 * N));
        Vec rhs(N);
        const double h = grid.h, h2 = h * h;
        for (Eigen::Index i = 0; i < N; ++i) {
            const bool last = (i == N - 1);
            const bool first = (i == 0);
            const bool dirichlet =
                (grid.topology == Topology::radial && last) ||
                (grid.topology == Topology::box_dirichlet && (first || last));
            if (dirichlet) {
                trip.emplace_back(int(i), int(i), 1.0);
                rhs[i] = 0.0;
                continue;
            }
            const double J = grid.J[i], Jp = grid.Jp[i];
            const double axx = lc.a[i] / (J * J);                 // phi_xixi coefficient
            const double ax = lc.a[i] * Jp / (J * J * J) + lc.b[i] / J;  // phi_xi coefficient
            if (radial && first) {
                // Even symmetry: phi_xi(0) = 0, phi_xixi(0) = 2(phi_1 - phi_0)/h^2.
                trip.emplace_back(0, 0, 2.0 * axx / h2 + lc.c[0]);
                trip.emplace_back(0, 1, -2.0 * axx / h2);
            } else if (grid.topology == Topology::box_periodic) {
                const Eigen::Index ip = (i + 1) % N, im = (i + N - 1) % N;
                trip.emplace_back(int(i), int(im), -axx / h2 - ax / (2.0 * h));
                trip.emplace_back(int(i), int(i), 2.0 * axx / h2 + lc.c[i]);
                trip.emplace_back(int(i), int(ip), -axx / h2 + ax / (2.0 * h));
            } else {
                trip.emplace_back(int(i), int(i - 1), -axx / h2 - ax / (2.0 * h));
                trip.emplace_back(int(i), int(i), 2.0 * axx / h2 + lc.c[i]);
                trip.emplace_back(int(i), int(i + 1), -axx / h2 + ax / (2.0 * h));
            }
            rhs[i] = V[i];
        }
        Eigen::SparseMatrix<double> M(static_cast<int>(N), static_cast<int>(N));
        M.setFromTriplets(trip.begin(), trip.end());
        M.makeCompressed();
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(M);
        if (lu.info() != Eigen::Success)
            throw NoConvergence("stationary_solve: linear solve failed (singular operator)");
        Vec phi = lu.solve(rhs);
        if (lu.info() != Eigen::Success)
            throw NoConvergence("stationary_solve: linear solve failed");
        state.w += phi.array();
    }
    std::ostringstream os;
    os << "stationary_solve: no convergence after " << max_iter << " iterations";
    throw NoConvergence(os.str());
}

} // namespace pmcf
