// Monitored quantities over flow trajectories: the Ecker quantity, evolution
// identity residuals (with the tangential corrections a graph flow needs),
// decay fitting, and barrier checks.  Also owns CSV serialization of record
// series.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pmcf/flow.hpp"

namespace pmcf {

// Phi = e^{lambda u} kappa^2 + mu (H - Hcal)^2 per node.
Eigen::ArrayXd ecker_quantity(const SurfaceGeometry& geom, const Eigen::ArrayXd& Hcal,
                              double lambda, double mu);
Eigen::ArrayXd ecker_quantity(const SurfaceGeometry& geom, const PrescribedCurvatureField& H_field,
                              double lambda, double mu);

struct ResidualTriple {
    double r1 = 0.0, r6 = 0.0, r7 = 0.0;
};

// Residuals of the evolution identities at the middle of a three-state
// window (states at s - ds, s, s + ds from one run; WindowError when the
// spacing is unequal beyond 1e-6 relative).
//
// A graph flow moves points tangentially as well as normally: a fixed-x
// curve has velocity w_s d_t = (H - Hcal)/lambda * nu + V with tangential
// part V^i = -w_s gamma^{ij} w_j.  The identities hold along the normal
// flow, so each residual subtracts the Lie/advection term of V:
//   r1 = max-node | d_s gamma - 2 (H - Hcal) A - L_V gamma |
//   r6 = | d_s f - V.grad f - Lap f + (|A|^2 + Ric(nu,nu) + dHcal(nu)) f |,
//        f = H - Hcal
//   r7 = | d_s u - alpha^{-1} kappa (H - Hcal) - V.grad u |
ResidualTriple evolution_residuals(const SyncChart& chart, const PrescribedCurvatureField& H_field,
                                   const GraphState& prev, const GraphState& mid,
                                   const GraphState& next,
                                   const std::optional<TimeFunction>& diag_frame,
                                   double ricci_normal = 0.0);

// Fill the r1/r6/r7 columns of a record series from its recorded states
// (centered windows; second-order one-sided at the ends; tolerates slightly
// unequal spacing by using the nonuniform 3-point stencil).
void fill_residuals(std::vector<DiagnosticsRecord>& records, const std::vector<GraphState>& states,
                    const SyncChart& chart, const PrescribedCurvatureField& H_field,
                    const std::optional<TimeFunction>& diag_frame, double ricci_normal = 0.0);

struct DecayFit {
    double rate = 0.0;       // -slope of the least-squares line on (s, log v)
    double amplitude = 0.0;  // exp(intercept)
    double fit_residual = 0.0;  // RMS of log-residuals
};

// Least-squares exponential fit over the window [s_a, s_b].  Throws
// InsufficientData (< 8 samples in window) or NonPositiveValue.
DecayFit decay_fit(const std::vector<double>& s, const std::vector<double>& value,
                   double s_a, double s_b);

struct BarrierFlags {
    int violations = 0;
    double worst_margin = 1e300;  // most negative clearance observed
};

// Compare the height field u(node) against the barrier profiles.
BarrierFlags barrier_check(const Eigen::ArrayXd& u, const Eigen::ArrayXd& r,
                           const BarrierSpec& spec);

// Gradient-identity residual max-node | |grad u|^2_gamma - alpha^{-2}(kappa^2 - 1) |.
double gradient_identity_residual(const SurfaceGeometry& geom);

// CSV serialization; fixed column order:
// s, sup_H_minus_h, sup_kappa, sup_A, sup_phi, u_min, u_max, q_min, r1, r6,
// r7, barrier_violations.  Values use max-precision round-trip formatting so
// identical runs produce bit-identical files.
extern const char* kRecordCsvHeader;
void write_records_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& records);
void write_records_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records);

} // namespace pmcf
