#pragma once

// Steady-state operating-point optimization: minimize the sum of squared
// phasor-current magnitudes over (d1, d2, delta) subject to the output
// dc-current constraint, with the four current-phasor equations eliminated
// by an inner linear solve and the input current given in closed form.
// Augmented-Lagrangian outer loop around a projected damped-Newton inner
// minimizer, multi-started on a coarse delta grid.

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "dab/envelope.hpp"
#include "dab/model.hpp"
#include "dab/params.hpp"

namespace dab {

/// A solved steady state: controls, phasors, envelope state, powers and
/// solver diagnostics. S_qd1 is purely real by convention.
struct OperatingPoint {
    ControlVector control;
    cplx s_qd1{}, s_qd2{};
    EnvelopeState state;
    double P_target = 0.0;  ///< requested dc output power [W]
    double Io = 0.0;        ///< load current at Vc2_ref [A]
    double Pin = 0.0, Pout = 0.0;
    double objective = 0.0;  ///< |I_qd1|^2 + |I_qd2|^2 [A^2]
    bool converged = false;
    int iterations = 0;
    double constraint_violation = 0.0;  ///< scaled output-current residual
    double optimality = 0.0;            ///< scaled projected Lagrangian-gradient norm
};

/// Solver tolerances and caps. Defaults: constraint 1e-6 relative,
/// first-order optimality 1e-6 scaled, 500 iterations.
struct SolveOptions {
    double tol_constraint = 1e-6;
    double tol_optimality = 1e-6;
    int max_iterations = 500;
    std::uint64_t seed = 0;  ///< jitters the multi-start seeds
};

/// Currents (I_qd1, I_qd2) solving the four steady-state current equations
/// for given control phasors and dc voltages. Unique for omega_s != 0;
/// throws singular_system_error at degenerate parameters.
std::pair<cplx, cplx> solve_currents(cplx s_qd1, cplx s_qd2, double vc1, double vc2,
                                     const ConverterParams& p);

/// Solve the minimum-current operating point delivering P_target.
/// |P_target| above the transferable bound throws no_feasible_point_error;
/// hitting the iteration cap returns converged = false with diagnostics.
OperatingPoint solve_operating_point(double P_target, const ConverterParams& p,
                                     const std::optional<OperatingPoint>& warm_start = std::nullopt,
                                     const SolveOptions& opts = {});

/// A power sweep: one solved row per grid point.
struct SweepTable {
    std::vector<OperatingPoint> points;

    bool all_converged() const;
};

/// Continuation sweep over [P_min, P_max] with `steps` points, warm-starting
/// each point from its neighbor. Per-point failures are flagged rows, never
/// aborts.
SweepTable sweep_power(double P_min, double P_max, int steps, const ConverterParams& p,
                       const SolveOptions& opts = {});

/// Maximum transferable dc output power under the first-harmonic model
/// (dense control-box grid plus local polish). Feasibility guard for the
/// operating-point solver.
double max_transferable_power(const ConverterParams& p);

/// Transferred dc output power at given controls (positive = forward).
double fha_output_power(double d1, double d2, double delta, const ConverterParams& p);

} // namespace dab
