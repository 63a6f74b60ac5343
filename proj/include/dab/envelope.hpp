#pragma once

// First-harmonic envelope model: the dc states plus the current phasors in
// the frame rotating at omega_s, where periodic steady state is a fixed
// point. Complex arithmetic is carried as explicit (q, d) real pairs so a
// single real Jacobian serves the stability analysis; complex views are
// provided for phasor work.

#include <array>
#include <complex>

#include "dab/model.hpp"
#include "dab/params.hpp"

namespace dab {

struct OperatingPoint;  // optsolve.hpp

inline cplx current_phasor_1(const EnvelopeState& xe) { return {xe.Iq1, xe.Id1}; }
inline cplx current_phasor_2(const EnvelopeState& xe) { return {xe.Iq2, xe.Id2}; }

/// Time derivatives of the seven envelope states under control phasors
/// (S_qd1, S_qd2). CPL load with Vc2 <= 0 throws singular_load_error.
EnvelopeState envelope_rhs(const EnvelopeState& xe, cplx s_qd1, cplx s_qd2,
                           const LoadModel& load, const ConverterParams& p);

/// The seven steady-state equation residuals, in order: the input-voltage
/// balance, the input-current balance, the four current-phasor equations
/// (q1, d1, q2, d2), and the output-current balance.
struct SteadyStateResidual {
    std::array<double, 7> raw{};     ///< residuals in natural units (V, A, A/s, A)
    std::array<double, 7> scaled{};  ///< residuals divided by per-equation scale floors

    double max_scaled() const;
};

SteadyStateResidual steady_state_residual(const OperatingPoint& op, const ConverterParams& p);

/// Input and output dc power of a solved operating point. At steady state
/// Pin - Pout accounts for the transformer copper loss (plus the input
/// filter loss when the resistive input drop is modelled).
std::pair<double, double> dc_power_balance(const OperatingPoint& op, const ConverterParams& p);

/// Copper + filter loss implied by the phasor currents, for bookkeeping
/// checks: R1|I1|^2/2 + R2|I2|^2/2 + r*Id^2.
double envelope_loss(const OperatingPoint& op, const ConverterParams& p);

} // namespace dab
