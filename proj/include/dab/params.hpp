#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace dab {

/// Physical constants of the converter plus the calibrated quantities that
/// the nominal data sheet omits (C1, C2, r, the ZVS charge thresholds) and
/// the equation-variant switches. Immutable value object; validate() after
/// construction.
struct ConverterParams {
    double V1 = 100.0;       ///< input dc voltage [V]
    double L1 = 4.2134e-3;   ///< primary winding self-inductance, primary-referred [H]
    double L2 = 4.2158e-3;   ///< secondary winding self-inductance, primary-referred [H]
    double Lm = 4.205e-3;    ///< magnetizing inductance [H]
    double Ld = 10e-3;       ///< input filter inductance [H]
    double r = 0.064;        ///< input filter series resistance [ohm] (calibrated, not nominal)
    double R1 = 0.45;        ///< primary winding resistance [ohm]
    double R2 = 0.45;        ///< secondary winding resistance, primary-referred [ohm]
    double C1 = 1.0e-3;      ///< primary dc-link capacitance [F] (calibrated, not nominal)
    double C2 = 0.25e-3;     ///< secondary dc-link capacitance [F] (calibrated, not nominal)
    double n = 0.5;          ///< transformer turns ratio (primary/secondary)
    double fs = 25e3;        ///< switching frequency [Hz]
    double Vc2_ref = 200.0;  ///< desired output voltage [V]
    double I1min = 0.0;      ///< primary ZVS charge threshold [A] (0 = sign-only test)
    double I2min = 0.0;      ///< secondary ZVS charge threshold [A] (0 = sign-only test)

    /// Substitute L2 for L1 in the I1 damping coefficient of the primary
    /// current equation (the one position where a coupled-inductor KVL
    /// derivation differs from the published equations).
    bool symmetric_transformer = false;
    /// Use the exact input-side balance Vc1 = V1 - r*Id in the steady-state
    /// solve and residuals instead of Vc1 = V1.
    bool resistive_input_drop = false;
    /// Refer the secondary bridge voltage to the primary (n*s2*Vc2 in the ac
    /// loop). false reproduces the literal published coefficients, which do
    /// not conserve power through the secondary bridge.
    bool referred_secondary_voltage = true;

    double omega_s() const { return 2.0 * std::numbers::pi * fs; }
    /// h = Lm^2 - L1*L2, the (negative) determinant scale of the coupled
    /// inductor matrix; divisor of every ac-loop coefficient.
    double h() const { return Lm * Lm - L1 * L2; }

    /// Throws std::invalid_argument when a hard invariant fails
    /// (non-positive inductance/capacitance/frequency, h == 0, ...).
    /// Returns a warning string (empty if none) for soft conditions:
    /// L1^2 <= Lm^2 breaks the zero-dynamics stability condition but is
    /// still simulable.
    std::string validate() const;
};

/// Duty/phase-shift triple. delta is derived, never stored.
struct ControlVector {
    double d1 = std::numbers::pi;  ///< primary pulse width [rad], (0, pi]
    double d2 = std::numbers::pi;  ///< secondary pulse width [rad], (0, pi]
    double d3 = 0.0;               ///< outer bridge shift [rad]

    double delta() const { return d3 + 0.5 * (d1 - d2); }
};

/// Outer phase shift between the primary and secondary ac voltages.
inline double outer_phase_shift(double d1, double d2, double d3) {
    return d3 + 0.5 * (d1 - d2);
}

/// The five switched-model states.
struct FullState {
    double Id = 0.0;   ///< input inductor current [A]
    double Vc1 = 0.0;  ///< primary dc-link voltage [V]
    double I1 = 0.0;   ///< primary winding current [A]
    double I2 = 0.0;   ///< secondary winding current, primary-referred [A]
    double Vc2 = 0.0;  ///< secondary dc-link voltage [V]

    std::array<double, 5> to_array() const { return {Id, Vc1, I1, I2, Vc2}; }
    static FullState from_array(const std::array<double, 5>& a) {
        return {a[0], a[1], a[2], a[3], a[4]};
    }
};

/// The seven envelope states: dc states plus the rotating-frame current
/// phasors split into (q, d) real pairs, f_qd = f_q + j*f_d.
struct EnvelopeState {
    double Id = 0.0;
    double Vc1 = 0.0;
    double Iq1 = 0.0;
    double Id1 = 0.0;
    double Iq2 = 0.0;
    double Id2 = 0.0;
    double Vc2 = 0.0;

    std::array<double, 7> to_array() const { return {Id, Vc1, Iq1, Id1, Iq2, Id2, Vc2}; }
    static EnvelopeState from_array(const std::array<double, 7>& a) {
        return {a[0], a[1], a[2], a[3], a[4], a[5], a[6]};
    }
};

/// Output load: an ideal current sink or a constant-power load (which
/// presents Io = P/Vc2 and requires Vc2 > 0 at evaluation).
struct LoadModel {
    enum class Kind { ConstantCurrent, ConstantPower };

    Kind kind = Kind::ConstantCurrent;
    double value = 0.0;  ///< Io [A] for ConstantCurrent, P [W] for ConstantPower

    static LoadModel constant_current(double io) { return {Kind::ConstantCurrent, io}; }
    static LoadModel constant_power(double p) { return {Kind::ConstantPower, p}; }

    /// Load current drawn at the given output voltage. Throws
    /// singular_load_error for a constant-power load at Vc2 <= 0.
    double io_at(double vc2) const;
};

} // namespace dab
