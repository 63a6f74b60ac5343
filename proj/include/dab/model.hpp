#pragma once

// Switched full-order model: quasi-square switching functions, the five
// state equations, and the first-harmonic phasors of the switching
// functions.
//
// Angle convention: the physical waveforms live in the frame where the
// primary switching function's fundamental is sin(theta) (positive pulse
// centered at theta = pi/2). Phasors use the rotated convention in which
// the primary phasor is purely real (S_d1 = 0); an instantaneous value at
// waveform angle theta is real(F * e^{j(theta - pi/2)}).

#include <complex>

#include "dab/params.hpp"

namespace dab {

using cplx = std::complex<double>;

/// Phase offset between the waveform frame and the phasor frame:
/// f(theta) = real(F e^{j(theta - phasor_frame_offset)}).
inline constexpr double phasor_frame_offset = std::numbers::pi / 2.0;

/// Quasi-square switching function of pulse width d, shifted by phase,
/// evaluated at theta (2*pi-periodic). Pulse intervals are half-open
/// [start, end) so the value at an edge is the post-edge one.
/// d outside [0, pi] is a domain error.
int switching_waveform(double d, double phase, double theta);

/// Coefficients of the ac current equations, precomputed once per parameter
/// set. a_* multiply currents, b_* multiply s1*Vc1, c_* multiply s2*Vc2.
struct AcCoefficients {
    double a11, a12, a21, a22;
    double b1, b2;
    double c1, c2;

    explicit AcCoefficients(const ConverterParams& p) {
        const double h = p.h();
        a11 = (p.symmetric_transformer ? p.L2 : p.L1) * p.R1 / h;
        a12 = p.Lm * p.R2 / h;
        a21 = p.Lm * p.R1 / h;
        a22 = p.L1 * p.R2 / h;
        b1 = -p.L2 / h;
        b2 = -p.Lm / h;
        const double k = p.referred_secondary_voltage ? p.n : 1.0;
        c1 = k * p.Lm / h;
        c2 = k * p.L1 / h;
    }
};

/// Right-hand side of the switched state equations at switching values
/// (s1, s2) and the given load. CPL load with Vc2 <= 0 throws
/// singular_load_error.
FullState full_order_rhs(const FullState& x, int s1, int s2, const LoadModel& load,
                         const ConverterParams& p);

/// First-harmonic phasors of the two switching functions:
/// S_qd1 = (4/pi) sin(d1/2) (purely real by convention) and
/// S_qd2 = (4/pi) sin(d2/2) e^{-j delta}.
std::pair<cplx, cplx> fundamental_phasors(double d1, double d2, double delta);

} // namespace dab
