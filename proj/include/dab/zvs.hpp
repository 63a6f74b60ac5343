#pragma once

// Zero-voltage-switching feasibility: evaluates the four half-bridge
// conditions from the solved operating point's current phasors at the
// switching instants, and maps them across a power sweep.
//
// Switching angles follow the waveform frame (primary fundamental
// ~ sin(theta)); the half-bridge conditions are, with alpha1 = pi - d1,
// alpha2 = pi - d2:
//   HB1:  I1(pi - alpha1/2) >  I1min
//   HB2:  I1(alpha1/2)      < -I1min
//   HB3:  I2(delta - alpha2/2) > I2min
//   HB4:  I2(delta + alpha2/2) > I2min
// Note the secondary pair uses ">" for both conditions while the primary
// pair is an antisymmetric (>, <) pair; the asymmetry is intentional here
// (kept exactly as specified) even though no mirrored secondary condition
// exists.

#include <vector>

#include "dab/optsolve.hpp"
#include "dab/params.hpp"

namespace dab {

/// Instantaneous value of a rotating-frame phasor at angle theta:
/// real(I_qd * e^{j theta}).
double instantaneous_current(cplx i_qd, double theta);

/// Per-half-bridge ZVS evaluation at one operating point.
struct ZvsReport {
    double P_target = 0.0;
    double alpha1 = 0.0, alpha2 = 0.0;  ///< pi - d1, pi - d2 [rad]
    /// Currents at the four switching instants [A], in half-bridge order.
    double current[4] = {0.0, 0.0, 0.0, 0.0};
    /// Threshold magnitude applied to each condition [A].
    double threshold[4] = {0.0, 0.0, 0.0, 0.0};
    bool pass[4] = {false, false, false, false};
};

/// Evaluate the four conditions at a solved operating point with the
/// thresholds carried in the parameters.
ZvsReport zvs_check(const OperatingPoint& op, const ConverterParams& p);

/// Per-row reports over a sweep.
std::vector<ZvsReport> zvs_map(const SweepTable& table, const ConverterParams& p);

} // namespace dab
