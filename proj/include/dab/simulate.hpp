#pragma once

// Full-order switched time-domain simulator. Fixed-step RK4 on a per-cycle
// grid whose breakpoints include every switching edge of s1 and s2, so each
// integration sub-step sees constant switching values and the integrator
// keeps its order across discontinuities.

#include <complex>
#include <vector>

#include "dab/model.hpp"
#include "dab/optsolve.hpp"
#include "dab/params.hpp"

namespace dab {

/// Recorded time series (uniform sample grid aligned to the switching
/// half-periods; edges are handled as internal breakpoints). Only the last
/// `recorded_cycles` cycles are kept; the run may have been much longer.
struct Waveforms {
    std::vector<double> t;  ///< [s]
    std::vector<double> Id, Vc1, I1, I2, Vc2;
    std::vector<int> s1, s2;
    std::vector<double> Io;  ///< load current at each sample [A]

    double sample_rate = 0.0;  ///< samples per second
    double duration = 0.0;     ///< total simulated time [s]
    int steps_per_cycle = 0;
    int cycles_run = 0;
    int recorded_cycles = 0;
    double cycle_residual = 0.0;  ///< last cycle-to-cycle relative state change
    FullState final_state;
};

struct SimOptions {
    double settle_tol = 1e-9;  ///< early-exit threshold on cycle-to-cycle change
    int record_last_cycles = 2;
    double blowup_norm = 1e9;
};

/// Integrate `cycles` switching periods (early exit on settling) from x0.
/// steps_per_cycle must be even and >= 200; cycles >= 1. Divergence throws
/// blowup_error naming the cycle reached.
Waveforms run_switched(const ControlVector& ctrl, const LoadModel& load, const ConverterParams& p,
                       int cycles, int steps_per_cycle, const FullState& x0,
                       const SimOptions& opts = {});

/// Cycle averages and single-bin fundamental phasor extraction over the
/// final recorded cycle. Phasors come out in the rotated (S_d1 = 0)
/// convention used by the envelope model. settled reflects the
/// cycle-to-cycle periodicity test at 1e-3 relative.
struct SteadyMetrics {
    double vc2_avg = 0.0;
    double pin_avg = 0.0;
    double pout_avg = 0.0;
    cplx i_qd1_hat{}, i_qd2_hat{};
    bool settled = false;
};

SteadyMetrics steady_metrics(const Waveforms& w, const ConverterParams& p);

/// Map a solved envelope point to instantaneous initial conditions at
/// waveform angle zero (dc states at their solved values with the physical
/// input drop, winding currents from the phasor reconstruction).
FullState full_state_from(const OperatingPoint& op, const ConverterParams& p);

} // namespace dab
