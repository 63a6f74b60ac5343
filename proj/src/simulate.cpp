#include "dab/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dab/errors.hpp"
#include "dab/zvs.hpp"

namespace dab {

namespace {

using State5 = std::array<double, 5>;

struct RhsParams {
    double v1, ld, r, c1, c2, n;
    double a11, a12, a21, a22, b1, b2, c1c, c2c;
    const LoadModel* load;
};

inline State5 rhs5(const State5& x, int s1, int s2, const RhsParams& q) {
    const double io = q.load->io_at(x[4]);
    return {
        (q.v1 - x[1] - q.r * x[0]) / q.ld,
        (x[0] - s1 * x[2]) / q.c1,
        q.a11 * x[2] + q.a12 * x[3] + q.b1 * s1 * x[1] + q.c1c * s2 * x[4],
        q.a21 * x[2] + q.a22 * x[3] + q.b2 * s1 * x[1] + q.c2c * s2 * x[4],
        (q.n * s2 * x[3] - io) / q.c2,
    };
}

inline State5 rk4(const State5& x, double dt, int s1, int s2, const RhsParams& q) {
    const State5 k1 = rhs5(x, s1, s2, q);
    State5 xt;
    for (int i = 0; i < 5; ++i) xt[i] = x[i] + 0.5 * dt * k1[i];
    const State5 k2 = rhs5(xt, s1, s2, q);
    for (int i = 0; i < 5; ++i) xt[i] = x[i] + 0.5 * dt * k2[i];
    const State5 k3 = rhs5(xt, s1, s2, q);
    for (int i = 0; i < 5; ++i) xt[i] = x[i] + dt * k3[i];
    const State5 k4 = rhs5(xt, s1, s2, q);
    State5 out;
    for (int i = 0; i < 5; ++i) out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

double norm5(const State5& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

} // namespace

Waveforms run_switched(const ControlVector& ctrl, const LoadModel& load, const ConverterParams& p,
                       int cycles, int steps_per_cycle, const FullState& x0, const SimOptions& opts) {
    if (steps_per_cycle < 200 || steps_per_cycle % 2 != 0)
        throw std::invalid_argument("run_switched: steps_per_cycle must be even and >= 200");
    if (cycles < 1) throw std::invalid_argument("run_switched: cycles must be >= 1");

    const AcCoefficients ac(p);
    RhsParams q{p.V1, p.Ld, p.r, p.C1, p.C2, p.n,
                ac.a11, ac.a12, ac.a21, ac.a22, ac.b1, ac.b2, ac.c1, ac.c2, &load};

    const double two_pi = 2.0 * std::numbers::pi;
    const double ws = p.omega_s();
    const double delta = ctrl.delta();
    const double a1h = 0.5 * (std::numbers::pi - ctrl.d1);
    const double a2h = 0.5 * (std::numbers::pi - ctrl.d2);

    // Breakpoints over one period: the uniform sample grid plus every
    // switching edge, deduplicated.
    std::vector<double> bps;
    bps.reserve(static_cast<std::size_t>(steps_per_cycle) + 9);
    for (int k = 0; k <= steps_per_cycle; ++k)
        bps.push_back(two_pi * static_cast<double>(k) / steps_per_cycle);
    auto add_edge = [&](double th) {
        double v = std::fmod(th, two_pi);
        if (v < 0.0) v += two_pi;
        bps.push_back(v);
    };
    for (double e : {a1h, std::numbers::pi - a1h, std::numbers::pi + a1h, two_pi - a1h}) add_edge(e);
    for (double e : {delta + a2h, delta + std::numbers::pi - a2h, delta + std::numbers::pi + a2h,
                     delta + two_pi - a2h})
        add_edge(e);
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              bps.end());
    if (two_pi - bps.back() < 1e-12) bps.pop_back();
    bps.push_back(two_pi);

    // Sub-interval switching values (constant between breakpoints) and
    // whether the left breakpoint is a uniform sample.
    const std::size_t nseg = bps.size() - 1;
    std::vector<int> seg_s1(nseg), seg_s2(nseg);
    std::vector<int> sample_index(nseg, -1);
    const double sample_step = two_pi / steps_per_cycle;
    for (std::size_t i = 0; i < nseg; ++i) {
        const double mid = 0.5 * (bps[i] + bps[i + 1]);
        seg_s1[i] = switching_waveform(ctrl.d1, 0.0, mid);
        seg_s2[i] = switching_waveform(ctrl.d2, delta, mid);
        const double ratio = bps[i] / sample_step;
        const double nearest = std::round(ratio);
        if (std::abs(ratio - nearest) < 1e-9) sample_index[i] = static_cast<int>(nearest);
    }

    Waveforms w;
    w.steps_per_cycle = steps_per_cycle;
    w.sample_rate = p.fs * steps_per_cycle;
    w.recorded_cycles = std::min(opts.record_last_cycles, cycles);

    const std::size_t samples = static_cast<std::size_t>(w.recorded_cycles) * steps_per_cycle + 1;
    auto reserve_all = [&](std::size_t n) {
        w.t.reserve(n);
        w.Id.reserve(n);
        w.Vc1.reserve(n);
        w.I1.reserve(n);
        w.I2.reserve(n);
        w.Vc2.reserve(n);
        w.s1.reserve(n);
        w.s2.reserve(n);
        w.Io.reserve(n);
    };
    reserve_all(samples);

    State5 x = x0.to_array();
    int done = 0;
    double residual = std::numeric_limits<double>::infinity();
    State5 prev = x;

    // First pass: integrate without recording until the recording window.
    for (int cyc = 0; cyc < cycles; ++cyc) {
        const bool last_window = (cyc >= cycles - w.recorded_cycles);
        const double t_base = static_cast<double>(done) * two_pi / ws;

        for (std::size_t i = 0; i < nseg; ++i) {
            if (last_window && sample_index[i] >= 0) {
                w.t.push_back(t_base + bps[i] / ws);
                w.Id.push_back(x[0]);
                w.Vc1.push_back(x[1]);
                w.I1.push_back(x[2]);
                w.I2.push_back(x[3]);
                w.Vc2.push_back(x[4]);
                w.s1.push_back(seg_s1[i]);
                w.s2.push_back(seg_s2[i]);
                w.Io.push_back(load.io_at(x[4]));
            }
            const double dt = (bps[i + 1] - bps[i]) / ws;
            x = rk4(x, dt, seg_s1[i], seg_s2[i], q);
        }
        ++done;

        const double nx = norm5(x);
        if (!std::isfinite(nx) || nx > opts.blowup_norm) {
            std::ostringstream msg;
            msg << "run_switched: state diverged at cycle " << done << " (|x| = " << nx
                << ", Id = " << x[0] << ", Vc1 = " << x[1] << ", Vc2 = " << x[4] << ")";
            throw blowup_error(msg.str());
        }

        State5 diff;
        for (int i = 0; i < 5; ++i) diff[i] = x[i] - prev[i];
        residual = norm5(diff) / std::max(nx, 1e-12);
        prev = x;
        if (residual < opts.settle_tol && cyc + 1 >= w.recorded_cycles && cyc + 1 < cycles) {
            // Settled early: rerun the recording window from here.
            break;
        }
    }

    // If we exited early the recording window may be empty or partial:
    // integrate recorded_cycles more, recording.
    if (w.t.size() < samples - 1) {
        w.t.clear();
        w.Id.clear();
        w.Vc1.clear();
        w.I1.clear();
        w.I2.clear();
        w.Vc2.clear();
        w.s1.clear();
        w.s2.clear();
        w.Io.clear();
        for (int cyc = 0; cyc < w.recorded_cycles; ++cyc) {
            const double t_base = static_cast<double>(done) * two_pi / ws;
            for (std::size_t i = 0; i < nseg; ++i) {
                if (sample_index[i] >= 0) {
                    w.t.push_back(t_base + bps[i] / ws);
                    w.Id.push_back(x[0]);
                    w.Vc1.push_back(x[1]);
                    w.I1.push_back(x[2]);
                    w.I2.push_back(x[3]);
                    w.Vc2.push_back(x[4]);
                    w.s1.push_back(seg_s1[i]);
                    w.s2.push_back(seg_s2[i]);
                    w.Io.push_back(load.io_at(x[4]));
                }
                const double dt = (bps[i + 1] - bps[i]) / ws;
                x = rk4(x, dt, seg_s1[i], seg_s2[i], q);
            }
            ++done;
            State5 diff;
            for (int i = 0; i < 5; ++i) diff[i] = x[i] - prev[i];
            residual = norm5(diff) / std::max(norm5(x), 1e-12);
            prev = x;
        }
    }

    // Closing sample at the final cycle boundary.
    w.t.push_back(static_cast<double>(done) * two_pi / ws);
    w.Id.push_back(x[0]);
    w.Vc1.push_back(x[1]);
    w.I1.push_back(x[2]);
    w.I2.push_back(x[3]);
    w.Vc2.push_back(x[4]);
    w.s1.push_back(seg_s1[0]);
    w.s2.push_back(seg_s2[0]);
    w.Io.push_back(load.io_at(x[4]));

    w.cycles_run = done;
    w.duration = static_cast<double>(done) * two_pi / ws;
    w.cycle_residual = residual;
    w.final_state = FullState::from_array(x);
    return w;
}

SteadyMetrics steady_metrics(const Waveforms& w, const ConverterParams& p) {
    const int spc = w.steps_per_cycle;
    if (static_cast<int>(w.t.size()) < spc + 1)
        throw std::invalid_argument("steady_metrics: waveform shorter than one cycle");

    SteadyMetrics m;
    m.settled = w.cycle_residual < 1e-3;

    // Final cycle, excluding the closing duplicate of theta = 0.
    const std::size_t start = w.t.size() - 1 - static_cast<std::size_t>(spc);
    const double ws = p.omega_s();

    double vc2 = 0.0, pin = 0.0, pout = 0.0;
    double i1q = 0.0, i1d = 0.0, i2q = 0.0, i2d = 0.0;
    for (int k = 0; k < spc; ++k) {
        const std::size_t i = start + static_cast<std::size_t>(k);
        const double theta = ws * w.t[i];
        const double sn = std::sin(theta), cs = std::cos(theta);
        vc2 += w.Vc2[i];
        pin += p.V1 * w.Id[i];
        pout += w.Vc2[i] * w.Io[i];
        // Waveform f(theta) = Fq sin(theta) + Fd cos(theta) in the rotated
        // phasor convention.
        i1q += w.I1[i] * sn;
        i1d += w.I1[i] * cs;
        i2q += w.I2[i] * sn;
        i2d += w.I2[i] * cs;
    }
    const double inv = 1.0 / spc;
    m.vc2_avg = vc2 * inv;
    m.pin_avg = pin * inv;
    m.pout_avg = pout * inv;
    m.i_qd1_hat = cplx{2.0 * i1q * inv, 2.0 * i1d * inv};
    m.i_qd2_hat = cplx{2.0 * i2q * inv, 2.0 * i2d * inv};
    return m;
}

FullState full_state_from(const OperatingPoint& op, const ConverterParams& p) {
    FullState x;
    x.Id = op.state.Id;
    x.Vc1 = p.V1 - p.r * op.state.Id;  // physical equilibrium of the input loop
    x.I1 = instantaneous_current(current_phasor_1(op.state), -phasor_frame_offset);
    x.I2 = instantaneous_current(current_phasor_2(op.state), -phasor_frame_offset);
    x.Vc2 = op.state.Vc2;
    return x;
}

} // namespace dab
