#include "dab/envelope.hpp"

#include <algorithm>
#include <cmath>

#include "dab/optsolve.hpp"

namespace dab {

EnvelopeState envelope_rhs(const EnvelopeState& xe, cplx s_qd1, cplx s_qd2,
                           const LoadModel& load, const ConverterParams& p) {
    const AcCoefficients c(p);
    const double ws = p.omega_s();
    const double io = load.io_at(xe.Vc2);

    const double sq1 = s_qd1.real(), sd1 = s_qd1.imag();
    const double sq2 = s_qd2.real(), sd2 = s_qd2.imag();

    EnvelopeState d;
    d.Id = (p.V1 - xe.Vc1 - p.r * xe.Id) / p.Ld;
    // real(S I*) = Sq Iq + Sd Id
    d.Vc1 = (xe.Id - 0.5 * (sq1 * xe.Iq1 + sd1 * xe.Id1)) / p.C1;
    d.Iq1 = c.a11 * xe.Iq1 + c.a12 * xe.Iq2 + c.b1 * sq1 * xe.Vc1 + c.c1 * sq2 * xe.Vc2 + ws * xe.Id1;
    d.Id1 = c.a11 * xe.Id1 + c.a12 * xe.Id2 + c.b1 * sd1 * xe.Vc1 + c.c1 * sd2 * xe.Vc2 - ws * xe.Iq1;
    d.Iq2 = c.a21 * xe.Iq1 + c.a22 * xe.Iq2 + c.b2 * sq1 * xe.Vc1 + c.c2 * sq2 * xe.Vc2 + ws * xe.Id2;
    d.Id2 = c.a21 * xe.Id1 + c.a22 * xe.Id2 + c.b2 * sd1 * xe.Vc1 + c.c2 * sd2 * xe.Vc2 - ws * xe.Iq2;
    d.Vc2 = (0.5 * p.n * (sq2 * xe.Iq2 + sd2 * xe.Id2) - io) / p.C2;
    return d;
}

double SteadyStateResidual::max_scaled() const {
    double m = 0.0;
    for (double v : scaled) m = std::max(m, std::abs(v));
    return m;
}

SteadyStateResidual steady_state_residual(const OperatingPoint& op, const ConverterParams& p) {
    const AcCoefficients c(p);
    const double ws = p.omega_s();
    const EnvelopeState& x = op.state;
    const double sq1 = op.s_qd1.real(), sd1 = op.s_qd1.imag();
    const double sq2 = op.s_qd2.real(), sd2 = op.s_qd2.imag();

    SteadyStateResidual res;
    const double vc1_balance = p.resistive_input_drop ? (p.V1 - p.r * x.Id) : p.V1;
    res.raw[0] = x.Vc1 - vc1_balance;
    res.raw[1] = sq1 * x.Iq1 + sd1 * x.Id1 - 2.0 * x.Id;
    res.raw[2] = c.a11 * x.Iq1 + c.a12 * x.Iq2 + c.b1 * sq1 * x.Vc1 + c.c1 * sq2 * x.Vc2 + ws * x.Id1;
    res.raw[3] = c.a11 * x.Id1 + c.a12 * x.Id2 + c.b1 * sd1 * x.Vc1 + c.c1 * sd2 * x.Vc2 - ws * x.Iq1;
    res.raw[4] = c.a21 * x.Iq1 + c.a22 * x.Iq2 + c.b2 * sq1 * x.Vc1 + c.c2 * sq2 * x.Vc2 + ws * x.Id2;
    res.raw[5] = c.a21 * x.Id1 + c.a22 * x.Id2 + c.b2 * sd1 * x.Vc1 + c.c2 * sd2 * x.Vc2 - ws * x.Iq2;
    res.raw[6] = sq2 * x.Iq2 + sd2 * x.Id2 - 2.0 * op.Io / p.n;

    const double imax = std::max({std::abs(x.Iq1), std::abs(x.Id1), std::abs(x.Iq2), std::abs(x.Id2), 1.0});
    const std::array<double, 7> scale = {
        std::max(p.V1, 1.0),
        std::max(2.0 * std::abs(x.Id), 1.0),
        ws * imax,
        ws * imax,
        ws * imax,
        ws * imax,
        std::max(2.0 * std::abs(op.Io) / p.n, 1.0),
    };
    for (int i = 0; i < 7; ++i) res.scaled[i] = res.raw[i] / scale[i];
    return res;
}

std::pair<double, double> dc_power_balance(const OperatingPoint& op, const ConverterParams& p) {
    return {p.V1 * op.state.Id, op.state.Vc2 * op.Io};
}

double envelope_loss(const OperatingPoint& op, const ConverterParams& p) {
    const double i1sq = std::norm(current_phasor_1(op.state));
    const double i2sq = std::norm(current_phasor_2(op.state));
    return 0.5 * p.R1 * i1sq + 0.5 * p.R2 * i2sq + p.r * op.state.Id * op.state.Id;
}

} // namespace dab
