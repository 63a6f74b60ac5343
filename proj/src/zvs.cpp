#include "dab/zvs.hpp"

#include <cmath>

namespace dab {

double instantaneous_current(cplx i_qd, double theta) {
    return (i_qd * std::polar(1.0, theta)).real();
}

ZvsReport zvs_check(const OperatingPoint& op, const ConverterParams& p) {
    const double d1 = op.control.d1;
    const double d2 = op.control.d2;
    const double delta = op.control.delta();

    ZvsReport rep;
    rep.P_target = op.P_target;
    rep.alpha1 = std::numbers::pi - d1;
    rep.alpha2 = std::numbers::pi - d2;

    // Phasors are stored in the rotated (S_d1 = 0) convention; a waveform
    // angle theta maps to phasor angle theta - pi/2.
    auto i1_at = [&](double theta) {
        return instantaneous_current(current_phasor_1(op.state), theta - phasor_frame_offset);
    };
    auto i2_at = [&](double theta) {
        return instantaneous_current(current_phasor_2(op.state), theta - phasor_frame_offset);
    };

    rep.current[0] = i1_at(std::numbers::pi - 0.5 * rep.alpha1);
    rep.current[1] = i1_at(0.5 * rep.alpha1);
    rep.current[2] = i2_at(delta - 0.5 * rep.alpha2);
    rep.current[3] = i2_at(delta + 0.5 * rep.alpha2);

    rep.threshold[0] = p.I1min;
    rep.threshold[1] = p.I1min;
    rep.threshold[2] = p.I2min;
    rep.threshold[3] = p.I2min;

    rep.pass[0] = rep.current[0] > p.I1min;
    rep.pass[1] = rep.current[1] < -p.I1min;
    rep.pass[2] = rep.current[2] > p.I2min;
    rep.pass[3] = rep.current[3] > p.I2min;
    return rep;
}

std::vector<ZvsReport> zvs_map(const SweepTable& table, const ConverterParams& p) {
    std::vector<ZvsReport> out;
    out.reserve(table.points.size());
    for (const auto& op : table.points) out.push_back(zvs_check(op, p));
    return out;
}

} // namespace dab
