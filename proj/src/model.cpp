#include "dab/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dab/errors.hpp"

namespace dab {

std::string ConverterParams::validate() const {
    auto bad = [](const char* what) { throw std::invalid_argument(std::string("ConverterParams: ") + what); };
    if (!(L1 > 0.0) || !(L2 > 0.0) || !(Lm > 0.0) || !(Ld > 0.0)) bad("inductances must be positive");
    if (!(C1 > 0.0) || !(C2 > 0.0)) bad("capacitances must be positive");
    if (!(fs > 0.0)) bad("switching frequency must be positive");
    if (r < 0.0 || R1 < 0.0 || R2 < 0.0) bad("resistances must be non-negative");
    if (!(n > 0.0)) bad("turns ratio must be positive");
    if (I1min < 0.0 || I2min < 0.0) bad("ZVS thresholds must be non-negative");
    if (h() == 0.0) bad("Lm^2 == L1*L2 (coupled-inductor matrix singular)");

    std::ostringstream warn;
    if (L1 * L1 <= Lm * Lm)
        warn << "L1^2 <= Lm^2: transformer zero dynamics are not guaranteed stable";
    return warn.str();
}

double LoadModel::io_at(double vc2) const {
    switch (kind) {
        case Kind::ConstantCurrent:
            return value;
        case Kind::ConstantPower:
            if (vc2 <= 0.0)
                throw singular_load_error("constant-power load evaluated at Vc2 <= 0");
            return value / vc2;
    }
    return 0.0;
}

int switching_waveform(double d, double phase, double theta) {
    if (!(d >= 0.0 && d <= std::numbers::pi))
        throw std::invalid_argument("switching_waveform: pulse width outside [0, pi]");
    const double two_pi = 2.0 * std::numbers::pi;
    double phi = std::fmod(theta - phase, two_pi);
    if (phi < 0.0) phi += two_pi;

    const double half_gap = 0.5 * (std::numbers::pi - d);  // alpha/2
    if (phi >= half_gap && phi < std::numbers::pi - half_gap) return 1;
    if (phi >= std::numbers::pi + half_gap && phi < two_pi - half_gap) return -1;
    return 0;
}

FullState full_order_rhs(const FullState& x, int s1, int s2, const LoadModel& load,
                         const ConverterParams& p) {
    const AcCoefficients c(p);
    const double io = load.io_at(x.Vc2);

    FullState d;
    d.Id = (p.V1 - x.Vc1 - p.r * x.Id) / p.Ld;
    d.Vc1 = (x.Id - s1 * x.I1) / p.C1;
    d.I1 = c.a11 * x.I1 + c.a12 * x.I2 + c.b1 * s1 * x.Vc1 + c.c1 * s2 * x.Vc2;
    d.I2 = c.a21 * x.I1 + c.a22 * x.I2 + c.b2 * s1 * x.Vc1 + c.c2 * s2 * x.Vc2;
    d.Vc2 = (p.n * s2 * x.I2 - io) / p.C2;
    return d;
}

std::pair<cplx, cplx> fundamental_phasors(double d1, double d2, double delta) {
    if (!(d1 >= 0.0 && d1 <= std::numbers::pi) || !(d2 >= 0.0 && d2 <= std::numbers::pi))
        throw std::invalid_argument("fundamental_phasors: pulse width outside [0, pi]");
    const double k = 4.0 / std::numbers::pi;
    const cplx s1{k * std::sin(0.5 * d1), 0.0};
    const cplx s2 = k * std::sin(0.5 * d2) * std::polar(1.0, -delta);
    return {s1, s2};
}

} // namespace dab
