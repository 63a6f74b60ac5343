#include "dab/stability.hpp"

#include <cmath>
#include <stdexcept>

#include "dab/errors.hpp"

namespace dab {

num::DenseMatrix linearize_envelope(const OperatingPoint& op, LoadMode mode, const ConverterParams& p) {
    if (mode == LoadMode::CPL && !(op.state.Vc2 > 0.0))
        throw singular_load_error("linearize_envelope: CPL linearization requires Vc2 > 0");

    const AcCoefficients c(p);
    const double ws = p.omega_s();
    const double sq1 = op.s_qd1.real(), sd1 = op.s_qd1.imag();
    const double sq2 = op.s_qd2.real(), sd2 = op.s_qd2.imag();

    // State order: Id, Vc1, Iq1, Id1, Iq2, Id2, Vc2.
    num::DenseMatrix j(7, 7);
    j(0, 0) = -p.r / p.Ld;
    j(0, 1) = -1.0 / p.Ld;

    j(1, 0) = 1.0 / p.C1;
    j(1, 2) = -0.5 * sq1 / p.C1;
    j(1, 3) = -0.5 * sd1 / p.C1;

    j(2, 1) = c.b1 * sq1;
    j(2, 2) = c.a11;
    j(2, 3) = ws;
    j(2, 4) = c.a12;
    j(2, 6) = c.c1 * sq2;

    j(3, 1) = c.b1 * sd1;
    j(3, 2) = -ws;
    j(3, 3) = c.a11;
    j(3, 5) = c.a12;
    j(3, 6) = c.c1 * sd2;

    j(4, 1) = c.b2 * sq1;
    j(4, 2) = c.a21;
    j(4, 4) = c.a22;
    j(4, 5) = ws;
    j(4, 6) = c.c2 * sq2;

    j(5, 1) = c.b2 * sd1;
    j(5, 3) = c.a21;
    j(5, 4) = -ws;
    j(5, 5) = c.a22;
    j(5, 6) = c.c2 * sd2;

    j(6, 4) = 0.5 * p.n * sq2 / p.C2;
    j(6, 5) = 0.5 * p.n * sd2 / p.C2;
    if (mode == LoadMode::CPL)
        j(6, 6) = op.P_target / (p.C2 * op.state.Vc2 * op.state.Vc2);
    return j;
}

EigenReport eigen_report(const OperatingPoint& op, LoadMode mode, const ConverterParams& p) {
    EigenReport rep;
    rep.power = op.P_target;
    rep.mode = mode;
    rep.jacobian = linearize_envelope(op, mode, p);
    rep.spectrum = num::eigenvalues(rep.jacobian);
    rep.stable = rep.spectrum.all_left_half_plane();
    rep.dominant = rep.spectrum.dominant();
    return rep;
}

std::vector<EigenReport> eigen_table(const std::vector<double>& powers, LoadMode mode,
                                     const ConverterParams& p, const SolveOptions& opts) {
    std::vector<EigenReport> out;
    out.reserve(powers.size());
    std::optional<OperatingPoint> warm;
    for (double P : powers) {
        const OperatingPoint op = solve_operating_point(P, p, warm, opts);
        if (!op.converged)
            throw convergence_error("eigen_table: operating-point solve did not converge");
        warm = op;
        out.push_back(eigen_report(op, mode, p));
    }
    return out;
}

ZeroDynamics zero_dynamics_matrices(const ConverterParams& p) {
    const double h = p.h();
    const double a11 = p.L1 * p.R1 / h;
    const double a12 = p.Lm * p.R2 / h;
    const double a21 = p.Lm * p.R1 / h;
    const double a22 = p.L1 * p.R2 / h;
    const double ws = p.omega_s();

    ZeroDynamics z;
    z.a_real = num::DenseMatrix(2, 2);
    z.a_real(0, 0) = a11;
    z.a_real(0, 1) = a12;
    z.a_real(1, 0) = a21;
    z.a_real(1, 1) = a22;

    z.a_complex = z.a_real;
    z.a_complex(0, 0) -= num::cplx{0.0, ws};
    z.a_complex(1, 1) -= num::cplx{0.0, ws};

    z.filter_pole = -p.r / p.Ld;
    return z;
}

HurwitzVerdict hurwitz_real(double a1, double a0_const) {
    HurwitzVerdict v;
    v.a0 = 1.0;
    v.a1 = a1;
    v.b1 = 0.0;
    v.a2 = a0_const;
    v.b2 = 0.0;
    v.delta1 = a1;
    v.delta2 = a1 * a1 * a0_const;  // b1 = b2 = 0 reduction of the complex determinant
    v.stable = (a1 > 0.0) && (a0_const > 0.0);
    return v;
}

HurwitzVerdict hurwitz_complex(double a0, double a1, double b1, double a2, double b2) {
    if (!(a0 > 0.0)) throw std::invalid_argument("hurwitz_complex: leading coefficient must be positive");
    // Normalize to a0 = 1.
    a1 /= a0;
    b1 /= a0;
    a2 /= a0;
    b2 /= a0;

    HurwitzVerdict v;
    v.a0 = 1.0;
    v.a1 = a1;
    v.b1 = b1;
    v.a2 = a2;
    v.b2 = b2;
    v.delta1 = a1;
    // det [[a1, 0, -b2], [1, a2, -b1], [0, b2, a1]]
    v.delta2 = a1 * (a1 * a2 + b1 * b2) - b2 * b2;
    v.stable = (v.delta1 > 0.0) && (v.delta2 > 0.0);
    return v;
}

HurwitzVerdict zero_dynamics_real_test(const ConverterParams& p) {
    const double h = p.h();
    const double a11 = p.L1 * p.R1 / h;
    const double a12 = p.Lm * p.R2 / h;
    const double a21 = p.Lm * p.R1 / h;
    const double a22 = p.L1 * p.R2 / h;
    return hurwitz_real(-(a11 + a22), a11 * a22 - a12 * a21);
}

HurwitzVerdict zero_dynamics_complex_test(const ConverterParams& p) {
    const double h = p.h();
    const double ws = p.omega_s();
    const double a1 = -p.L1 * (p.R1 + p.R2) / h;
    const double b1 = 2.0 * ws;
    const double a2 = p.R1 * p.R2 * (p.L1 * p.L1 - p.Lm * p.Lm) / (h * h) - ws * ws;
    const double b2 = -ws * p.L1 * (p.R1 + p.R2) / h;
    return hurwitz_complex(1.0, a1, b1, a2, b2);
}

} // namespace dab
