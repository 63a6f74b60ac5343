#include "dab/geometry.hpp"

#include <cmath>

#include "dab/model.hpp"
#include "dab/optsolve.hpp"
#include "dab/zvs.hpp"

namespace dab {

namespace {

num::DenseMatrix zeros5() { return num::DenseMatrix(5, 5); }

/// Normalize columns (axis = 0) or rows (axis = 1) to unit 2-norm; zero
/// vectors stay zero.
num::DenseMatrix normalized(const num::DenseMatrix& m, int axis) {
    num::DenseMatrix out = m;
    if (axis == 0) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < m.rows(); ++i) s += std::norm(m(i, j));
            s = std::sqrt(s);
            if (s == 0.0) continue;
            for (std::size_t i = 0; i < m.rows(); ++i) out(i, j) /= s;
        }
    } else {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < m.cols(); ++j) s += std::norm(m(i, j));
            s = std::sqrt(s);
            if (s == 0.0) continue;
            for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) /= s;
        }
    }
    return out;
}

} // namespace

std::array<double, 5> AffineField::eval(const std::array<double, 5>& x) const {
    std::array<double, 5> y{};
    for (int i = 0; i < 5; ++i) {
        double s = b[i];
        for (int j = 0; j < 5; ++j) s += a(i, j).real() * x[j];
        y[i] = s;
    }
    return y;
}

AffineSystem AffineSystem::from_params(const ConverterParams& p, double io) {
    const AcCoefficients c(p);

    AffineSystem sys;
    sys.f.a = zeros5();
    sys.f.a(0, 0) = -p.r / p.Ld;
    sys.f.a(0, 1) = -1.0 / p.Ld;
    sys.f.a(1, 0) = 1.0 / p.C1;
    sys.f.a(2, 2) = c.a11;
    sys.f.a(2, 3) = c.a12;
    sys.f.a(3, 2) = c.a21;
    sys.f.a(3, 3) = c.a22;
    sys.f.b = {p.V1 / p.Ld, 0.0, 0.0, 0.0, -io / p.C2};

    sys.g1.a = zeros5();
    sys.g1.a(1, 2) = -1.0 / p.C1;  // -I1/C1 in the Vc1 row
    sys.g1.a(2, 1) = c.b1;
    sys.g1.a(3, 1) = c.b2;

    sys.g2.a = zeros5();
    sys.g2.a(2, 4) = c.c1;
    sys.g2.a(3, 4) = c.c2;
    sys.g2.a(4, 3) = p.n / p.C2;  // n*I2/C2 in the Vc2 row
    return sys;
}

AffineField lie_bracket_field(const AffineField& v, const AffineField& w) {
    // [v, w](x) = Aw (Av x + bv) - Av (Aw x + bw)
    AffineField out;
    out.a = w.a * v.a - v.a * w.a;
    out.b = std::vector<double>(5, 0.0);
    for (int i = 0; i < 5; ++i) {
        double s = 0.0;
        for (int j = 0; j < 5; ++j)
            s += w.a(i, j).real() * v.b[j] - v.a(i, j).real() * w.b[j];
        out.b[i] = s;
    }
    return out;
}

std::array<double, 5> lie_bracket(const AffineField& v, const AffineField& w,
                                  const std::array<double, 5>& x0) {
    return lie_bracket_field(v, w).eval(x0);
}

ControllabilityResult controllability_matrix(const std::array<double, 5>& x0, const AffineSystem& sys) {
    ControllabilityResult res;
    res.m = num::DenseMatrix(5, 10);

    int col = 0;
    for (const AffineField* g : {&sys.g1, &sys.g2}) {
        AffineField ad = *g;
        for (int depth = 0; depth <= 4; ++depth) {
            const auto v = ad.eval(x0);
            for (int i = 0; i < 5; ++i) res.m(i, static_cast<std::size_t>(col)) = v[i];
            ++col;
            if (depth < 4) ad = lie_bracket_field(sys.f, ad);
        }
    }

    const num::DenseMatrix mn = normalized(res.m, 0);
    res.rank = num::numerical_rank(mn);
    res.singular_values = num::singular_values(mn);

    for (int depth = 0; depth <= 4; ++depth) {
        num::DenseMatrix sub(5, 2 * static_cast<std::size_t>(depth + 1));
        std::size_t c = 0;
        for (int j = 0; j < 2; ++j)
            for (int i = 0; i <= depth; ++i, ++c)
                for (int row = 0; row < 5; ++row)
                    sub(row, c) = res.m(row, static_cast<std::size_t>(5 * j + i));
        res.rank_by_depth.push_back(num::numerical_rank(normalized(sub, 0)));
    }
    return res;
}

ObservabilityResult observability_matrix(const std::array<double, 5>& /*x0*/, const AffineSystem& sys) {
    // Outputs are coordinates (Vc1 = x2, Vc2 = x5); the gradient of
    // L_f^{k+1} h is A_f^T grad(L_f^k h) plus nothing, because every L_f^k h
    // is affine in x. The gradients are therefore state-independent.
    ObservabilityResult res;
    res.j = num::DenseMatrix(10, 5);

    int row = 0;
    for (int out_idx : {1, 4}) {
        std::vector<double> w(5, 0.0);
        w[out_idx] = 1.0;
        for (int k = 0; k <= 4; ++k) {
            for (int j = 0; j < 5; ++j) res.j(static_cast<std::size_t>(row), j) = w[j];
            ++row;
            // w <- A_f^T w
            std::vector<double> next(5, 0.0);
            for (int jj = 0; jj < 5; ++jj) {
                double s = 0.0;
                for (int ii = 0; ii < 5; ++ii) s += sys.f.a(ii, jj).real() * w[ii];
                next[jj] = s;
            }
            w = next;
        }
    }

    const num::DenseMatrix jn = normalized(res.j, 1);
    res.max_rank = num::numerical_rank(jn);
    res.singular_values = num::singular_values(jn);
    res.fully_observable = (res.max_rank == 5);
    return res;
}

RelativeDegreeResult relative_degree(const AffineSystem& sys, const std::array<double, 5>& x0) {
    RelativeDegreeResult res;

    // dVc1/dt contains s1 * (-I1/C1): the control appears after one
    // differentiation wherever I1 != 0, and likewise s2 * (n I2/C2) for the
    // second output.
    const double i1 = x0[2];
    const double i2 = x0[3];
    const double scale1 = std::max({std::abs(x0[0]), std::abs(i1), 1.0});
    const double scale2 = std::max({std::abs(x0[0]), std::abs(i2), 1.0});

    res.well_defined[0] = std::abs(i1) > 1e-9 * scale1;
    res.well_defined[1] = std::abs(i2) > 1e-9 * scale2;
    res.r1 = 1;
    res.r2 = 1;
    res.r_total = res.r1 + res.r2;
    res.zero_dynamics_dim = 5 - res.r_total;
    res.zero_dynamics_states = {"Id", "I1", "I2"};
    (void)sys;
    return res;
}

std::array<double, 5> representative_state(const OperatingPoint& op) {
    const double theta = std::numbers::pi / 4.0;  // waveform angle
    const double i1 = instantaneous_current(current_phasor_1(op.state), theta - phasor_frame_offset);
    const double i2 = instantaneous_current(current_phasor_2(op.state), theta - phasor_frame_offset);
    return {op.state.Id, op.state.Vc1, i1, i2, op.state.Vc2};
}

} // namespace dab
