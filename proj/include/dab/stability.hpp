#pragma once

// Small-signal stability of the envelope model: analytic 7x7 Jacobians at
// solved operating points under constant-voltage (current-source load) and
// constant-power-load operation, eigenvalue tables, the transformer
// zero-dynamics matrices, and the real/complex Hurwitz tests for their
// second-order characteristic polynomials.

#include <vector>

#include "dab/numerics.hpp"
#include "dab/optsolve.hpp"
#include "dab/params.hpp"

namespace dab {

enum class LoadMode { CV, CPL };

/// Eigenvalue analysis of one operating point.
struct EigenReport {
    double power = 0.0;  ///< operating dc output power [W]
    LoadMode mode = LoadMode::CV;
    num::DenseMatrix jacobian;  ///< 7x7 real
    num::Spectrum spectrum;     ///< 7 eigenvalues, sorted
    bool stable = false;        ///< all real parts < 0
    num::cplx dominant;         ///< eigenvalue of largest real part
};

/// Analytic Jacobian of envelope_rhs at a solved point. CV holds the load
/// current constant; CPL substitutes Io = P/Vc2, adding +P/(C2*Vc2^2) to the
/// (Vc2, Vc2) entry. CPL requires op.state.Vc2 > 0.
num::DenseMatrix linearize_envelope(const OperatingPoint& op, LoadMode mode, const ConverterParams& p);

/// Solve each power and report its spectrum.
std::vector<EigenReport> eigen_table(const std::vector<double>& powers, LoadMode mode,
                                     const ConverterParams& p, const SolveOptions& opts = {});

EigenReport eigen_report(const OperatingPoint& op, LoadMode mode, const ConverterParams& p);

/// Transformer zero dynamics: the 2x2 switched-model matrix, its envelope
/// (rotating-frame) variant, and the decoupled input-filter pole -r/Ld.
/// Coefficients use the published L1-based layout regardless of the
/// symmetric_transformer switch so the closed-form Hurwitz identities hold.
struct ZeroDynamics {
    num::DenseMatrix a_real;     ///< 2x2 real
    num::DenseMatrix a_complex;  ///< 2x2 complex (diagonal shifted by -j*omega_s)
    double filter_pole = 0.0;    ///< -r/Ld [1/s]
};

ZeroDynamics zero_dynamics_matrices(const ConverterParams& p);

/// Second-order Hurwitz verdict. Coefficients are stored in the complex
/// quadratic layout a0*l^2 + (a1 + j b1)*l + (a2 + j b2); the real test is
/// the b1 = b2 = 0 case (so a2 here is the *constant* coefficient of the
/// monic real quadratic).
struct HurwitzVerdict {
    double a0 = 1.0, a1 = 0.0, b1 = 0.0, a2 = 0.0, b2 = 0.0;
    double delta1 = 0.0;  ///< = a1
    double delta2 = 0.0;  ///< 3x3 determinant of the complex test
    bool stable = false;
};

/// Routh-Hurwitz test for the monic real quadratic l^2 + a1*l + a0_const.
/// Stable iff a1 > 0 and a0_const > 0 (when built from the transformer
/// zero dynamics, a0_const > 0 is exactly L1^2 > Lm^2).
HurwitzVerdict hurwitz_real(double a1, double a0_const);

/// Complex Hurwitz test for a0*l^2 + (a1 + j b1)*l + (a2 + j b2).
/// Requires a0 > 0 (normalized internally); stable iff
/// delta1 = a1 > 0 and delta2 = det[[a1,0,-b2],[a0,a2,-b1],[0,b2,a1]] > 0.
HurwitzVerdict hurwitz_complex(double a0, double a1, double b1, double a2, double b2);

/// Characteristic coefficients of the envelope zero-dynamics matrix in the
/// complex quadratic layout (a0 = 1).
HurwitzVerdict zero_dynamics_complex_test(const ConverterParams& p);

/// Characteristic coefficients of the switched-model zero-dynamics matrix
/// (monic real quadratic), passed through the real test.
HurwitzVerdict zero_dynamics_real_test(const ConverterParams& p);

} // namespace dab
