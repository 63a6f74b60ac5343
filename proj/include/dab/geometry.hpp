#pragma once

// Geometric-control analysis of the switched model in control-affine form
// x' = f(x) + g1(x) s1 + g2(x) s2, outputs (Vc1, Vc2). The model is
// bilinear, so every vector field involved (and every iterated Lie bracket)
// is affine with an exact closed-form Jacobian; no numerical
// differentiation is needed.

#include <array>
#include <string>
#include <vector>

#include "dab/numerics.hpp"
#include "dab/params.hpp"

namespace dab {

/// An affine vector field v(x) = A x + b on the 5-dimensional state space.
/// Closed under Lie brackets, which is what makes the bracket iteration
/// exact.
struct AffineField {
    num::DenseMatrix a;  ///< 5x5 real
    std::vector<double> b = std::vector<double>(5, 0.0);

    std::array<double, 5> eval(const std::array<double, 5>& x) const;
};

/// The drift and control fields of the converter, plus the output
/// coordinate indices. Load current enters the drift as a constant
/// (current-source load).
struct AffineSystem {
    AffineField f;   ///< drift (s1 = s2 = 0, load current io)
    AffineField g1;  ///< s1-multiplied terms
    AffineField g2;  ///< s2-multiplied terms

    static AffineSystem from_params(const ConverterParams& p, double io);
};

/// Exact Lie bracket [v, w] of two affine fields (itself affine).
AffineField lie_bracket_field(const AffineField& v, const AffineField& w);

/// [v, w](x0) = Jw(x0) v(x0) - Jv(x0) w(x0).
std::array<double, 5> lie_bracket(const AffineField& v, const AffineField& w,
                                  const std::array<double, 5>& x0);

/// Controllability analysis: columns {ad_f^i g_j, i = 0..4, j = 1, 2}
/// evaluated at x0. Iterated brackets scale like omega_s^i, so columns are
/// normalized to unit length before the rank test (the rank of a direction
/// set is scaling-invariant); the raw matrix is returned unnormalized.
struct ControllabilityResult {
    num::DenseMatrix m;  ///< 5x10, columns ordered g1..ad^4 g1, g2..ad^4 g2
    std::size_t rank = 0;
    std::vector<std::size_t> rank_by_depth;  ///< rank using brackets up to depth 0..4
    std::vector<double> singular_values;     ///< of the column-normalized matrix
};

ControllabilityResult controllability_matrix(const std::array<double, 5>& x0, const AffineSystem& sys);

/// Observability analysis: gradients of the iterated drift Lie derivatives
/// L_f^i h_j (i = 0..4) of both outputs, stacked (10x5). Rows normalized
/// before the rank test for the same scaling reason.
struct ObservabilityResult {
    num::DenseMatrix j;  ///< 10x5 stacked gradients
    std::size_t max_rank = 0;
    std::vector<double> singular_values;
    bool fully_observable = false;  ///< max_rank == 5
};

ObservabilityResult observability_matrix(const std::array<double, 5>& x0, const AffineSystem& sys);

/// Relative degree per output, their total, and the zero-dynamics states.
/// At a state where the first control coefficient vanishes (I1 = 0 for
/// output 1, I2 = 0 for output 2) the relative degree is flagged
/// ill-defined rather than silently answered.
struct RelativeDegreeResult {
    int r1 = 0, r2 = 0;
    int r_total = 0;
    int zero_dynamics_dim = 0;
    std::array<bool, 2> well_defined = {true, true};
    std::vector<std::string> zero_dynamics_states;  ///< {"Id", "I1", "I2"}
};

RelativeDegreeResult relative_degree(const AffineSystem& sys, const std::array<double, 5>& x0);

/// Representative instantaneous state for rank evaluation: dc states from
/// the solved envelope point, winding currents reconstructed at waveform
/// angle pi/4.
std::array<double, 5> representative_state(const struct OperatingPoint& op);

} // namespace dab
