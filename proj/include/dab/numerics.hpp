#pragma once

// Small dense numerical kernels for matrices up to 16x16: eigenvalues via
// shifted QR on the Hessenberg form, SVD-based numerical rank via one-sided
// Jacobi, Gaussian elimination, classical RK4, central-difference Jacobians,
// and closed-form complex quadratic roots. Everything here is dimension-tiny
// and written to be auditable rather than fast.

#include <complex>
#include <functional>
#include <vector>

namespace dab::num {

using cplx = std::complex<double>;

/// Dense row-major matrix with complex entries. Real matrices are the
/// imaginary-part-zero case; several kernels detect that and exploit it.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, cplx{0.0, 0.0}) {}

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix from_real(std::size_t rows, std::size_t cols, const std::vector<double>& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool is_square() const { return rows_ == cols_; }
    bool is_real(double tol = 0.0) const;
    bool all_finite() const;

    /// Frobenius norm.
    double norm() const;

    DenseMatrix operator*(const DenseMatrix& rhs) const;
    DenseMatrix operator+(const DenseMatrix& rhs) const;
    DenseMatrix operator-(const DenseMatrix& rhs) const;
    DenseMatrix transpose() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> a_;
};

/// Eigenvalues sorted by descending real part, ties broken by descending
/// imaginary part. For real input matrices non-real eigenvalues come out in
/// exact conjugate pairs.
struct Spectrum {
    std::vector<cplx> eigenvalues;

    const cplx& dominant() const { return eigenvalues.front(); }
    bool all_left_half_plane() const;
};

/// All eigenvalues of a square matrix (n <= 16) with absolute accuracy
/// ~1e-8 * ||m||. Balancing + Hessenberg reduction + Wilkinson-shifted QR,
/// iteration cap 100*n sweeps.
/// Throws std::invalid_argument for non-square or oversize input and
/// convergence_error if the sweep cap is exhausted.
Spectrum eigenvalues(const DenseMatrix& m);

/// Singular values in descending order (one-sided Jacobi).
std::vector<double> singular_values(const DenseMatrix& m);

/// Number of singular values exceeding tol_rel * sigma_max.
std::size_t numerical_rank(const DenseMatrix& m, double tol_rel = 1e-8);

/// Determinant by LU with partial pivoting.
cplx determinant(const DenseMatrix& m);

/// Solve A x = b (square, complex) by Gaussian elimination with partial
/// pivoting. Throws singular_system_error when a pivot underflows.
std::vector<cplx> solve_linear(const DenseMatrix& a, const std::vector<cplx>& b);

using RhsFn = std::function<std::vector<double>(double t, const std::vector<double>& x)>;

/// One classical 4th-order Runge-Kutta step. Throws blowup_error when any
/// stage derivative is non-finite.
std::vector<double> rk4_step(const RhsFn& rhs, const std::vector<double>& x, double t, double dt);

using VecFn = std::function<std::vector<double>(const std::vector<double>& x)>;

/// Central-difference Jacobian of f at x0, step h_rel * max(|x_i|, 1) per
/// component. Result is a real matrix.
DenseMatrix jacobian_fd(const VecFn& f, const std::vector<double>& x0, double h_rel = 1e-6);

/// Both roots of a0 z^2 + a1 z + a2 with complex coefficients, using the
/// cancellation-safe branch of the quadratic formula (the larger-magnitude
/// root from the formula, the other from Vieta). a0 == 0 is a degenerate
/// polynomial and throws singular_system_error.
std::pair<cplx, cplx> quadratic_roots_complex(cplx a0, cplx a1, cplx a2);

} // namespace dab::num
