#include "dab/numerics.hpp"

#include "dab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dab::num {

namespace {

constexpr std::size_t kMaxDim = 16;

bool sort_desc(const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
}

} // namespace

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::from_real(std::size_t rows, std::size_t cols, const std::vector<double>& v) {
    if (v.size() != rows * cols) throw std::invalid_argument("from_real: size mismatch");
    DenseMatrix m(rows, cols);
    for (std::size_t k = 0; k < v.size(); ++k) m.a_[k] = v[k];
    return m;
}

bool DenseMatrix::is_real(double tol) const {
    for (const auto& z : a_)
        if (std::abs(z.imag()) > tol) return false;
    return true;
}

bool DenseMatrix::all_finite() const {
    for (const auto& z : a_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

double DenseMatrix::norm() const {
    double s = 0.0;
    for (const auto& z : a_) s += std::norm(z);
    return std::sqrt(s);
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
    DenseMatrix r(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const cplx aik = (*this)(i, k);
            if (aik == cplx{}) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) r(i, j) += aik * rhs(k, j);
        }
    return r;
}

DenseMatrix DenseMatrix::operator+(const DenseMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("matrix sum: dimension mismatch");
    DenseMatrix r = *this;
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] += rhs.a_[k];
    return r;
}

DenseMatrix DenseMatrix::operator-(const DenseMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("matrix diff: dimension mismatch");
    DenseMatrix r = *this;
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] -= rhs.a_[k];
    return r;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

bool Spectrum::all_left_half_plane() const {
    for (const auto& z : eigenvalues)
        if (z.real() >= 0.0) return false;
    return true;
}

namespace {

// Parlett-Reinsch balancing: diagonal similarity with powers of 2 so row and
// column norms roughly match. Improves eigenvalue accuracy when entries span
// many orders of magnitude (our Jacobians mix 1/C ~ 1e3 with omega_s ~ 1e5).
void balance(DenseMatrix& a) {
    const std::size_t n = a.rows();
    const double radix = 2.0;
    bool done = false;
    while (!done) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix, f = 1.0, s = c + r;
            while (c < g) {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= radix * radix;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                for (std::size_t j = 0; j < n; ++j) a(i, j) /= f;
                for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
            }
        }
    }
}

// Householder reduction to upper Hessenberg form (complex).
void to_hessenberg(DenseMatrix& a) {
    const std::size_t n = a.rows();
    if (n < 3) return;
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double scale = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) scale += std::abs(a(i, k));
        if (scale == 0.0) continue;

        std::vector<cplx> v(n, cplx{});
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = a(i, k) / scale;
            vnorm2 += std::norm(v[i]);
        }
        const double alpha = std::sqrt(vnorm2);
        if (alpha == 0.0) continue;
        const cplx x0 = v[k + 1];
        const cplx phase = (std::abs(x0) == 0.0) ? cplx{1.0, 0.0} : x0 / std::abs(x0);
        v[k + 1] += phase * alpha;
        double vv = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vv += std::norm(v[i]);
        if (vv == 0.0) continue;

        // A <- (I - 2 v v^H / v^H v) A, then A <- A (I - 2 v v^H / v^H v)
        for (std::size_t j = 0; j < n; ++j) {
            cplx s{};
            for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * a(i, j);
            s *= 2.0 / vv;
            for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= s * v[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            cplx s{};
            for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
            s *= 2.0 / vv;
            for (std::size_t j = 0; j < n; ++j) {
                if (j > k) a(i, j) -= s * std::conj(v[j]);
            }
        }
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
    }
}

// Wilkinson shift: the eigenvalue of the trailing 2x2 block closest to the
// bottom-right entry.
cplx wilkinson_shift(const DenseMatrix& h, std::size_t hi) {
    const cplx a = h(hi - 1, hi - 1);
    const cplx b = h(hi - 1, hi);
    const cplx c = h(hi, hi - 1);
    const cplx d = h(hi, hi);
    const cplx tr = a + d;
    const cplx det = a * d - b * c;
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    const cplx l1 = 0.5 * (tr + disc);
    const cplx l2 = 0.5 * (tr - disc);
    return (std::abs(l1 - d) < std::abs(l2 - d)) ? l1 : l2;
}

// Explicit single-shift QR sweep on the active Hessenberg block [lo, hi]
// using Givens rotations.
void qr_sweep(DenseMatrix& h, std::size_t lo, std::size_t hi, cplx shift) {
    const std::size_t n = h.rows();
    std::vector<cplx> cs(hi, cplx{}), sn(hi, cplx{});

    for (std::size_t k = lo; k <= hi; ++k) h(k, k) -= shift;

    // QR factorization: eliminate the subdiagonal.
    for (std::size_t k = lo; k < hi; ++k) {
        const cplx x = h(k, k);
        const cplx y = h(k + 1, k);
        const double r = std::hypot(std::abs(x), std::abs(y));
        cplx c, s;
        if (r == 0.0) {
            c = 1.0;
            s = 0.0;
        } else {
            c = x / r;
            s = y / r;
        }
        cs[k] = c;
        sn[k] = s;
        for (std::size_t j = k; j < n; ++j) {
            const cplx t1 = h(k, j), t2 = h(k + 1, j);
            h(k, j) = std::conj(c) * t1 + std::conj(s) * t2;
            h(k + 1, j) = -s * t1 + c * t2;
        }
    }
    // RQ: apply the rotations from the right.
    for (std::size_t k = lo; k < hi; ++k) {
        const cplx c = cs[k], s = sn[k];
        const std::size_t top = 0;
        for (std::size_t i = top; i <= std::min(k + 2, n - 1); ++i) {
            const cplx t1 = h(i, k), t2 = h(i, k + 1);
            h(i, k) = t1 * c + t2 * s;
            h(i, k + 1) = -t1 * std::conj(s) + t2 * std::conj(c);
        }
    }
    for (std::size_t k = lo; k <= hi; ++k) h(k, k) += shift;
}

// Enforce exact conjugate pairing for spectra of real matrices: rounding in
// the complex QR slightly breaks symmetry otherwise.
void symmetrize_real_spectrum(std::vector<cplx>& ev, double scale) {
    const double tol = std::max(1e-9 * scale, 1e-300);
    std::vector<bool> used(ev.size(), false);
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (used[i]) continue;
        if (std::abs(ev[i].imag()) <= tol) {
            ev[i] = cplx{ev[i].real(), 0.0};
            used[i] = true;
            continue;
        }
        std::size_t best = ev.size();
        double bestd = std::numeric_limits<double>::max();
        for (std::size_t j = i + 1; j < ev.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(std::conj(ev[j]) - ev[i]);
            if (d < bestd) {
                bestd = d;
                best = j;
            }
        }
        used[i] = true;
        if (best == ev.size()) continue;
        used[best] = true;
        const cplx mean = 0.5 * (ev[i] + std::conj(ev[best]));
        ev[i] = mean;
        ev[best] = std::conj(mean);
    }
}

} // namespace

Spectrum eigenvalues(const DenseMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("eigenvalues: matrix must be square");
    const std::size_t n = m.rows();
    if (n == 0) return {};
    if (n > kMaxDim) throw std::invalid_argument("eigenvalues: dimension exceeds 16");
    if (!m.all_finite()) throw std::invalid_argument("eigenvalues: non-finite entries");

    const bool real_input = m.is_real();
    const double scale = std::max(m.norm(), std::numeric_limits<double>::min());

    DenseMatrix h = m;
    balance(h);
    to_hessenberg(h);

    std::vector<cplx> ev(n);
    const std::size_t max_sweeps = 100 * n;
    std::size_t sweeps = 0;
    std::size_t hi = n - 1;
    std::size_t stall = 0;

    while (true) {
        // Deflate converged subdiagonals.
        while (hi > 0) {
            const double off = std::abs(h(hi, hi - 1));
            const double diag = std::abs(h(hi - 1, hi - 1)) + std::abs(h(hi, hi));
            if (off <= std::numeric_limits<double>::epsilon() * std::max(diag, scale * 1e-3)) {
                h(hi, hi - 1) = 0.0;
                ev[hi] = h(hi, hi);
                --hi;
                stall = 0;
            } else {
                break;
            }
        }
        if (hi == 0) {
            ev[0] = h(0, 0);
            break;
        }

        // Active block [lo, hi]: walk up until a negligible subdiagonal.
        std::size_t lo = hi;
        while (lo > 0) {
            const double off = std::abs(h(lo, lo - 1));
            const double diag = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
            if (off <= std::numeric_limits<double>::epsilon() * std::max(diag, scale * 1e-3)) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }

        if (++sweeps > max_sweeps)
            throw convergence_error("eigenvalues: QR iteration cap exhausted");

        cplx shift = wilkinson_shift(h, hi);
        if (++stall % 12 == 0) {
            // Exceptional shift to break rare cycling.
            shift = cplx{std::abs(h(hi, hi - 1)) + std::abs(h(hi - 1, hi - 2 < lo ? lo : hi - 1)), 0.0} + h(hi, hi);
        }
        qr_sweep(h, lo, hi, shift);
    }

    if (real_input) symmetrize_real_spectrum(ev, scale);
    std::sort(ev.begin(), ev.end(), sort_desc);
    return Spectrum{std::move(ev)};
}

std::vector<double> singular_values(const DenseMatrix& m) {
    // One-sided Jacobi on the tall orientation: orthogonalize column pairs
    // until all inner products are negligible; singular values are the final
    // column norms. Avoids forming A^H A (no squared conditioning).
    DenseMatrix a = (m.rows() >= m.cols()) ? m : m.transpose();
    const std::size_t rows = a.rows(), cols = a.cols();

    const double eps = std::numeric_limits<double>::epsilon();
    const std::size_t max_sweeps = 60;
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < cols; ++p) {
            for (std::size_t q = p + 1; q < cols; ++q) {
                double app = 0.0, aqq = 0.0;
                cplx apq{};
                for (std::size_t i = 0; i < rows; ++i) {
                    app += std::norm(a(i, p));
                    aqq += std::norm(a(i, q));
                    apq += std::conj(a(i, p)) * a(i, q);
                }
                if (std::abs(apq) <= eps * std::sqrt(app * aqq) || std::abs(apq) == 0.0) continue;
                rotated = true;

                const cplx phase = apq / std::abs(apq);
                const double tau = (aqq - app) / (2.0 * std::abs(apq));
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < rows; ++i) {
                    const cplx vp = a(i, p), vq = a(i, q);
                    a(i, p) = c * vp - s * std::conj(phase) * vq;
                    a(i, q) = s * phase * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sv(cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows; ++i) s += std::norm(a(i, j));
        sv[j] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

std::size_t numerical_rank(const DenseMatrix& m, double tol_rel) {
    if (tol_rel <= 0.0 || tol_rel >= 1.0) throw std::invalid_argument("numerical_rank: tol_rel must be in (0,1)");
    const auto sv = singular_values(m);
    if (sv.empty() || sv.front() == 0.0) return 0;
    const double cut = tol_rel * sv.front();
    std::size_t r = 0;
    for (double s : sv)
        if (s > cut) ++r;
    return r;
}

cplx determinant(const DenseMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("determinant: matrix must be square");
    DenseMatrix a = m;
    const std::size_t n = a.rows();
    cplx det{1.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (std::abs(a(piv, k)) == 0.0) return cplx{0.0, 0.0};
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            det = -det;
        }
        det *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return det;
}

std::vector<cplx> solve_linear(const DenseMatrix& a_in, const std::vector<cplx>& b_in) {
    if (!a_in.is_square()) throw std::invalid_argument("solve_linear: matrix must be square");
    const std::size_t n = a_in.rows();
    if (b_in.size() != n) throw std::invalid_argument("solve_linear: rhs size mismatch");

    DenseMatrix a = a_in;
    std::vector<cplx> b = b_in;
    const double tiny = a.norm() * std::numeric_limits<double>::epsilon() * static_cast<double>(n);

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (std::abs(a(piv, k)) <= tiny)
            throw singular_system_error("solve_linear: singular matrix");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = a(i, k) / a(k, k);
            if (f == cplx{}) continue;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    std::vector<cplx> x(n);
    for (std::size_t k = n; k-- > 0;) {
        cplx s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
        x[k] = s / a(k, k);
    }
    return x;
}

std::vector<double> rk4_step(const RhsFn& rhs, const std::vector<double>& x, double t, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("rk4_step: dt must be positive");
    const std::size_t n = x.size();

    auto check = [n](const std::vector<double>& k) {
        if (k.size() != n) throw std::invalid_argument("rk4_step: rhs dimension mismatch");
        for (double v : k)
            if (!std::isfinite(v)) throw blowup_error("rk4_step: non-finite derivative");
    };

    std::vector<double> k1 = rhs(t, x);
    check(k1);
    std::vector<double> xt(n);
    for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + 0.5 * dt * k1[i];
    std::vector<double> k2 = rhs(t + 0.5 * dt, xt);
    check(k2);
    for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + 0.5 * dt * k2[i];
    std::vector<double> k3 = rhs(t + 0.5 * dt, xt);
    check(k3);
    for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + dt * k3[i];
    std::vector<double> k4 = rhs(t + dt, xt);
    check(k4);

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

DenseMatrix jacobian_fd(const VecFn& f, const std::vector<double>& x0, double h_rel) {
    const std::size_t n = x0.size();
    const std::vector<double> f0 = f(x0);
    const std::size_t m = f0.size();

    DenseMatrix j(m, n);
    std::vector<double> xp = x0, xm = x0;
    for (std::size_t k = 0; k < n; ++k) {
        const double h = h_rel * std::max(std::abs(x0[k]), 1.0);
        xp[k] = x0[k] + h;
        xm[k] = x0[k] - h;
        const std::vector<double> fp = f(xp);
        const std::vector<double> fm = f(xm);
        for (std::size_t i = 0; i < m; ++i) j(i, k) = (fp[i] - fm[i]) / (2.0 * h);
        xp[k] = x0[k];
        xm[k] = x0[k];
    }
    return j;
}

std::pair<cplx, cplx> quadratic_roots_complex(cplx a0, cplx a1, cplx a2) {
    if (std::abs(a0) == 0.0) throw singular_system_error("quadratic_roots_complex: leading coefficient is zero");

    const cplx disc = a1 * a1 - 4.0 * a0 * a2;
    cplx s = std::sqrt(disc);
    // Pick the sign that adds constructively with a1 (avoids cancellation).
    if (std::real(std::conj(a1) * s) < 0.0) s = -s;
    const cplx q = -0.5 * (a1 + s);

    if (std::abs(q) == 0.0) {
        // a1 = 0 and disc = 0 => both roots zero.
        return {cplx{0.0, 0.0}, cplx{0.0, 0.0}};
    }
    const cplx r1 = q / a0;
    const cplx r2 = a2 / q;
    return {r1, r2};
}

} // namespace dab::num
