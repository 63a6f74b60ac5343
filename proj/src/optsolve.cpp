#include "dab/optsolve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "dab/errors.hpp"
#include "dab/numerics.hpp"

namespace dab {

namespace {

constexpr double kDutyMin = 0.05;
constexpr double kDutyMax = std::numbers::pi;
constexpr double kDeltaMax = 1.55;

using Vec3 = std::array<double, 3>;

Vec3 clamp_box(Vec3 x) {
    x[0] = std::clamp(x[0], kDutyMin, kDutyMax);
    x[1] = std::clamp(x[1], kDutyMin, kDutyMax);
    x[2] = std::clamp(x[2], -kDeltaMax, kDeltaMax);
    return x;
}

const Vec3 kLo = {kDutyMin, kDutyMin, -kDeltaMax};
const Vec3 kHi = {kDutyMax, kDutyMax, kDeltaMax};

/// Input-side dc voltage used by the steady-state equations. With the
/// resistive drop modelled, Vc1 and Id are mutually dependent through the
/// current solve; a short fixed-point iteration converges fast because
/// r*Id << V1.
double input_voltage(cplx s1, cplx s2, const ConverterParams& p) {
    if (!p.resistive_input_drop) return p.V1;
    double vc1 = p.V1;
    for (int k = 0; k < 8; ++k) {
        const auto [i1, i2] = solve_currents(s1, s2, vc1, p.Vc2_ref, p);
        const double id = 0.5 * (s1.real() * i1.real() + s1.imag() * i1.imag());
        const double next = p.V1 - p.r * id;
        if (std::abs(next - vc1) < 1e-12 * std::max(1.0, std::abs(vc1))) return next;
        vc1 = next;
    }
    return vc1;
}

struct Eval {
    double f;  ///< |I1|^2 + |I2|^2
    double g;  ///< output-current constraint residual [A]
    cplx i1, i2;
    double vc1;
};

struct ConstrainedProblem {
    const ConverterParams& p;
    double io_rhs;  ///< 2*Io/n

    Eval operator()(const Vec3& x) const {
        const auto [s1, s2] = fundamental_phasors(x[0], x[1], x[2]);
        const double vc1 = input_voltage(s1, s2, p);
        const auto [i1, i2] = solve_currents(s1, s2, vc1, p.Vc2_ref, p);
        const double g = s2.real() * i2.real() + s2.imag() * i2.imag() - io_rhs;
        return {std::norm(i1) + std::norm(i2), g, i1, i2, vc1};
    }
};

// Solve the symmetric 3x3 system by Gaussian elimination with partial pivoting.
bool solve3(std::array<std::array<double, 3>, 3> a, Vec3 b, Vec3& out) {
    for (int k = 0; k < 3; ++k) {
        int piv = k;
        for (int i = k + 1; i < 3; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        if (std::abs(a[piv][k]) < 1e-300) return false;
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (int i = k + 1; i < 3; ++i) {
            const double f = a[i][k] / a[k][k];
            for (int j = k; j < 3; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    for (int k = 2; k >= 0; --k) {
        double s = b[k];
        for (int j = k + 1; j < 3; ++j) s -= a[k][j] * out[j];
        out[k] = s / a[k][k];
    }
    return true;
}

struct InnerResult {
    Vec3 x;
    int iterations;
};

/// Projected damped-Newton minimization of a smooth scalar function over the
/// control box, with central-difference derivatives. Returns when the
/// projected gradient norm falls below pg_tol or the iteration budget is
/// spent.
template <typename Fn>
InnerResult minimize_box(const Fn& fn, Vec3 x0, double pg_tol, int max_iter) {
    constexpr double h = 1e-6;
    Vec3 x = clamp_box(x0);
    double fx = fn(x);
    int it = 0;

    auto gradient = [&](const Vec3& at) {
        Vec3 g{};
        for (int i = 0; i < 3; ++i) {
            Vec3 xp = at, xm = at;
            xp[i] += h;
            xm[i] -= h;
            g[i] = (fn(xp) - fn(xm)) / (2.0 * h);
        }
        return g;
    };
    auto proj_grad_norm = [&](const Vec3& at, const Vec3& g) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double moved = std::clamp(at[i] - g[i], kLo[i], kHi[i]) - at[i];
            s += moved * moved;
        }
        return std::sqrt(s);
    };

    double tau = 0.0;  // Levenberg damping, raised on failed steps
    while (it < max_iter) {
        ++it;
        const Vec3 g = gradient(x);
        if (proj_grad_norm(x, g) <= pg_tol) break;

        // Central-difference Hessian.
        std::array<std::array<double, 3>, 3> H{};
        for (int i = 0; i < 3; ++i) {
            Vec3 xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            H[i][i] = (fn(xp) - 2.0 * fx + fn(xm)) / (h * h);
        }
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                Vec3 xpp = x, xpm = x, xmp = x, xmm = x;
                xpp[i] += h; xpp[j] += h;
                xpm[i] += h; xpm[j] -= h;
                xmp[i] -= h; xmp[j] += h;
                xmm[i] -= h; xmm[j] -= h;
                H[i][j] = H[j][i] = (fn(xpp) - fn(xpm) - fn(xmp) + fn(xmm)) / (4.0 * h * h);
            }

        double hscale = 0.0;
        for (int i = 0; i < 3; ++i) hscale = std::max(hscale, std::abs(H[i][i]));
        if (hscale == 0.0) hscale = 1.0;
        if (tau == 0.0) tau = 1e-10 * hscale;

        // Coordinates pinned at a bound with the gradient pushing outward
        // stay fixed this step.
        std::array<bool, 3> active{};
        for (int i = 0; i < 3; ++i)
            active[i] = (x[i] <= kLo[i] + 1e-14 && g[i] > 0.0) || (x[i] >= kHi[i] - 1e-14 && g[i] < 0.0);

        bool stepped = false;
        for (int attempt = 0; attempt < 30 && !stepped; ++attempt) {
            auto Hd = H;
            Vec3 rhs{};
            for (int i = 0; i < 3; ++i) {
                Hd[i][i] += tau;
                rhs[i] = -g[i];
                if (active[i]) {
                    for (int j = 0; j < 3; ++j) {
                        Hd[i][j] = (i == j) ? 1.0 : 0.0;
                        Hd[j][i] = (i == j) ? 1.0 : 0.0;
                    }
                    rhs[i] = 0.0;
                }
            }
            Vec3 step{};
            if (!solve3(Hd, rhs, step)) {
                tau *= 10.0;
                continue;
            }
            // Backtracking line search on the projected path.
            double t = 1.0;
            for (int ls = 0; ls < 30; ++ls) {
                Vec3 trial = x;
                for (int i = 0; i < 3; ++i) trial[i] += t * step[i];
                trial = clamp_box(trial);
                const double ft = fn(trial);
                double decrease = 0.0;
                for (int i = 0; i < 3; ++i) decrease += g[i] * (trial[i] - x[i]);
                if (ft <= fx + 1e-4 * decrease && ft < fx + 1e-16 * std::abs(fx) + 1e-300) {
                    x = trial;
                    fx = ft;
                    stepped = true;
                    tau = std::max(tau * 0.25, 1e-12 * hscale);
                    break;
                }
                t *= 0.5;
            }
            if (!stepped) tau *= 10.0;
        }
        if (!stepped) break;  // no descent possible at this damping: stationary
    }
    return {x, it};
}

struct Candidate {
    Vec3 x{};
    double f = std::numeric_limits<double>::infinity();
    double g_scaled = std::numeric_limits<double>::infinity();
    double optimality = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
};

/// Augmented-Lagrangian loop from one start point.
Candidate solve_from(const ConstrainedProblem& prob, Vec3 x0, const SolveOptions& opts) {
    const double g_scale = std::max(1.0, std::abs(prob.io_rhs));
    Candidate cand;
    Vec3 x = clamp_box(x0);

    double lambda = 0.0;
    double mu = 10.0;
    double prev_gabs = std::numeric_limits<double>::infinity();
    int used = 0;

    for (int outer = 0; outer < 15 && used < opts.max_iterations; ++outer) {
        auto al = [&](const Vec3& v) {
            const Eval e = prob(v);
            return e.f - lambda * e.g + 0.5 * mu * e.g * e.g;
        };
        const double f_here = prob(x).f;
        const double pg_tol = std::max(0.2 * opts.tol_optimality * std::max(1.0, f_here),
                                       1e-9 * std::max(1.0, f_here));
        const InnerResult inner = minimize_box(al, x, pg_tol, std::min(80, opts.max_iterations - used));
        used += inner.iterations;
        x = inner.x;

        const Eval e = prob(x);
        const double gabs = std::abs(e.g);
        lambda -= mu * e.g;
        if (gabs > 0.25 * prev_gabs) mu = std::min(mu * 10.0, 1e12);
        prev_gabs = gabs;

        if (gabs <= opts.tol_constraint * g_scale) {
            // KKT stationarity of f - lambda*g at the multiplier estimate.
            constexpr double h = 1e-6;
            Vec3 gl{};
            for (int i = 0; i < 3; ++i) {
                Vec3 xp = x, xm = x;
                xp[i] += h;
                xm[i] -= h;
                const Eval ep = prob(xp), em = prob(xm);
                gl[i] = ((ep.f - lambda * ep.g) - (em.f - lambda * em.g)) / (2.0 * h);
            }
            double pg = 0.0;
            for (int i = 0; i < 3; ++i) {
                const double moved = std::clamp(x[i] - gl[i], kLo[i], kHi[i]) - x[i];
                pg += moved * moved;
            }
            pg = std::sqrt(pg);
            const double f_scale = std::max(1.0, e.f);
            cand = {x, e.f, gabs / g_scale, pg / f_scale, used, pg <= opts.tol_optimality * f_scale};
            if (cand.converged) return cand;
        }
    }
    const Eval e = prob(x);
    if (!std::isfinite(cand.f)) {
        cand = {x, e.f, std::abs(e.g) / g_scale, std::numeric_limits<double>::infinity(), used, false};
    }
    cand.iterations = used;
    return cand;
}

OperatingPoint build_operating_point(double d1, double d2, double delta, double P_target,
                                     const ConverterParams& p) {
    OperatingPoint op;
    op.control = ControlVector{d1, d2, delta - 0.5 * (d1 - d2)};
    const auto [s1, s2] = fundamental_phasors(d1, d2, delta);
    op.s_qd1 = s1;
    op.s_qd2 = s2;
    const double vc1 = input_voltage(s1, s2, p);
    const auto [i1, i2] = solve_currents(s1, s2, vc1, p.Vc2_ref, p);
    const double id = 0.5 * (s1.real() * i1.real() + s1.imag() * i1.imag());
    op.state = EnvelopeState{id, vc1, i1.real(), i1.imag(), i2.real(), i2.imag(), p.Vc2_ref};
    op.P_target = P_target;
    op.Io = P_target / p.Vc2_ref;
    op.Pin = p.V1 * id;
    op.Pout = p.Vc2_ref * op.Io;
    op.objective = std::norm(i1) + std::norm(i2);
    return op;
}

} // namespace

std::pair<cplx, cplx> solve_currents(cplx s_qd1, cplx s_qd2, double vc1, double vc2,
                                     const ConverterParams& p) {
    const AcCoefficients c(p);
    const double ws = p.omega_s();

    // The four real equations are one complex 2x2 system in (I_qd1, I_qd2).
    num::DenseMatrix m(2, 2);
    m(0, 0) = cplx{c.a11, -ws};
    m(0, 1) = cplx{c.a12, 0.0};
    m(1, 0) = cplx{c.a21, 0.0};
    m(1, 1) = cplx{c.a22, -ws};
    const std::vector<cplx> rhs = {-(c.b1 * s_qd1 * vc1 + c.c1 * s_qd2 * vc2),
                                   -(c.b2 * s_qd1 * vc1 + c.c2 * s_qd2 * vc2)};
    const auto sol = num::solve_linear(m, rhs);
    return {sol[0], sol[1]};
}

OperatingPoint solve_operating_point(double P_target, const ConverterParams& p,
                                     const std::optional<OperatingPoint>& warm_start,
                                     const SolveOptions& opts) {
    if (P_target == 0.0) {
        // Documented tie-break: any duty is optimal up to the magnetizing
        // floor; full square with zero shift keeps the sweep continuous.
        OperatingPoint op = build_operating_point(kDutyMax, kDutyMax, 0.0, 0.0, p);
        op.converged = true;
        return op;
    }

    const double pmax_fwd = max_transferable_power(p);
    if (std::abs(P_target) > pmax_fwd) {
        std::ostringstream msg;
        msg << "requested " << P_target << " W exceeds the transferable bound " << pmax_fwd << " W";
        throw no_feasible_point_error(msg.str());
    }

    const double io_rhs = 2.0 * (P_target / p.Vc2_ref) / p.n;
    const ConstrainedProblem prob{p, io_rhs};

    const double sgn = (P_target > 0.0) ? 1.0 : -1.0;
    std::vector<Vec3> starts;
    if (warm_start && warm_start->converged) {
        starts.push_back({warm_start->control.d1, warm_start->control.d2, warm_start->control.delta()});
    }
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> jitter(-0.04, 0.04);
    const std::array<Vec3, 5> base = {{
        {kDutyMax, kDutyMax, 0.15 * sgn},
        {kDutyMax, 2.35, 0.40 * sgn},
        {2.35, kDutyMax, 0.40 * sgn},
        {kDutyMax, kDutyMax, 0.60 * sgn},
        {2.90, 2.90, 0.25 * sgn},
    }};
    for (const Vec3& b : base)
        starts.push_back(clamp_box({b[0] + jitter(rng), b[1] + jitter(rng), b[2] + jitter(rng)}));

    Candidate best;
    bool have = false;
    for (const Vec3& s : starts) {
        const Candidate c = solve_from(prob, s, opts);
        const bool better = !have || (c.converged && !best.converged) ||
                            (c.converged == best.converged && c.f < best.f);
        if (better) {
            best = c;
            have = true;
        }
    }

    OperatingPoint op = build_operating_point(best.x[0], best.x[1], best.x[2], P_target, p);
    op.converged = best.converged;
    op.iterations = best.iterations;
    op.constraint_violation = best.g_scaled;
    op.optimality = best.optimality;
    return op;
}

bool SweepTable::all_converged() const {
    for (const auto& op : points)
        if (!op.converged) return false;
    return true;
}

SweepTable sweep_power(double P_min, double P_max, int steps, const ConverterParams& p,
                       const SolveOptions& opts) {
    if (steps < 2) throw std::invalid_argument("sweep_power: steps must be >= 2");
    if (!(P_max > P_min)) throw std::invalid_argument("sweep_power: P_max must exceed P_min");

    SweepTable table;
    table.points.reserve(static_cast<std::size_t>(steps));
    std::optional<OperatingPoint> warm;
    for (int i = 0; i < steps; ++i) {
        const double P = P_min + (P_max - P_min) * static_cast<double>(i) / (steps - 1);
        try {
            OperatingPoint op = solve_operating_point(P, p, warm, opts);
            if (op.converged) warm = op;
            table.points.push_back(std::move(op));
        } catch (const std::exception&) {
            OperatingPoint failed;
            failed.P_target = P;
            failed.Io = P / p.Vc2_ref;
            failed.converged = false;
            table.points.push_back(failed);
        }
    }
    return table;
}

double fha_output_power(double d1, double d2, double delta, const ConverterParams& p) {
    const auto [s1, s2] = fundamental_phasors(d1, d2, delta);
    const auto [i1, i2] = solve_currents(s1, s2, p.V1, p.Vc2_ref, p);
    (void)i1;
    const double io = 0.5 * p.n * (s2.real() * i2.real() + s2.imag() * i2.imag());
    return p.Vc2_ref * io;
}

double max_transferable_power(const ConverterParams& p) {
    // Dense grid over the control box, then a few rounds of golden-section
    // polish per coordinate.
    double best = 0.0;
    Vec3 bx = {kDutyMax, kDutyMax, 0.5};
    for (int i = 1; i <= 8; ++i) {
        for (int j = 1; j <= 8; ++j) {
            const double d1 = kDutyMax * i / 8.0;
            const double d2 = kDutyMax * j / 8.0;
            for (int k = 0; k <= 60; ++k) {
                const double dl = 1.57 * k / 60.0;
                const double P = fha_output_power(d1, d2, dl, p);
                if (P > best) {
                    best = P;
                    bx = {d1, d2, dl};
                }
            }
        }
    }
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int round = 0; round < 3; ++round) {
        for (int coord = 0; coord < 3; ++coord) {
            double lo = (coord == 2) ? 0.0 : kDutyMin;
            double hi = (coord == 2) ? kDeltaMax : kDutyMax;
            double a = lo, b = hi;
            for (int k = 0; k < 50; ++k) {
                const double c1 = b - gr * (b - a);
                const double c2 = a + gr * (b - a);
                Vec3 x1 = bx, x2 = bx;
                x1[coord] = c1;
                x2[coord] = c2;
                if (fha_output_power(x1[0], x1[1], x1[2], p) >= fha_output_power(x2[0], x2[1], x2[2], p))
                    b = c2;
                else
                    a = c1;
            }
            bx[coord] = 0.5 * (a + b);
            best = std::max(best, fha_output_power(bx[0], bx[1], bx[2], p));
        }
    }
    return best;
}

} // namespace dab
