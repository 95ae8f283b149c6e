#include "inls/ground_state.hpp"

#include "inls/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace inls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------- shooting

struct OdeState {
    double q;
    double p; // q'
};

// Q'' = Q - r^{-b} Q^3 - (2/r) Q'
OdeState rhs(double r, const OdeState& s, double b) {
    return {s.p, s.q - std::pow(r, -b) * s.q * s.q * s.q - 2.0 * s.p / r};
}

OdeState rk4_step(double r, const OdeState& s, double dr, double b) {
    const OdeState k1 = rhs(r, s, b);
    const OdeState k2 = rhs(r + 0.5 * dr, {s.q + 0.5 * dr * k1.q, s.p + 0.5 * dr * k1.p}, b);
    const OdeState k3 = rhs(r + 0.5 * dr, {s.q + 0.5 * dr * k2.q, s.p + 0.5 * dr * k2.p}, b);
    const OdeState k4 = rhs(r + dr, {s.q + dr * k3.q, s.p + dr * k3.p}, b);
    return {s.q + dr / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q),
            s.p + dr / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p)};
}

// Expansion of the regular solution at the origin over the exponent ladder
// r^{2i + j(2-b)}: the r^{-b} weight makes Q non-smooth there, and at larger
// Q(0) the cusp coefficients grow like Q0^{2j+1}, so a fixed handful of terms
// is not enough. The coefficients solve the fixed point
//   Q = Q0 + InvLap[ Q - r^{-b} Q^3 ],  InvLap: r^e -> r^{e+2}/((e+2)(e+3)),
// truncated at exponent e_max.
class OriginSeries {
  public:
    OriginSeries(double q0, double b, double e_max = 20.0) : b_(b) {
        imax_ = static_cast<int>(e_max / 2.0) + 1;
        jmax_ = static_cast<int>(e_max / (2.0 - b)) + 1;
        c_.assign(static_cast<std::size_t>(imax_ * jmax_), 0.0);
        std::vector<double> sq(c_.size()), cu(c_.size()), next(c_.size());

        at(c_, 0, 0) = q0;
        const int rungs = static_cast<int>(e_max / (2.0 - b)) + 3;
        for (int it = 0; it < rungs; ++it) {
            convolve(c_, c_, sq, e_max + 2.0);
            convolve(sq, c_, cu, e_max + 2.0); // pre-integration cap is looser
            std::fill(next.begin(), next.end(), 0.0);
            at(next, 0, 0) = q0;
            for (int i = 0; i < imax_; ++i)
                for (int j = 0; j < jmax_; ++j) {
                    const double cv = at(c_, i, j);
                    if (cv != 0.0 && i + 1 < imax_) {
                        const double e = exponent(i + 1, j);
                        if (e <= e_max)
                            at(next, i + 1, j) += cv / (e * (e + 1.0));
                    }
                    const double tv = at(cu, i, j);
                    // -r^{-b} Q^3 term r^{2i+j(2-b)-b} sits at ladder slot
                    // (i-1, j+1); integration lands it on (i, j+1)
                    if (tv != 0.0 && j + 1 < jmax_) {
                        const double e = exponent(i, j + 1);
                        if (e <= e_max)
                            at(next, i, j + 1) -= tv / (e * (e + 1.0));
                    }
                }
            c_.swap(next);
        }
    }

    OdeState eval(double r) const {
        double q = 0.0, p = 0.0;
        for (int i = 0; i < imax_; ++i)
            for (int j = 0; j < jmax_; ++j) {
                const double cv = at(c_, i, j);
                if (cv == 0.0) continue;
                const double e = exponent(i, j);
                const double re = e == 0.0 ? 1.0 : std::pow(r, e);
                q += cv * re;
                if (e > 0.0) p += cv * e * (r == 0.0 ? 0.0 : re / r);
            }
        return {q, p};
    }

    // magnitude of the outermost retained shell: a proxy for the truncation
    // error at radius r (the series has a finite convergence radius that
    // shrinks as Q0 grows)
    double tail_estimate(double r, double e_max = 20.0) const {
        double t = 0.0;
        for (int i = 0; i < imax_; ++i)
            for (int j = 0; j < jmax_; ++j) {
                const double e = exponent(i, j);
                if (e <= e_max - 2.0) continue;
                const double cv = at(c_, i, j);
                if (cv != 0.0) t += std::abs(cv) * std::pow(r, e);
            }
        return t;
    }

  private:
    double exponent(int i, int j) const { return 2.0 * i + j * (2.0 - b_); }
    double& at(std::vector<double>& v, int i, int j) const {
        return v[static_cast<std::size_t>(i * jmax_ + j)];
    }
    double at(const std::vector<double>& v, int i, int j) const {
        return v[static_cast<std::size_t>(i * jmax_ + j)];
    }

    void convolve(const std::vector<double>& x, const std::vector<double>& y,
                  std::vector<double>& out, double cap) const {
        std::fill(out.begin(), out.end(), 0.0);
        for (int i1 = 0; i1 < imax_; ++i1)
            for (int j1 = 0; j1 < jmax_; ++j1) {
                const double a = at(x, i1, j1);
                if (a == 0.0) continue;
                for (int i2 = 0; i1 + i2 < imax_; ++i2)
                    for (int j2 = 0; j1 + j2 < jmax_; ++j2) {
                        const double bb = at(y, i2, j2);
                        if (bb == 0.0) continue;
                        if (exponent(i1 + i2, j1 + j2) > cap) break;
                        at(out, i1 + i2, j1 + j2) += a * bb;
                    }
            }
    }

    double b_;
    int imax_, jmax_;
    std::vector<double> c_;
};

enum class ShotClass { crossed, diverged };

// March hand-over radius: far enough out that the graded RK4 no longer sees
// the worst of the cusp, close enough in that the series still converges.
std::size_t series_nodes(const RadialGrid& grid) {
    const auto k = static_cast<std::size_t>(std::ceil(0.0625 / grid.h));
    return std::min(std::max<std::size_t>(2, k), grid.n / 16);
}

// Step grading against the r^{2-b} cusp: the local RK4 error scales like
// dr^5 r^{-3-b}, so the near-origin intervals get many substeps.
int substeps_at(double r) {
    if (r < 0.03125) return 128;
    if (r < 0.125) return 64;
    if (r < 0.5) return 16;
    if (r < 1.0) return 4;
    return 1;
}

// Integrate one shot across the grid. Classifies the trajectory and, when a
// profile buffer is given, fills node values as far as the march stays sane.
ShotClass march(double q0, double b, const RadialGrid& grid, std::vector<double>* profile,
                std::size_t* last_good = nullptr, std::size_t* series_end = nullptr) {
    const double h = grid.h;
    const OriginSeries series(q0, b);
    std::size_t i0 = series_nodes(grid);
    while (i0 > 2 && series.tail_estimate(static_cast<double>(i0) * h) >
                         1e-12 * (std::abs(q0) + 1.0))
        i0 = std::max<std::size_t>(2, i0 / 2);
    if (series_end) *series_end = i0;
    OdeState s = series.eval(static_cast<double>(i0) * h);

    if (profile) {
        for (std::size_t i = 0; i <= i0; ++i)
            (*profile)[i] = series.eval(grid.nodes[i]).q;
        (*profile)[0] = q0;
    }

    for (std::size_t i = i0; i < grid.n; ++i) {
        double r = grid.nodes[i];
        const int substeps = substeps_at(r);
        const double dr = h / substeps;
        for (int k = 0; k < substeps; ++k) {
            s = rk4_step(r, s, dr, b);
            r += dr;
        }
        if (profile) (*profile)[i + 1] = s.q;
        if (last_good) *last_good = i + 1;
        if (s.q <= 0.0) return ShotClass::crossed;
        if (s.p > 0.0) return ShotClass::diverged;
    }
    // Still positive and decaying at r_max: within bracket noise of critical.
    return ShotClass::diverged;
}

// Beyond the last trustworthy node the shot is dominated by the exponential
// instability; replace it with the matched far-field decay A e^{-r}/r.
void graft_tail(const RadialGrid& grid, std::vector<double>& q, std::size_t i0) {
    const double amp = q[i0] * grid.nodes[i0] * std::exp(grid.nodes[i0]);
    for (std::size_t i = i0 + 1; i <= grid.n; ++i)
        q[i] = amp * std::exp(-grid.nodes[i]) / grid.nodes[i];
    q[grid.n] = 0.0;
}

RadialField field_from_real(GridPtr grid, const std::vector<double>& q) {
    std::vector<Complex> v(q.size());
    for (std::size_t i = 0; i < q.size(); ++i)
        v[i] = Complex(q[i], 0.0);
    return make_field(std::move(grid), std::move(v));
}

void fill_certificates(GroundState& g, const Potential& V) {
    const RadialGrid& grid = *g.profile.grid;
    g.mass = mass(grid, g.profile);
    g.grad_sq = grad_sq(grid, g.profile);
    g.quartic = quartic(grid, g.profile, g.b);
    g.kinetic_h = g.grad_sq + potential_term(grid, g.profile, V);
    g.jv_value = g.quartic / (std::pow(g.mass, 0.5 * (1.0 - g.b)) *
                              std::pow(g.kinetic_h, 0.5 * (3.0 + g.b)));
    g.residuals = pohozaev_residuals(g);
}

// ------------------------------------------------------- imaginary-time flow

// Origin extrapolation weights exact on the local basis {1, r^{2-b}, r^2}:
// u(0) = c1 u(h) + c2 u(2h) + c3 u(3h). The plain parabolic rule is off by
// O(h^{2-b}) times the cusp amplitude, which is visible at the peak.
std::array<double, 3> origin_weights(double b) {
    const double p = 2.0 - b;
    const double a2 = std::pow(2.0, p), a3 = std::pow(3.0, p);
    // rows: sum c = 1, sum c k^{2-b} = 0, sum c k^2 = 0
    const double m[3][3] = {{1, 1, 1}, {1, a2, a3}, {1, 4, 9}};
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    auto cramer = [&](int col) {
        double t[3][3];
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                t[r][c] = m[r][c];
        t[0][col] = 1.0;
        t[1][col] = 0.0;
        t[2][col] = 0.0;
        return (t[0][0] * (t[1][1] * t[2][2] - t[1][2] * t[2][1]) -
                t[0][1] * (t[1][0] * t[2][2] - t[1][2] * t[2][0]) +
                t[0][2] * (t[1][0] * t[2][1] - t[1][1] * t[2][0])) /
               det;
    };
    return {cramer(0), cramer(1), cramer(2)};
}

// Thomas solve of a tridiagonal system; diag/upper/lower are untouched.
void tridiag_solve(const std::vector<double>& lower, const std::vector<double>& diag,
                   const std::vector<double>& upper, std::vector<double>& x,
                   std::vector<double>& scratch_c, std::vector<double>& scratch_d) {
    const std::size_t m = diag.size();
    scratch_c[0] = upper[0] / diag[0];
    scratch_d[0] = x[0] / diag[0];
    for (std::size_t i = 1; i < m; ++i) {
        const double denom = diag[i] - lower[i] * scratch_c[i - 1];
        scratch_c[i] = upper[i] / denom;
        scratch_d[i] = (x[i] - lower[i] * scratch_d[i - 1]) / denom;
    }
    x[m - 1] = scratch_d[m - 1];
    for (std::size_t i = m - 1; i-- > 0;)
        x[i] = scratch_d[i] - scratch_c[i] * x[i + 1];
}

// One semi-implicit flow solver for (I + tau(-Lap + V + omega^2)) in the
// substituted variable w = r u, where the radial Laplacian is w''/r. The
// Helmholtz solve uses the Numerov compact correction, keeping the system
// tridiagonal at fourth-order accuracy.
//
// The solution carries a r^{3-b} cusp in w (the r^{-b} weight is not smooth),
// on which the difference stencil loses two orders near the origin. The
// scheme's exact truncation defect on that basis function is subtracted each
// iteration, with the cusp amplitude tracked from the iterate's origin value.
class FlowOperator {
  public:
    FlowOperator(const RadialGrid& grid, const Potential* V, double omega_sq, double tau,
                 double b)
        : grid_(grid), tau_(tau), b_(b) {
        const std::size_t n = grid.n;
        const std::size_t m = n - 1; // interior nodes 1..n-1
        lower_.resize(m);
        diag_.resize(m);
        upper_.resize(m);
        a_.resize(n + 1);
        cbuf_.resize(m);
        dbuf_.resize(m);
        const double h2 = grid.h * grid.h;
        for (std::size_t i = 0; i <= n; ++i) {
            const double q = (V ? V->eval(grid.nodes[i]) : 0.0) + omega_sq;
            a_[i] = (1.0 + tau * q) / tau; // w'' = a w - s
        }
        for (std::size_t i = 1; i < n; ++i) {
            const std::size_t k = i - 1;
            diag_[k] = -(2.0 + (10.0 * h2 / 12.0) * a_[i]);
            if (i > 1) lower_[k] = 1.0 - (h2 / 12.0) * a_[i - 1];
            if (i + 1 < n) upper_[k] = 1.0 - (h2 / 12.0) * a_[i + 1];
        }

        // unit defect of the scheme on w_c = r^{3-b}:
        //   D2[w_c] - (w_c''(r+h) + 10 w_c''(r) + w_c''(r-h))/12
        defect_unit_.assign(m, 0.0);
        auto wc = [&](double r) { return std::pow(r, 3.0 - b); };
        auto wc2 = [&](double r) { return (3.0 - b) * (2.0 - b) * std::pow(r, 1.0 - b); };
        for (std::size_t i = 1; i < n; ++i) {
            const double r = grid.nodes[i];
            const double d2 = (wc(r + grid.h) - 2.0 * wc(r) + wc(r - grid.h)) / h2;
            defect_unit_[i - 1] =
                d2 - (wc2(r + grid.h) + 10.0 * wc2(r) + wc2(r - grid.h)) / 12.0;
        }

        pow_rb_.resize(n + 1);
        pow_rb_[0] = 0.0;
        for (std::size_t i = 1; i <= n; ++i)
            pow_rb_[i] = std::pow(grid.nodes[i], -b);

        ow_ = origin_weights(b);
    }

    // u_next = (I + tau L)^{-1} (u + tau r^{-b} u^3), returned in-place.
    void apply(std::vector<double>& u) const {
        const std::size_t n = grid_.n;
        const double h2 = grid_.h * grid_.h;
        std::vector<double> s(n + 1, 0.0);
        for (std::size_t i = 1; i < n; ++i) {
            const double rhs_u = u[i] + tau_ * pow_rb_[i] * u[i] * u[i] * u[i];
            s[i] = (grid_.nodes[i] * rhs_u) / tau_;
        }
        const double u0 = ow_[0] * u[1] + ow_[1] * u[2] + ow_[2] * u[3];
        const double amp = -u0 * u0 * u0 / ((2.0 - b_) * (3.0 - b_));
        std::vector<double> x(n - 1);
        for (std::size_t i = 1; i < n; ++i)
            x[i - 1] = -(h2 / 12.0) * (s[i + 1] + 10.0 * s[i] + s[i - 1]) +
                       h2 * amp * defect_unit_[i - 1];
        tridiag_solve(lower_, diag_, upper_, x,
                      const_cast<std::vector<double>&>(cbuf_),
                      const_cast<std::vector<double>&>(dbuf_));
        for (std::size_t i = 1; i < n; ++i)
            u[i] = x[i - 1] / grid_.nodes[i];
        u[0] = ow_[0] * u[1] + ow_[1] * u[2] + ow_[2] * u[3];
        u[n] = 0.0;
    }

  private:
    const RadialGrid& grid_;
    double tau_;
    double b_;
    std::vector<double> lower_, diag_, upper_, a_, defect_unit_, pow_rb_;
    std::array<double, 3> ow_{};
    mutable std::vector<double> cbuf_, dbuf_;
};

struct FlowQuantities {
    double mass, grad, pot, quart, kin;
};

FlowQuantities flow_quantities(const RadialGrid& grid, const std::vector<double>& u,
                               const Potential* V, double b) {
    FlowQuantities q{};
    const auto du = radial_derivative(grid, std::span<const double>(u));
    std::vector<double> f(u.size()), g(u.size()), p4(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        f[i] = u[i] * u[i];
        g[i] = du[i] * du[i];
        p4[i] = f[i] * f[i];
    }
    q.mass = integrate(grid, f);
    q.grad = integrate(grid, g);
    q.quart = integrate_weighted(grid, p4, b);
    q.pot = 0.0;
    if (V && V->kind() != PotentialKind::zero) {
        std::vector<double> vf(u.size());
        for (std::size_t i = 0; i < u.size(); ++i)
            vf[i] = V->eval(grid.nodes[i]) * f[i];
        q.pot = integrate(grid, vf);
    }
    q.kin = q.grad + q.pot;
    return q;
}

// Normalized flow at fixed frequency. Each iterate is rescaled in amplitude
// so the Euler-Lagrange frequency equals omega^2 exactly; this pins the one
// unstable (scaling) direction of the mountain-pass profile.
std::vector<double> flow_fixed_frequency(const RadialGrid& grid, const Potential* V,
                                         double omega_sq, double b,
                                         const std::vector<double>& seed,
                                         const FlowOptions& opts) {
    FlowOperator op(grid, V, omega_sq, opts.tau, b);
    std::vector<double> u = seed;
    std::vector<double> prev(u.size());
    for (std::size_t iter = 0; iter < opts.max_iters; ++iter) {
        prev = u;
        op.apply(u);
        const FlowQuantities q = flow_quantities(grid, u, V, b);
        if (!(q.quart > 0.0) || !std::isfinite(q.quart))
            throw NonConvergenceError("gradient flow: quartic term degenerated");
        const double alpha_sq = (q.kin + omega_sq * q.mass) / q.quart;
        if (!(alpha_sq > 0.0))
            throw NonConvergenceError("gradient flow: indefinite rescale");
        const double alpha = std::sqrt(alpha_sq);
        double diff = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            u[i] *= alpha;
            diff = std::max(diff, std::abs(u[i] - prev[i]));
            scale = std::max(scale, std::abs(u[i]));
        }
        if (diff <= opts.tol * scale)
            return u;
    }
    throw NonConvergenceError("gradient flow: no fixed point after max iterations");
}

std::vector<double> default_seed(const RadialGrid& grid) {
    std::vector<double> u(grid.num_nodes());
    for (std::size_t i = 0; i < u.size(); ++i)
        u[i] = 2.0 * std::exp(-grid.nodes[i] * grid.nodes[i]);
    u.back() = 0.0;
    return u;
}

void check_b(double b) {
    if (!(b > 0.0 && b < 1.0))
        throw ValidationError("ground state: b must lie in (0,1)");
}

} // namespace

GroundState solve_free_q(double b, GridPtr grid, const ShootOptions& opts) {
    check_b(b);
    if (!grid) throw ValidationError("solve_free_q: null grid");

    // bracket the critical Q(0): diverged (too small) below, crossed above
    const int scan = 64;
    std::optional<double> lo_opt, hi_opt;
    for (int k = 0; k < scan; ++k) {
        const double q0 = opts.q0_lo * std::pow(opts.q0_hi / opts.q0_lo,
                                                static_cast<double>(k) / (scan - 1));
        if (march(q0, b, *grid, nullptr) == ShotClass::diverged) {
            lo_opt = q0;
        } else {
            hi_opt = q0;
            break;
        }
    }
    if (!lo_opt || !hi_opt)
        throw NoBracketError("solve_free_q: no classifier sign change for Q(0) in [" +
                             std::to_string(opts.q0_lo) + ", " + std::to_string(opts.q0_hi) + "]");
    double lo = *lo_opt, hi = *hi_opt;

    while ((hi - lo) > opts.rel_tol * 0.5 * (hi + lo)) {
        const double mid = 0.5 * (lo + hi);
        if (march(mid, b, *grid, nullptr) == ShotClass::diverged)
            lo = mid;
        else
            hi = mid;
    }

    const double q0 = 0.5 * (lo + hi);
    std::vector<double> q(grid->num_nodes(), 0.0);
    std::size_t last_good = 2;
    std::size_t series_end = 2;
    march(q0, b, *grid, &q, &last_good, &series_end);

    // trust the march only while Q decays monotonically and stays well above
    // the bisection noise floor
    std::size_t i0 = last_good;
    for (std::size_t i = series_end + 1; i <= last_good; ++i) {
        if (q[i] <= 0.0 || q[i] > q[i - 1] || q[i] < 1e-7 * q0) {
            i0 = i - 1;
            break;
        }
    }
    if (grid->nodes[i0] < 5.0)
        throw NonConvergenceError("solve_free_q: shot unusable before r = 5");
    graft_tail(*grid, q, i0);

    GroundState g;
    g.profile = field_from_real(grid, q);
    g.omega = 1.0;
    g.b = b;
    g.branch = GroundStateBranch::free_q;
    fill_certificates(g, Potential::zero());
    for (double r : g.residuals)
        if (!(r <= opts.residual_tol))
            throw NonConvergenceError("solve_free_q: Pohozaev residual " + std::to_string(r) +
                                      " exceeds " + std::to_string(opts.residual_tol));
    return g;
}

GroundState gradient_flow_q(double b, GridPtr grid, const RadialField* seed,
                            const FlowOptions& opts) {
    check_b(b);
    if (!grid) throw ValidationError("gradient_flow_q: null grid");

    std::vector<double> u0;
    if (seed) {
        if (seed->values.size() != grid->num_nodes())
            throw ValidationError("gradient_flow_q: seed does not match grid");
        u0.resize(seed->values.size());
        for (std::size_t i = 0; i < u0.size(); ++i)
            u0[i] = seed->values[i].real();
    } else {
        u0 = default_seed(*grid);
    }

    const auto u = flow_fixed_frequency(*grid, nullptr, 1.0, b, u0, opts);

    GroundState g;
    g.profile = field_from_real(grid, u);
    g.omega = 1.0;
    g.b = b;
    g.branch = GroundStateBranch::free_q;
    fill_certificates(g, Potential::zero());
    return g;
}

GroundState solve_q_with_potential(const Potential& V, double b, GridPtr grid,
                                   const FlowOptions& opts) {
    check_b(b);
    if (!grid) throw ValidationError("solve_q_with_potential: null grid");
    if (V.negative_part_is_zero())
        throw AttainmentUnavailableError(
            "solve_q_with_potential: V_- = 0, the sharp constant is not attained "
            "(route V = 0 or V >= 0 to the free ground state)");
    if (!hypothesis_check(V, TheoremId::t1_1, *grid).overall)
        throw ValidationError("solve_q_with_potential: V fails the T1.1 hypotheses");

    const double sc_ratio = (1.0 - b) / (3.0 + b);
    double omega = 1.0;
    std::vector<double> u = default_seed(*grid);

    FlowOptions inner = opts;
    inner.tol = std::max(opts.tol, 1e-13);

    // The self-consistency map F(omega) has slope close to one (it is the
    // identity for V = 0 by scaling), so the plain damped iteration crawls.
    // Secant steps on g(omega) = F(omega) - omega accelerate it; the damped
    // update remains the fallback whenever a secant step misbehaves.
    auto self_consistent_omega = [&](double w) {
        // the fixed point does not depend on tau; larger steps keep the
        // contraction rate bounded as omega (the spectral gap) shrinks
        FlowOptions fo = inner;
        fo.tau = std::clamp(1.0 / (w * w), inner.tau, 1e3);
        u = flow_fixed_frequency(*grid, &V, w * w, b, u, fo);
        const FlowQuantities q = flow_quantities(*grid, u, &V, b);
        if (!(q.kin > 0.0))
            throw NonConvergenceError("solve_q_with_potential: indefinite kinetic energy");
        return std::sqrt(sc_ratio * q.kin / q.mass);
    };

    const int max_outer = 200;
    double prev_omega = 0.0, prev_g = 0.0;
    bool have_prev = false;
    for (int outer = 0; outer < max_outer; ++outer) {
        const double g_val = self_consistent_omega(omega) - omega;
        if (std::abs(g_val) <= 1e-12 * std::max(1.0, omega)) {
            GroundState g;
            g.profile = field_from_real(grid, u);
            g.omega = omega;
            g.b = b;
            g.branch = GroundStateBranch::with_potential;
            fill_certificates(g, V);
            for (double r : g.residuals)
                if (!(r <= opts.residual_tol))
                    throw NonConvergenceError(
                        "solve_q_with_potential: Pohozaev residual " + std::to_string(r) +
                        " exceeds " + std::to_string(opts.residual_tol));
            return g;
        }
        double next;
        if (have_prev && g_val != prev_g) {
            next = omega - g_val * (omega - prev_omega) / (g_val - prev_g);
            if (!std::isfinite(next) || next <= 1e-4 || next >= 10.0)
                next = omega + 0.5 * g_val; // damped fallback, relaxation 0.5
        } else {
            next = omega + 0.5 * g_val;
        }
        prev_omega = omega;
        prev_g = g_val;
        have_prev = true;
        omega = next;
    }
    throw NonConvergenceError("solve_q_with_potential: omega fixed point did not settle in 200 iterations");
}

std::array<double, 3> pohozaev_residuals(const GroundState& g) {
    const RadialGrid& grid = *g.profile.grid;
    const double m = mass(grid, g.profile);
    const double gr = grad_sq(grid, g.profile);
    const double p = quartic(grid, g.profile, g.b);
    const double b = g.b;

    auto rel = [](double lhs, double rhs, double scale) {
        if (scale == 0.0) return kInf;
        return std::abs(lhs - rhs) / std::abs(scale);
    };

    if (g.branch == GroundStateBranch::free_q) {
        const double e0 = 0.5 * gr - 0.25 * p;
        const double sc = 0.5 * (1.0 + b);
        return {rel(gr, (3.0 + b) / (1.0 - b) * m, gr),
                rel(p, 4.0 / (3.0 + b) * gr, p),
                rel(e0, sc / (3.0 + b) * gr, e0)};
    }
    const double kin = g.kinetic_h;
    const double w2 = g.omega * g.omega;
    return {rel(kin, (3.0 + b) / (1.0 - b) * w2 * m, kin),
            rel(p, 4.0 / (1.0 - b) * w2 * m, p),
            0.0};
}

Thresholds make_thresholds(double b, ThresholdBranch branch, const GroundState& g) {
    check_b(b);
    if (std::abs(g.b - b) > 1e-12)
        throw BranchMismatchError("make_thresholds: ground state solved for a different b");
    if (branch == ThresholdBranch::free_or_nonneg && g.branch != GroundStateBranch::free_q)
        throw BranchMismatchError("make_thresholds: free branch needs the free ground state Q");
    if (branch == ThresholdBranch::well && g.branch != GroundStateBranch::with_potential)
        throw BranchMismatchError("make_thresholds: well branch needs the potential ground state");

    const double sc = s_critical(b);
    const double kin = branch == ThresholdBranch::free_or_nonneg ? g.grad_sq : g.kinetic_h;

    Thresholds t;
    t.b = b;
    t.s_c = sc;
    t.branch = branch;
    t.script_k = std::pow(g.mass, 1.0 - sc) * std::pow(kin, sc);
    t.script_e = std::pow(sc / (3.0 + b), sc) * t.script_k;
    t.c_gn = 4.0 / ((3.0 + b) * t.script_k);

    // cross-check against the directly evaluated mass-energy of the profile
    const double e_direct = 0.5 * kin - 0.25 * g.quartic;
    if (e_direct > 0.0) {
        const double me_direct = std::pow(g.mass, 1.0 - sc) * std::pow(e_direct, sc);
        if (std::abs(me_direct - t.script_e) > 1e-3 * t.script_e)
            throw InternalConsistencyError("make_thresholds: ground state does not satisfy the "
                                           "threshold algebra; solver residuals too large");
    }
    return t;
}

} // namespace inls
