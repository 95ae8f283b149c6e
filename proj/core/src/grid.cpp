#include "inls/grid.hpp"

#include "inls/errors.hpp"

#include <cmath>
#include <numbers>

namespace inls {

GridPtr make_grid(double r_max, std::size_t n) {
    if (!std::isfinite(r_max) || r_max <= 0.0)
        throw ValidationError("make_grid: r_max must be finite and > 0");
    if (n < 64)
        throw ValidationError("make_grid: n must be >= 64");

    auto g = std::make_shared<RadialGrid>();
    g->r_max = r_max;
    g->n = n;
    g->h = r_max / static_cast<double>(n);
    g->nodes.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        g->nodes[i] = static_cast<double>(i) * g->h;
    g->nodes[n] = r_max;

    // Composite Simpson weights h/3*(1,4,2,...,4,1); trapezoid if n is odd.
    g->volume_weights.resize(n + 1);
    const double four_pi = 4.0 * std::numbers::pi;
    if (n % 2 == 0) {
        for (std::size_t i = 0; i <= n; ++i) {
            double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            g->volume_weights[i] = four_pi * (g->h / 3.0) * w * g->nodes[i] * g->nodes[i];
        }
    } else {
        for (std::size_t i = 0; i <= n; ++i) {
            double w = (i == 0 || i == n) ? 0.5 : 1.0;
            g->volume_weights[i] = four_pi * g->h * w * g->nodes[i] * g->nodes[i];
        }
    }
    return g;
}

double integrate(const RadialGrid& grid, std::span<const double> f) {
    if (f.size() != grid.num_nodes())
        throw ValidationError("integrate: sample count does not match grid");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!std::isfinite(f[i]))
            throw ValidationError("integrate: non-finite sample at node " + std::to_string(i));
        acc += grid.volume_weights[i] * f[i];
    }
    return acc;
}

double integrate_weighted(const RadialGrid& grid, std::span<const double> f, double b) {
    if (f.size() != grid.num_nodes())
        throw ValidationError("integrate_weighted: sample count does not match grid");
    if (!(b > 0.0 && b < 1.0))
        throw ValidationError("integrate_weighted: b must lie in (0,1)");
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!std::isfinite(f[i]))
            throw ValidationError("integrate_weighted: non-finite sample at node " + std::to_string(i));

    const double four_pi = 4.0 * std::numbers::pi;
    const double h = grid.h;
    double acc = 0.0;

    // The weight r^{2-b} is not C^2 at the origin, which would cap plain
    // Simpson at order 3-b. Near-origin panels therefore integrate
    // r^{2-b} * (interpolating parabola of f) exactly via closed-form moments
    //   m_k = Int r^{2-b+k} dr;
    // beyond r_cusp the fused integrand is smooth and Simpson takes over.
    std::size_t cusp_panels = std::min<std::size_t>(128, grid.n / 4);
    if (grid.n % 2 != 0) cusp_panels = 0; // trapezoid grids skip the correction

    for (std::size_t p = 0; p < cusp_panels; ++p) {
        const std::size_t i = 2 * p;
        const double a = grid.nodes[i];
        double m[3];
        for (int k = 0; k < 3; ++k) {
            const double e = 3.0 - b + k;
            m[k] = (std::pow(a + 2.0 * h, e) - std::pow(a, e)) / e;
        }
        // Lagrange basis on a, a+h, a+2h in the monomial basis of (r - a)
        // L0 = 1 - 3/(2h) s + 1/(2h^2) s^2, L1 = 2/h s - 1/h^2 s^2,
        // L2 = -1/(2h) s + 1/(2h^2) s^2, with s = r - a.
        // Convert m_k (moments of r^k) into moments of s^k.
        const double s0 = m[0];
        const double s1 = m[1] - a * m[0];
        const double s2 = m[2] - 2.0 * a * m[1] + a * a * m[0];
        const double w0 = s0 - 1.5 / h * s1 + 0.5 / (h * h) * s2;
        const double w1 = 2.0 / h * s1 - 1.0 / (h * h) * s2;
        const double w2 = -0.5 / h * s1 + 0.5 / (h * h) * s2;
        acc += w0 * f[i] + w1 * f[i + 1] + w2 * f[i + 2];
    }

    for (std::size_t i = 2 * cusp_panels; i <= grid.n; ++i) {
        if (i == 0) continue; // r^{2-b} vanishes there
        double panel_w;
        if (grid.n % 2 == 0) {
            // Simpson weights restricted to [r_{2*cusp_panels}, r_max];
            // the subrange start is even so the 4/2 parity pattern carries over
            if (i == 2 * cusp_panels || i == grid.n)
                panel_w = h / 3.0;
            else
                panel_w = (i % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
        } else {
            panel_w = (i == grid.n) ? 0.5 * h : h;
        }
        acc += panel_w * f[i] * std::pow(grid.nodes[i], 2.0 - b);
    }
    return four_pi * acc;
}

namespace {

template <typename T>
std::vector<T> derivative_impl(const RadialGrid& grid, std::span<const T> u) {
    const std::size_t m = grid.num_nodes();
    if (u.size() != m)
        throw ValidationError("radial_derivative: sample count does not match grid");
    std::vector<T> d(m);
    const double h = grid.h;
    const std::size_t n = grid.n;

    // fourth-order stencils; grid construction guarantees n >= 64
    d[0] = (-25.0 * u[0] + 48.0 * u[1] - 36.0 * u[2] + 16.0 * u[3] - 3.0 * u[4]) / (12.0 * h);
    d[1] = (-3.0 * u[0] - 10.0 * u[1] + 18.0 * u[2] - 6.0 * u[3] + u[4]) / (12.0 * h);
    for (std::size_t i = 2; i + 2 <= n; ++i)
        d[i] = (u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]) / (12.0 * h);
    d[n - 1] = (3.0 * u[n] + 10.0 * u[n - 1] - 18.0 * u[n - 2] + 6.0 * u[n - 3] - u[n - 4]) / (12.0 * h);
    d[n] = (25.0 * u[n] - 48.0 * u[n - 1] + 36.0 * u[n - 2] - 16.0 * u[n - 3] + 3.0 * u[n - 4]) / (12.0 * h);
    return d;
}

} // namespace

std::vector<Complex> radial_derivative(const RadialGrid& grid, const RadialField& u) {
    return derivative_impl<Complex>(grid, u.values);
}

std::vector<double> radial_derivative(const RadialGrid& grid, std::span<const double> u) {
    return derivative_impl<double>(grid, u);
}

RadialField make_field(GridPtr grid, std::vector<Complex> values) {
    if (!grid)
        throw ValidationError("make_field: null grid");
    if (values.size() != grid->num_nodes())
        throw ValidationError("make_field: value count does not match grid");
    for (const auto& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw ValidationError("make_field: non-finite sample");
    values.back() = Complex(0.0, 0.0);
    return RadialField{std::move(grid), std::move(values)};
}

RadialField zero_field(GridPtr grid) {
    if (!grid)
        throw ValidationError("zero_field: null grid");
    return RadialField{grid, std::vector<Complex>(grid->num_nodes(), Complex(0.0, 0.0))};
}

RadialField gaussian_field(GridPtr grid, double amplitude, double width) {
    if (!grid)
        throw ValidationError("gaussian_field: null grid");
    if (!std::isfinite(amplitude) || !std::isfinite(width) || width <= 0.0)
        throw ValidationError("gaussian_field: amplitude must be finite and width > 0");
    std::vector<Complex> v(grid->num_nodes());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = grid->nodes[i] / width;
        v[i] = Complex(amplitude * std::exp(-x * x), 0.0);
    }
    v.back() = Complex(0.0, 0.0);
    return RadialField{std::move(grid), std::move(v)};
}

bool is_zero_field(const RadialField& u) {
    for (const auto& v : u.values)
        if (v != Complex(0.0, 0.0))
            return false;
    return true;
}

} // namespace inls
