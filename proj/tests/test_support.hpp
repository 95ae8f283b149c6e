#pragma once

#include "inls/grid.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace testsup {

// 64-point Gauss-Legendre on [0, L]: the independent quadrature oracle.
// Nodes/weights from Newton iteration on P_n; exact to machine precision for
// polynomial degree <= 127.
inline double gauss_legendre(const std::function<double(double)>& f, double L, int n = 64) {
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) {
                p0 = 1.0;
                p1 = t;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                const double dpf = n * (t * p1 - p0) / (t * t - 1.0);
                x[i] = t;
                w[i] = 2.0 / ((1.0 - t * t) * dpf * dpf);
                break;
            }
        }
    }
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        acc += 0.5 * L * w[i] * f(0.5 * L * (x[i] + 1.0));
    return acc;
}

// Volume integral oracle 4*pi Int_0^L f r^2 dr on split panels (resolves the
// integrand near the origin separately from the tail).
inline double volume_oracle(const std::function<double(double)>& f, double L) {
    auto g = [&](double r) { return f(r) * r * r; };
    const double four_pi = 4.0 * std::numbers::pi;
    double acc = 0.0;
    const int panels = 16;
    for (int p = 0; p < panels; ++p) {
        const double a = L * p / panels;
        const double bnd = L * (p + 1) / panels;
        acc += gauss_legendre([&](double r) { return g(a + r); }, bnd - a);
    }
    return four_pi * acc;
}

// Smooth decaying random radial field: sum of Gaussians times monomials with
// random complex amplitudes. H^1 by construction.
inline inls::RadialField random_field(inls::GridPtr grid, std::mt19937& rng, bool complex_valued = true) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::uniform_real_distribution<double> width(0.4, 3.0);
    std::uniform_int_distribution<int> power(0, 2);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

    const int terms = 3;
    std::vector<double> a(terms), c(terms), th(terms);
    std::vector<int> p(terms);
    for (int k = 0; k < terms; ++k) {
        a[k] = amp(rng);
        c[k] = width(rng);
        p[k] = power(rng);
        th[k] = complex_valued ? phase(rng) : 0.0;
    }
    std::vector<inls::Complex> v(grid->num_nodes());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double r = grid->nodes[i];
        inls::Complex acc(0.0, 0.0);
        for (int k = 0; k < terms; ++k) {
            const double w = c[k];
            const double env = a[k] * std::pow(r, p[k]) * std::exp(-(r / w) * (r / w));
            acc += env * inls::Complex(std::cos(th[k]), std::sin(th[k]));
        }
        v[i] = acc;
    }
    v.back() = inls::Complex(0.0, 0.0);
    return inls::make_field(std::move(grid), std::move(v));
}

} // namespace testsup
