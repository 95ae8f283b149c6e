#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace inls {

using Complex = std::complex<double>;

/// Uniform radial mesh on [0, r_max] with quadrature weights for
/// 4*pi * Int f(r) r^2 dr, the radial form of volume integrals over R^3.
struct RadialGrid {
    double r_max = 0.0;
    std::size_t n = 0;        // number of intervals; n+1 nodes
    double h = 0.0;           // r_max / n
    std::vector<double> nodes;          // r_i = i*h
    std::vector<double> volume_weights; // 4*pi * w_i * r_i^2 (Simpson, trapezoid if n odd)

    std::size_t num_nodes() const { return n + 1; }
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Complex samples u(r_i) of a radial function on R^3, with u(r_max) = 0
/// (Dirichlet truncation of decay at infinity).
struct RadialField {
    GridPtr grid;
    std::vector<Complex> values;
};

GridPtr make_grid(double r_max, std::size_t n);

/// 4*pi * Int_0^{r_max} f(r) r^2 dr by composite Simpson (trapezoid when n is
/// odd). Rejects non-finite samples.
double integrate(const RadialGrid& grid, std::span<const double> f);

/// Same integral with the singular focusing weight fused in:
/// 4*pi * Int f(r) r^{2-b} dr. The r=0 node carries zero weight (b < 1).
double integrate_weighted(const RadialGrid& grid, std::span<const double> f, double b);

/// Nodewise radial derivative: fourth-order centered stencil at interior
/// nodes, one-sided at the edges. Exact on quadratics.
std::vector<Complex> radial_derivative(const RadialGrid& grid, const RadialField& u);
std::vector<double> radial_derivative(const RadialGrid& grid, std::span<const double> u);

/// Field builders. All enforce the Dirichlet invariant at r_max.
RadialField make_field(GridPtr grid, std::vector<Complex> values);
RadialField zero_field(GridPtr grid);
RadialField gaussian_field(GridPtr grid, double amplitude, double width);

bool is_zero_field(const RadialField& u);

} // namespace inls
