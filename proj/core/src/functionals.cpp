#include "inls/functionals.hpp"

#include "inls/errors.hpp"

#include <cmath>
#include <limits>

namespace inls {

namespace {

std::vector<double> abs2(const RadialField& u) {
    std::vector<double> f(u.values.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = std::norm(u.values[i]);
    return f;
}

void check_b(double b) {
    if (!(b > 0.0 && b < 1.0))
        throw ValidationError("b must lie in (0,1)");
}

} // namespace

double s_critical(double b) {
    check_b(b);
    return 0.5 * (1.0 + b);
}

double mass(const RadialGrid& grid, const RadialField& u) {
    return integrate(grid, abs2(u));
}

double grad_sq(const RadialGrid& grid, const RadialField& u) {
    const auto du = radial_derivative(grid, u);
    std::vector<double> f(du.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = std::norm(du[i]);
    return integrate(grid, f);
}

double quartic(const RadialGrid& grid, const RadialField& u, double b) {
    check_b(b);
    std::vector<double> f(u.values.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = std::norm(u.values[i]);
        f[i] = a * a;
    }
    return integrate_weighted(grid, f, b);
}

double potential_term(const RadialGrid& grid, const RadialField& u, const Potential& V) {
    if (V.kind() == PotentialKind::zero) return 0.0;
    std::vector<double> f(u.values.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = V.eval(grid.nodes[i]) * std::norm(u.values[i]);
    return integrate(grid, f);
}

double xdgv_term(const RadialGrid& grid, const RadialField& u, const Potential& V) {
    if (V.kind() == PotentialKind::zero) return 0.0;
    std::vector<double> f(u.values.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = V.x_dot_grad_v(grid.nodes[i]) * std::norm(u.values[i]);
    return integrate(grid, f);
}

double kinetic_h(const RadialGrid& grid, const RadialField& u, const Potential& V) {
    const double k = grad_sq(grid, u) + potential_term(grid, u, V);
    if (k < 0.0)
        throw IndefiniteKineticError("kinetic_h: ||H^{1/2}u||^2 < 0; potential hypotheses breached");
    return k;
}

double energy(const RadialGrid& grid, const RadialField& u, const Potential& V, double b) {
    return 0.5 * kinetic_h(grid, u, V) - 0.25 * quartic(grid, u, b);
}

double jv(const RadialGrid& grid, const RadialField& u, const Potential& V, double b) {
    check_b(b);
    if (is_zero_field(u))
        throw ZeroFieldError("jv: zero field");
    const double m = mass(grid, u);
    const double k = kinetic_h(grid, u, V);
    if (k <= 0.0)
        throw IndefiniteKineticError("jv: ||H^{1/2}u||^2 <= 0");
    const double p = quartic(grid, u, b);
    return p / (std::pow(m, 0.5 * (1.0 - b)) * std::pow(k, 0.5 * (3.0 + b)));
}

double kfun(const RadialGrid& grid, const RadialField& u, const Potential& V, double b) {
    check_b(b);
    return grad_sq(grid, u) - 0.5 * xdgv_term(grid, u, V) - 0.25 * (3.0 + b) * quartic(grid, u, b);
}

double me_product(const RadialGrid& grid, const RadialField& u, const Potential& V, double b) {
    const double sc = s_critical(b);
    const double e = energy(grid, u, V, b);
    if (e <= 0.0)
        return -std::numeric_limits<double>::infinity();
    return std::pow(mass(grid, u), 1.0 - sc) * std::pow(e, sc);
}

double kin_product(const RadialGrid& grid, const RadialField& u, const Potential& V, double b) {
    const double sc = s_critical(b);
    return std::pow(mass(grid, u), 1.0 - sc) * std::pow(kinetic_h(grid, u, V), sc);
}

FunctionalSnapshot make_snapshot(const RadialGrid& grid, const RadialField& u,
                                 const Potential& V, double b, double t) {
    const double sc = s_critical(b);
    FunctionalSnapshot s;
    s.t = t;
    s.mass = mass(grid, u);
    s.grad_sq = grad_sq(grid, u);
    s.quartic = quartic(grid, u, b);
    const double w = potential_term(grid, u, V);
    s.kinetic_h = s.grad_sq + w;
    if (s.kinetic_h < 0.0)
        throw IndefiniteKineticError("snapshot: ||H^{1/2}u||^2 < 0");
    s.energy = 0.5 * s.kinetic_h - 0.25 * s.quartic;
    s.kfun = s.grad_sq - 0.5 * xdgv_term(grid, u, V) - 0.25 * (3.0 + b) * s.quartic;
    s.me_product = s.energy <= 0.0 ? -std::numeric_limits<double>::infinity()
                                   : std::pow(s.mass, 1.0 - sc) * std::pow(s.energy, sc);
    s.kin_product = std::pow(s.mass, 1.0 - sc) * std::pow(s.kinetic_h, sc);
    return s;
}

} // namespace inls
