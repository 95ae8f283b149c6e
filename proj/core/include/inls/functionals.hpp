#pragma once

#include "inls/grid.hpp"
#include "inls/potential.hpp"

namespace inls {

/// Critical Sobolev index s_c = (1+b)/2 (N=3, p=3). Computed, never configured.
double s_critical(double b);

double mass(const RadialGrid& grid, const RadialField& u);
double grad_sq(const RadialGrid& grid, const RadialField& u);

/// Int |x|^{-b} |u|^4 dx with the weight fused as r^{2-b}.
double quartic(const RadialGrid& grid, const RadialField& u, double b);

/// Int V |u|^2 dx.
double potential_term(const RadialGrid& grid, const RadialField& u, const Potential& V);

/// Int (x.grad V) |u|^2 dx.
double xdgv_term(const RadialGrid& grid, const RadialField& u, const Potential& V);

/// ||H^{1/2} u||^2 = ||grad u||^2 + Int V|u|^2. Throws IndefiniteKineticError
/// when negative (possible only for large wells breaching the hypotheses).
double kinetic_h(const RadialGrid& grid, const RadialField& u, const Potential& V);

/// E(u) = 1/2 ||H^{1/2}u||^2 - 1/4 Int |x|^{-b}|u|^4.
double energy(const RadialGrid& grid, const RadialField& u, const Potential& V, double b);

/// Weighted Gagliardo-Nirenberg quotient
///   J_V(u) = Int|x|^{-b}|u|^4 / ( ||u||^{1-b} ||H^{1/2}u||^{3+b} ).
/// Scale invariant: J_V(alpha u) = J_V(u).
double jv(const RadialGrid& grid, const RadialField& u, const Potential& V, double b);

/// Virial functional K(u) = ||grad u||^2 - 1/2 Int (x.grad V)|u|^2
///                          - (3+b)/4 Int |x|^{-b}|u|^4.
double kfun(const RadialGrid& grid, const RadialField& u, const Potential& V, double b);

/// M^{1-s_c} E^{s_c}; -inf sentinel for E <= 0 (the threshold condition is
/// vacuous there, and fractional powers of negatives are avoided).
double me_product(const RadialGrid& grid, const RadialField& u, const Potential& V, double b);

/// ||u||^{2(1-s_c)} ||H^{1/2}u||^{2 s_c}.
double kin_product(const RadialGrid& grid, const RadialField& u, const Potential& V, double b);

enum class ThresholdBranch { free_or_nonneg, well };

/// Mass-energy / mass-kinetic thresholds and the sharp constant, tied by
///   script_e = (s_c/(3+b))^{s_c} script_k,   c_gn = 4 / ((3+b) script_k).
struct Thresholds {
    double b = 0.0;
    double s_c = 0.0;
    double script_e = 0.0;
    double script_k = 0.0;
    double c_gn = 0.0;
    ThresholdBranch branch = ThresholdBranch::free_or_nonneg;
};

/// One evaluation of every conserved/variational quantity at time t.
struct FunctionalSnapshot {
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double kinetic_h = 0.0;
    double grad_sq = 0.0;
    double quartic = 0.0;
    double kfun = 0.0;
    double me_product = 0.0;
    double kin_product = 0.0;
};

FunctionalSnapshot make_snapshot(const RadialGrid& grid, const RadialField& u,
                                 const Potential& V, double b, double t);

} // namespace inls
