#pragma once

#include "inls/functionals.hpp"
#include "inls/grid.hpp"
#include "inls/potential.hpp"

#include <array>
#include <cstddef>

namespace inls {

enum class GroundStateBranch { free_q, with_potential };

/// A solved ground-state profile together with its certificate quantities.
/// Free branch: Q solving Q'' + (2/r)Q' - Q + r^{-b}Q^3 = 0, omega = 1.
/// Potential branch: script-Q solving (-Lap+V)Q + omega^2 Q = r^{-b}Q^3 with
/// the self-consistent frequency omega^2 = ((1-b)/(3+b)) ||H^{1/2}Q||^2/||Q||^2.
struct GroundState {
    RadialField profile; // real nonnegative samples (imag parts zero)
    double omega = 1.0;
    double b = 0.0;
    GroundStateBranch branch = GroundStateBranch::free_q;
    std::array<double, 3> residuals{}; // Pohozaev identity residuals

    // integrals of the profile, evaluated once at solve time
    double mass = 0.0;
    double grad_sq = 0.0;
    double quartic = 0.0;
    double kinetic_h = 0.0; // equals grad_sq on the free branch
    double jv_value = 0.0;  // J_V of the profile, for maximizer comparison
};

struct ShootOptions {
    double q0_lo = 0.1;
    double q0_hi = 100.0;
    double rel_tol = 1e-12;   // bisection width on Q(0)
    double residual_tol = 1e-6;
};

struct FlowOptions {
    double tau = 0.5;
    std::size_t max_iters = 1'000'000;
    double tol = 1e-12;       // relative sup-norm change between iterates
    double residual_tol = 1e-4;
};

/// Bisection shooting on Q(0). The march starts at eps = 10h from the local
/// expansion Q ~ Q0 + (Q0/6) r^2 - Q0^3 r^{2-b}/((2-b)(3-b)); undershoot turns
/// upward (Q' > 0), overshoot crosses zero.
GroundState solve_free_q(double b, GridPtr grid, const ShootOptions& opts = {});

/// Independent oracle for the free ground state: semi-implicit imaginary-time
/// flow u <- u + tau (Lap u - u + r^{-b} u^3), each iterate rescaled in
/// amplitude so the Euler-Lagrange frequency is exactly 1.
GroundState gradient_flow_q(double b, GridPtr grid, const RadialField* seed = nullptr,
                            const FlowOptions& opts = {});

/// Maximizer of J_V for V with nonzero negative part: damped fixed point on
/// omega (relaxation 0.5) around the gradient-flow inner solve including V.
GroundState solve_q_with_potential(const Potential& V, double b, GridPtr grid,
                                   const FlowOptions& opts = {});

/// Relative residuals of the Pohozaev identities.
/// Free:      |grad^2 - (3+b)/(1-b) M|, |P - 4/(3+b) grad^2|, |E0 - s_c/(3+b) grad^2|.
/// Potential: |kin_h - (3+b)/(1-b) w^2 M|, |P - 4/(1-b) w^2 M|, 0.
/// A zero field reports infinite residuals.
std::array<double, 3> pohozaev_residuals(const GroundState& g);

/// Thresholds from a ground state; identities script_e = (s_c/(3+b))^{s_c} script_k
/// and c_gn (3+b) script_k = 4 are enforced algebraically.
Thresholds make_thresholds(double b, ThresholdBranch branch, const GroundState& g);

} // namespace inls
