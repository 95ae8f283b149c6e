#pragma once

#include "inls/functionals.hpp"
#include "inls/grid.hpp"
#include "inls/potential.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace inls {

struct SpongeConfig {
    bool on = false;
    double width = 4.0;    // absorbing layer [r_max - width, r_max]
    double strength = 2.0; // sigma
};

struct EvolveConfig {
    double t_end = 1.0;
    double dt = 1e-3;
    std::size_t record_every = 10;
    SpongeConfig sponge;
    double blowup_factor = 10.0; // on ||grad u|| relative to t=0
    double drift_tol = 1e-5;
};

enum class OutcomeKind { completed, blowup_detected, resolution_lost };

struct Outcome {
    OutcomeKind kind = OutcomeKind::completed;
    double t_star = 0.0; // trigger time for non-completed outcomes
};

/// Extra per-record diagnostics (virial quantities etc.) supplied by a caller.
struct TrajectoryExtras {
    double variance = 0.0;
    double virial_first = 0.0;
    double virial_second = 0.0;
    double exterior_mass = 0.0;
};

using ExtrasFn = std::function<TrajectoryExtras(double t, const RadialField& u)>;

struct Trajectory {
    std::vector<FunctionalSnapshot> snapshots; // snapshot.t strictly increasing
    std::vector<TrajectoryExtras> extras;      // parallel to snapshots when requested
    RadialField final_field;
    Outcome outcome;
    bool sponge_used = false;
};

/// One Strang step: half Crank-Nicolson linear flow on w = r u, exact
/// nonlinear phase rotation, half linear flow (plus sponge damping when on).
class Stepper {
  public:
    Stepper(GridPtr grid, const Potential& V, double b, double dt,
            const SpongeConfig& sponge = {});

    void advance(std::vector<Complex>& u) const;
    double dt() const { return dt_; }

  private:
    void linear_half_step(std::vector<Complex>& u) const;

    GridPtr grid_;
    double b_;
    double dt_;
    bool sponge_on_ = false;
    std::vector<double> phase_weight_; // r^{-b}, with r_1/2 at the origin node
    std::vector<double> damp_;         // exp(-sigma s(r) dt)
    std::vector<Complex> diag_;        // CN matrix I + i theta A on interior nodes
    Complex off_;
    std::vector<Complex> cprime_;      // precomputed Thomas coefficients
    std::vector<Complex> denom_inv_;
    mutable std::vector<Complex> w_, rhs_;
};

RadialField step(const RadialField& u, const Potential& V, double b, double dt);

/// Integrates from step index start_step (time start_step*dt) up to t_end.
/// Record times are global step multiples of dt, so a run split at a
/// checkpoint reproduces the uninterrupted series bit for bit.
Trajectory evolve(const RadialField& u0, const Potential& V, double b,
                  const EvolveConfig& cfg, const ExtrasFn* extras = nullptr,
                  std::uint64_t start_step = 0,
                  const FunctionalSnapshot* baseline = nullptr);

std::string outcome_name(OutcomeKind k);

} // namespace inls
