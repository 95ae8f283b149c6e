#include "inls/evolution.hpp"

#include "inls/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace inls {

namespace {

// C^3 monotone ramp 0 -> 1 on [0,1]
double smoothstep7(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double t4 = t * t * t * t;
    return t4 * (35.0 - 84.0 * t + 70.0 * t * t - 20.0 * t * t * t);
}

bool all_finite(const std::vector<Complex>& u) {
    for (const auto& v : u)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            return false;
    return true;
}

} // namespace

Stepper::Stepper(GridPtr grid, const Potential& V, double b, double dt,
                 const SpongeConfig& sponge)
    : grid_(std::move(grid)), b_(b), dt_(dt), sponge_on_(sponge.on) {
    if (!grid_) throw ValidationError("Stepper: null grid");
    if (dt == 0.0 || !std::isfinite(dt))
        throw ValidationError("Stepper: dt must be finite and nonzero");
    if (!(b > 0.0 && b < 1.0))
        throw ValidationError("Stepper: b must lie in (0,1)");

    const RadialGrid& g = *grid_;
    const std::size_t n = g.n;

    phase_weight_.resize(n + 1);
    phase_weight_[0] = std::pow(0.5 * g.h, -b); // singular node: evaluate at r_1/2
    for (std::size_t i = 1; i <= n; ++i)
        phase_weight_[i] = std::pow(g.nodes[i], -b);

    if (sponge_on_) {
        if (!(sponge.width > 0.0 && sponge.width < 0.25 * g.r_max))
            throw ValidationError("Stepper: sponge width must satisfy 0 < w < r_max/4");
        damp_.resize(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            const double s = smoothstep7((g.nodes[i] - (g.r_max - sponge.width)) / sponge.width);
            damp_[i] = std::exp(-sponge.strength * s * std::abs(dt));
        }
    }

    // Crank-Nicolson factors for the half-step of duration dt/2:
    // (I + i theta A) w+ = (I - i theta A) w,  theta = dt/4,
    // A = -D2 + diag(V) acting on w = r u with Dirichlet ends.
    const double theta = 0.25 * dt;
    const double h2 = g.h * g.h;
    const std::size_t m = n - 1;
    diag_.resize(m);
    off_ = Complex(0.0, -theta / h2);
    for (std::size_t i = 1; i < n; ++i)
        diag_[i - 1] = Complex(1.0, theta * (2.0 / h2 + V.eval(g.nodes[i])));

    cprime_.resize(m);
    denom_inv_.resize(m);
    cprime_[0] = off_ / diag_[0];
    denom_inv_[0] = 1.0 / diag_[0];
    for (std::size_t i = 1; i < m; ++i) {
        const Complex denom = diag_[i] - off_ * cprime_[i - 1];
        denom_inv_[i] = 1.0 / denom;
        cprime_[i] = off_ * denom_inv_[i];
    }

    w_.resize(n + 1);
    rhs_.resize(m);
}

void Stepper::linear_half_step(std::vector<Complex>& u) const {
    const RadialGrid& g = *grid_;
    const std::size_t n = g.n;

    for (std::size_t i = 0; i <= n; ++i)
        w_[i] = g.nodes[i] * u[i];

    // rhs = (I - i theta A) w, evaluated with the conjugate coefficients
    for (std::size_t i = 1; i < n; ++i)
        rhs_[i - 1] = std::conj(diag_[i - 1]) * w_[i] - std::conj(off_) * (w_[i - 1] + w_[i + 1]);

    // Thomas substitution with precomputed factors
    rhs_[0] *= denom_inv_[0];
    for (std::size_t i = 1; i < n - 1; ++i)
        rhs_[i] = (rhs_[i] - off_ * rhs_[i - 1]) * denom_inv_[i];
    for (std::size_t i = n - 1; i-- > 1;)
        rhs_[i - 1] -= cprime_[i - 1] * rhs_[i];

    for (std::size_t i = 1; i < n; ++i)
        u[i] = rhs_[i - 1] / g.nodes[i];
    u[0] = (4.0 * u[1] - u[2]) / 3.0; // diagnostic value, zero quadrature weight
    u[n] = Complex(0.0, 0.0);
}

void Stepper::advance(std::vector<Complex>& u) const {
    linear_half_step(u);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double amp2 = std::norm(u[i]);
        u[i] *= std::polar(1.0, dt_ * phase_weight_[i] * amp2);
    }
    linear_half_step(u);
    if (sponge_on_) {
        for (std::size_t i = 0; i < u.size(); ++i)
            u[i] *= damp_[i];
        u.back() = Complex(0.0, 0.0);
    }
}

RadialField step(const RadialField& u, const Potential& V, double b, double dt) {
    Stepper st(u.grid, V, b, dt);
    RadialField out = u;
    st.advance(out.values);
    return out;
}

Trajectory evolve(const RadialField& u0, const Potential& V, double b,
                  const EvolveConfig& cfg, const ExtrasFn* extras, std::uint64_t start_step,
                  const FunctionalSnapshot* baseline) {
    if (!(cfg.dt > 0.0))
        throw ValidationError("evolve: dt must be > 0");
    const double t_start = static_cast<double>(start_step) * cfg.dt;
    if (!(cfg.t_end > t_start))
        throw ValidationError("evolve: t_end must exceed the start time");
    if (cfg.record_every == 0)
        throw ValidationError("evolve: record_every must be >= 1");
    if (!(cfg.blowup_factor > 1.0))
        throw ValidationError("evolve: blowup_factor must be > 1");
    if (!(cfg.drift_tol > 0.0))
        throw ValidationError("evolve: drift_tol must be > 0");

    const RadialGrid& grid = *u0.grid;
    Stepper st(u0.grid, V, b, cfg.dt, cfg.sponge);

    Trajectory traj;
    traj.sponge_used = cfg.sponge.on;
    std::vector<Complex> u = u0.values;

    const auto n_total = static_cast<std::uint64_t>(std::ceil(cfg.t_end / cfg.dt - 1e-12));
    if (n_total <= start_step)
        throw ValidationError("evolve: no steps between start_step and t_end");

    FunctionalSnapshot ref;
    if (baseline) {
        ref = *baseline;
    } else {
        ref = make_snapshot(grid, u0, V, b, t_start);
    }
    const double grad0 = std::sqrt(std::max(ref.grad_sq, 0.0));
    const double mass0 = ref.mass;
    const double e0 = ref.energy;

    std::vector<Complex> last_recorded = u;
    auto record = [&](double t) {
        const RadialField field{u0.grid, u};
        traj.snapshots.push_back(make_snapshot(grid, field, V, b, t));
        if (extras && *extras)
            traj.extras.push_back((*extras)(t, field));
        last_recorded = u;
    };

    // detection state
    auto classify_record = [&](double t) -> std::optional<Outcome> {
        const FunctionalSnapshot& s = traj.snapshots.back();
        const double grad_ratio =
            grad0 > 0.0 ? std::sqrt(s.grad_sq) / grad0
                        : (s.grad_sq > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        const double mass_drift = mass0 > 0.0 ? std::abs(s.mass - mass0) / mass0 : 0.0;
        const double energy_scale = std::max(std::abs(e0), 1e-300);
        const double energy_drift = std::abs(s.energy - e0) / energy_scale;

        bool monotone = false;
        const std::size_t window = 20;
        if (traj.snapshots.size() > window) {
            monotone = true;
            const std::size_t last = traj.snapshots.size() - 1;
            for (std::size_t k = last - window + 1; k <= last; ++k)
                if (!(traj.snapshots[k].grad_sq > traj.snapshots[k - 1].grad_sq)) {
                    monotone = false;
                    break;
                }
        }

        const bool big_grad = grad_ratio >= cfg.blowup_factor;
        if (cfg.sponge.on) {
            if (big_grad && monotone)
                return Outcome{OutcomeKind::blowup_detected, t};
            return std::nullopt;
        }
        if (big_grad && (energy_drift > cfg.drift_tol || monotone))
            return Outcome{OutcomeKind::blowup_detected, t};
        if ((mass_drift > cfg.drift_tol || energy_drift > cfg.drift_tol) && !big_grad)
            return Outcome{OutcomeKind::resolution_lost, t};
        return std::nullopt;
    };

    record(t_start);

    for (std::uint64_t k = start_step + 1; k <= n_total; ++k) {
        st.advance(u);
        const double t = static_cast<double>(k) * cfg.dt;
        if (!all_finite(u)) {
            traj.outcome = {OutcomeKind::blowup_detected, t};
            traj.final_field = RadialField{u0.grid, std::move(last_recorded)};
            return traj;
        }
        if (k % cfg.record_every == 0 || k == n_total) {
            record(t);
            if (auto out = classify_record(t)) {
                traj.outcome = *out;
                traj.final_field = RadialField{u0.grid, std::move(u)};
                return traj;
            }
        }
    }

    traj.outcome = {OutcomeKind::completed, static_cast<double>(n_total) * cfg.dt};
    traj.final_field = RadialField{u0.grid, std::move(u)};
    return traj;
}

std::string outcome_name(OutcomeKind k) {
    switch (k) {
    case OutcomeKind::completed: return "completed";
    case OutcomeKind::blowup_detected: return "blowup_detected";
    case OutcomeKind::resolution_lost: return "resolution_lost";
    }
    return "?";
}

} // namespace inls
