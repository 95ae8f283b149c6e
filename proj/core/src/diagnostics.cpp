#include "inls/diagnostics.hpp"

#include "inls/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace inls {

namespace {

// Blend polynomial for quadratic_capped on t = (r-R)/R in [0,1]:
// phi = R^2 g(t) with C^3 matching to r^2 at t=0 and to a constant at t=1.
// Solved once from the matching conditions; g'' <= 2 and 0 <= g <= (1+t)^2.
constexpr double kG[8] = {1.0, 2.0, 1.0, 0.0, -15.0, 26.0, -17.0, 4.0};

double poly_eval(const double* c, int deg, double t) {
    double acc = c[deg];
    for (int k = deg - 1; k >= 0; --k)
        acc = acc * t + c[k];
    return acc;
}

double poly_deriv(const double* c, int deg, int order, double t) {
    double d[8];
    int m = deg;
    for (int k = 0; k <= deg; ++k)
        d[k] = c[k];
    for (int o = 0; o < order; ++o) {
        for (int k = 0; k < m; ++k)
            d[k] = d[k + 1] * (k + 1);
        d[m] = 0.0;
        --m;
    }
    return poly_eval(d, std::max(m, 0), t);
}

// C^3 septic smoothstep S and its antiderivative T, used by exterior_step.
double step_s(double s, int order) {
    static constexpr double cs[8] = {0, 0, 0, 0, 35.0, -84.0, 70.0, -20.0};
    return poly_deriv(cs, 7, order, s);
}
double step_t(double s) {
    static constexpr double ct[9] = {0, 0, 0, 0, 0, 7.0, -14.0, 10.0, -2.5};
    double acc = ct[8];
    for (int k = 7; k >= 0; --k)
        acc = acc * s + ct[k];
    return acc;
}

// exterior_step master shape on t in [0,1]: F' = (4/3) * plateau bump built
// from septic ramps over [0,1/4] and [3/4,1]; max F' = 4/3 so the slope bound
// phi' <= 8/(3R) < 4/R holds. F' is C^3, hence phi is C^4.
double ext_f(double t, int order) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return order == 0 ? 1.0 : 0.0;
    if (t < 0.25) {
        const double s = 4.0 * t;
        if (order == 0) return step_t(s) / 3.0;
        return (4.0 / 3.0) * std::pow(4.0, order - 1) * step_s(s, order - 1);
    }
    if (t <= 0.75) {
        if (order == 0) return 1.0 / 6.0 + (4.0 / 3.0) * (t - 0.25);
        if (order == 1) return 4.0 / 3.0;
        return 0.0;
    }
    const double s = 4.0 - 4.0 * t;
    if (order == 0) return 1.0 - step_t(s) / 3.0;
    const double sign = (order % 2 == 0) ? -1.0 : 1.0;
    return sign * (4.0 / 3.0) * std::pow(4.0, order - 1) * step_s(s, order - 1);
}

} // namespace

CutoffProfile CutoffProfile::quadratic_capped(double R) {
    if (!(R > 0.0) || !std::isfinite(R))
        throw ValidationError("CutoffProfile: R must be finite and > 0");
    return CutoffProfile(CutoffKind::quadratic_capped, R);
}

CutoffProfile CutoffProfile::exterior_step(double R) {
    if (!(R > 0.0) || !std::isfinite(R))
        throw ValidationError("CutoffProfile: R must be finite and > 0");
    return CutoffProfile(CutoffKind::exterior_step, R);
}

double CutoffProfile::phi(double r) const {
    if (kind_ == CutoffKind::quadratic_capped) {
        if (r <= R_) return r * r;
        if (r >= 2.0 * R_) return 2.0 * R_ * R_;
        return R_ * R_ * poly_eval(kG, 7, (r - R_) / R_);
    }
    return ext_f((r - 0.5 * R_) / (0.5 * R_), 0);
}

double CutoffProfile::dphi(double r) const {
    if (kind_ == CutoffKind::quadratic_capped) {
        if (r <= R_) return 2.0 * r;
        if (r >= 2.0 * R_) return 0.0;
        return R_ * poly_deriv(kG, 7, 1, (r - R_) / R_);
    }
    return ext_f((r - 0.5 * R_) / (0.5 * R_), 1) * (2.0 / R_);
}

double CutoffProfile::d2phi(double r) const {
    if (kind_ == CutoffKind::quadratic_capped) {
        if (r <= R_) return 2.0;
        if (r >= 2.0 * R_) return 0.0;
        return poly_deriv(kG, 7, 2, (r - R_) / R_);
    }
    const double j = 2.0 / R_;
    return ext_f((r - 0.5 * R_) / (0.5 * R_), 2) * j * j;
}

double CutoffProfile::d3phi(double r) const {
    if (kind_ == CutoffKind::quadratic_capped) {
        if (r <= R_ || r >= 2.0 * R_) return 0.0;
        return poly_deriv(kG, 7, 3, (r - R_) / R_) / R_;
    }
    const double j = 2.0 / R_;
    return ext_f((r - 0.5 * R_) / (0.5 * R_), 3) * j * j * j;
}

double CutoffProfile::d4phi(double r) const {
    if (kind_ == CutoffKind::quadratic_capped) {
        if (r <= R_ || r >= 2.0 * R_) return 0.0;
        return poly_deriv(kG, 7, 4, (r - R_) / R_) / (R_ * R_);
    }
    const double j = 2.0 / R_;
    return ext_f((r - 0.5 * R_) / (0.5 * R_), 4) * j * j * j * j;
}

double CutoffProfile::dphi_over_r(double r) const {
    if (r == 0.0) return d2phi(0.0);
    return dphi(r) / r;
}

double CutoffProfile::bilaplacian(double r) const {
    if (r == 0.0) return 0.0; // both kinds are exactly quadratic/flat near 0
    return d4phi(r) + 4.0 * d3phi(r) / r;
}

double variance(const RadialGrid& grid, const RadialField& u, const CutoffProfile& phi) {
    std::vector<double> f(u.values.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = phi.phi(grid.nodes[i]) * std::norm(u.values[i]);
    return integrate(grid, f);
}

double virial_first(const RadialGrid& grid, const RadialField& u, const CutoffProfile& phi) {
    const auto du = radial_derivative(grid, u);
    std::vector<double> f(u.values.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = phi.dphi(grid.nodes[i]) * std::imag(du[i] * std::conj(u.values[i]));
    return 2.0 * integrate(grid, f);
}

double virial_second(const RadialGrid& grid, const RadialField& u, const Potential& V,
                     double b, const CutoffProfile& phi) {
    const auto du = radial_derivative(grid, u);
    const std::size_t m = u.values.size();
    std::vector<double> smooth(m), quartic_part(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double r = grid.nodes[i];
        const double por = phi.dphi_over_r(r);
        const double p2 = phi.d2phi(r);
        const double gu2 = std::norm(du[i]);
        const double au2 = std::norm(u.values[i]);
        smooth[i] = 4.0 * por * gu2 + 4.0 * (p2 - por) * gu2 -
                    2.0 * por * V.x_dot_grad_v(r) * au2 - phi.bilaplacian(r) * au2;
        quartic_part[i] = -(p2 + (2.0 + b) * por) * au2 * au2;
    }
    return integrate(grid, smooth) + integrate_weighted(grid, quartic_part, b);
}

double exterior_mass(const RadialGrid& grid, const RadialField& u, double R) {
    if (!(R > 0.0 && R < grid.r_max))
        throw ValidationError("exterior_mass: need 0 < R < r_max");
    const std::size_t k0 = static_cast<std::size_t>(std::ceil(R / grid.h - 1e-12));
    const double four_pi = 4.0 * std::numbers::pi;

    auto f = [&](std::size_t i) { return std::norm(u.values[i]) * grid.nodes[i] * grid.nodes[i]; };

    double acc = 0.0;
    const std::size_t count = grid.n - k0; // intervals in [r_k0, r_max]
    if (count >= 2 && count % 2 == 0) {
        for (std::size_t i = k0; i <= grid.n; ++i) {
            const double w = (i == k0 || i == grid.n) ? 1.0 : ((i - k0) % 2 == 1 ? 4.0 : 2.0);
            acc += grid.h / 3.0 * w * f(i);
        }
    } else {
        for (std::size_t i = k0; i < grid.n; ++i)
            acc += 0.5 * grid.h * (f(i) + f(i + 1));
    }

    // partial strip [R, r_k0) by linear interpolation
    if (k0 > 0) {
        const double r_lo = grid.nodes[k0 - 1];
        const double frac = (R - r_lo) / grid.h;
        if (frac < 1.0 - 1e-12) {
            const double fR = (1.0 - frac) * f(k0 - 1) + frac * f(k0);
            acc += 0.5 * (grid.nodes[k0] - R) * (fR + f(k0));
        }
    }
    return four_pi * acc;
}

namespace {

enum class Side { below, above, boundary };

Side classify_side(double value, double threshold, double band) {
    if (value < threshold * (1.0 - band)) return Side::below;
    if (value > threshold * (1.0 + band)) return Side::above;
    return Side::boundary;
}

} // namespace

ClassificationReport classify(const RadialGrid& grid, const RadialField& u0,
                              const Potential& V, double b, const GroundStates& grounds) {
    ClassificationReport rep;

    double v_min = 0.0, v_max = 0.0;
    for (double r : grid.nodes) {
        const double v = V.eval(r);
        v_min = std::min(v_min, v);
        v_max = std::max(v_max, v);
    }
    const bool nonneg = v_min >= 0.0;
    const bool nonpos = v_max <= 0.0;

    if (grounds.free_state.branch != GroundStateBranch::free_q)
        throw MissingGroundStateError("classify: grounds.free_state must be the free Q");

    if (nonneg) {
        rep.thresholds = make_thresholds(b, ThresholdBranch::free_or_nonneg, grounds.free_state);
    } else if (nonpos) {
        if (!grounds.well_state)
            throw MissingGroundStateError("classify: V <= 0 with V_- != 0 needs the potential ground state");
        rep.thresholds = make_thresholds(b, ThresholdBranch::well, *grounds.well_state);
    } else {
        rep.thresholds = make_thresholds(b, ThresholdBranch::free_or_nonneg, grounds.free_state);
        rep.note = "mixed-sign potential: outside the paper's two-branch threshold scheme";
    }

    rep.me = me_product(grid, u0, V, b);
    rep.kin = kin_product(grid, u0, V, b);
    rep.margin_e = rep.thresholds.script_e - rep.me;
    rep.margin_k = rep.thresholds.script_k - rep.kin;

    rep.t11 = hypothesis_check(V, TheoremId::t1_1, grid);
    rep.t12 = hypothesis_check(V, TheoremId::t1_2, grid);
    rep.t14 = hypothesis_check(V, TheoremId::t1_4, grid);

    if (!rep.note.empty()) {
        rep.prediction = Prediction::undetermined;
        return rep;
    }

    // strictness band for the paper's strict inequalities
    const double band = 1e-5;
    const Side e_side = (rep.me == -std::numeric_limits<double>::infinity())
                            ? Side::below
                            : classify_side(rep.me, rep.thresholds.script_e, band);
    const Side k_side = classify_side(rep.kin, rep.thresholds.script_k, band);

    rep.prediction = Prediction::undetermined;
    if (e_side == Side::below && k_side == Side::below) {
        if (rep.t12.overall)
            rep.prediction = Prediction::global_scattering;
        else if (rep.t11.overall)
            rep.prediction = Prediction::global;
        else
            rep.note = "below both thresholds but no local-theory hypothesis set passes";
    } else if (e_side == Side::below && k_side == Side::above) {
        if (rep.t14.overall)
            rep.prediction = Prediction::blowup_or_growup;
        else
            rep.note = "above the kinetic threshold but T1.4 hypotheses fail";
    } else if (e_side == Side::boundary || k_side == Side::boundary) {
        rep.note = "data on a threshold boundary: strict inequalities fail";
    } else {
        rep.note = "mass-energy above the threshold: outside the theorems' regime";
    }
    return rep;
}

void attach_observation(ClassificationReport& report, const Outcome& outcome) {
    report.observed = outcome;
    switch (report.prediction) {
    case Prediction::global_scattering:
    case Prediction::global:
        report.consistent = outcome.kind == OutcomeKind::completed;
        break;
    case Prediction::blowup_or_growup:
        report.consistent = outcome.kind == OutcomeKind::blowup_detected;
        break;
    case Prediction::undetermined:
        report.consistent.reset();
        break;
    }
}

ProxyScore scattering_proxy(const Trajectory& traj) {
    if (traj.snapshots.empty())
        throw ValidationError("scattering_proxy: empty trajectory");
    if (traj.outcome.kind != OutcomeKind::completed)
        throw ValidationError("scattering_proxy: trajectory outcome is " +
                              outcome_name(traj.outcome.kind) + ", needs completed");

    double q_max = 0.0;
    for (const auto& s : traj.snapshots)
        q_max = std::max(q_max, s.quartic);
    ProxyScore p;
    if (q_max > 0.0)
        p.score = std::clamp(1.0 - traj.snapshots.back().quartic / q_max, 0.0, 1.0);

    const std::size_t m = traj.snapshots.size();
    const std::size_t start = m / 2;
    std::size_t decays = 0, pairs = 0;
    for (std::size_t i = std::max<std::size_t>(start, 1); i < m; ++i) {
        ++pairs;
        if (traj.snapshots[i].quartic <= traj.snapshots[i - 1].quartic)
            ++decays;
    }
    p.monotone_fraction = pairs > 0 ? static_cast<double>(decays) / pairs : 0.0;
    return p;
}

double fit_coercivity_delta(const Trajectory& traj) {
    double num = 0.0, den = 0.0;
    for (const auto& s : traj.snapshots) {
        num += s.kfun * s.kinetic_h;
        den += s.kinetic_h * s.kinetic_h;
    }
    if (den == 0.0)
        throw ValidationError("fit_coercivity_delta: empty or zero trajectory");
    return -num / den;
}

ExtrasFn make_extras_fn(GridPtr grid, Potential V, double b,
                        std::optional<CutoffProfile> cutoff, std::optional<double> exterior_R) {
    return [grid = std::move(grid), V = std::move(V), b, cutoff,
            exterior_R](double, const RadialField& u) {
        TrajectoryExtras e;
        if (cutoff) {
            e.variance = variance(*grid, u, *cutoff);
            e.virial_first = virial_first(*grid, u, *cutoff);
            e.virial_second = virial_second(*grid, u, V, b, *cutoff);
        }
        if (exterior_R)
            e.exterior_mass = exterior_mass(*grid, u, *exterior_R);
        return e;
    };
}

std::string prediction_name(Prediction p) {
    switch (p) {
    case Prediction::global_scattering: return "global_scattering";
    case Prediction::global: return "global";
    case Prediction::blowup_or_growup: return "blowup_or_growup";
    case Prediction::undetermined: return "undetermined";
    }
    return "?";
}

} // namespace inls
