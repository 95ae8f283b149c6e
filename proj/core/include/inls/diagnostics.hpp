#pragma once

#include "inls/evolution.hpp"
#include "inls/functionals.hpp"
#include "inls/grid.hpp"
#include "inls/ground_state.hpp"
#include "inls/potential.hpp"

#include <optional>
#include <string>

namespace inls {

enum class CutoffKind { quadratic_capped, exterior_step };

/// Radial cutoff for the localized virial machinery. C^4 by construction
/// from piecewise-polynomial blends solved once per R.
///   quadratic_capped: phi = r^2 for r <= R, constant for r >= 2R, phi'' <= 2.
///   exterior_step:    phi = 0 for r <= R/2, 1 for r >= R, 0 <= phi' <= 4/R.
class CutoffProfile {
  public:
    static CutoffProfile quadratic_capped(double R);
    static CutoffProfile exterior_step(double R);

    CutoffKind kind() const { return kind_; }
    double R() const { return R_; }

    double phi(double r) const;
    double dphi(double r) const;
    double d2phi(double r) const;
    double d3phi(double r) const;
    double d4phi(double r) const;

    /// phi'(r)/r with the r -> 0 limit phi''(0).
    double dphi_over_r(double r) const;

    /// Lap^2 phi = phi'''' + 4 phi'''/r for radial phi.
    double bilaplacian(double r) const;

  private:
    CutoffProfile(CutoffKind kind, double R) : kind_(kind), R_(R) {}
    CutoffKind kind_;
    double R_;
};

/// I = Int phi |u|^2 dx.
double variance(const RadialGrid& grid, const RadialField& u, const CutoffProfile& phi);

/// I' = 2 Im Int phi'(r) (d_r u) conj(u) dx.
double virial_first(const RadialGrid& grid, const RadialField& u, const CutoffProfile& phi);

/// I'' for radial u and radial phi:
///   4 Int (phi'/r)|grad u|^2 + 4 Int (phi'' - phi'/r)|d_r u|^2
///   - 2 Int (phi'/r)(x.grad V)|u|^2 - Int (phi'' + (2+b)/r phi')|x|^{-b}|u|^4
///   - Int Lap^2 phi |u|^2.
/// Equals 8 K(u) exactly when phi = r^2 on the support of u.
double virial_second(const RadialGrid& grid, const RadialField& u, const Potential& V,
                     double b, const CutoffProfile& phi);

/// Int_{r >= R} |u|^2 dx.
double exterior_mass(const RadialGrid& grid, const RadialField& u, double R);

enum class Prediction { global_scattering, global, blowup_or_growup, undetermined };

struct GroundStates {
    GroundState free_state;
    std::optional<GroundState> well_state; // required when V <= 0 with V_- != 0
};

struct ClassificationReport {
    Thresholds thresholds;
    double me = 0.0;  // M^{1-s_c} E^{s_c} of the data
    double kin = 0.0; // mass-kinetic product of the data
    double margin_e = 0.0; // script_e - me
    double margin_k = 0.0; // script_k - kin
    HypothesisReport t11, t12, t14;
    Prediction prediction = Prediction::undetermined;
    std::string note;
    std::optional<Outcome> observed;
    std::optional<bool> consistent;
};

/// Threshold classification of initial data against Theorems 1.1/1.2/1.4.
/// Strict inequalities are resolved with a relative band of 1e-5; data on the
/// boundary (u0 = ground state itself) classify as undetermined.
ClassificationReport classify(const RadialGrid& grid, const RadialField& u0,
                              const Potential& V, double b, const GroundStates& grounds);

/// Attach an observed trajectory outcome to a report and judge consistency.
void attach_observation(ClassificationReport& report, const Outcome& outcome);

struct ProxyScore {
    double score = 0.0;             // 1 - quartic(t_end)/max_t quartic
    double monotone_fraction = 0.0; // fraction of decaying record pairs, last half
};

/// Necessary-condition decay proxy for scattering: the weighted quartic
/// potential energy of a completed run must die out.
ProxyScore scattering_proxy(const Trajectory& traj);

/// Least-squares delta0 >= 0 with K(u(t)) ~ -delta0 ||H^{1/2}u||^2 over records.
double fit_coercivity_delta(const Trajectory& traj);

/// Per-record extras for trajectory CSV columns I, Iprime, Isecond,
/// exterior_mass_R.
ExtrasFn make_extras_fn(GridPtr grid, Potential V, double b,
                        std::optional<CutoffProfile> cutoff, std::optional<double> exterior_R);

std::string prediction_name(Prediction p);

} // namespace inls
