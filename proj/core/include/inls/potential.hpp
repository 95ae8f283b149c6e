#pragma once

#include "inls/grid.hpp"

#include <optional>
#include <string>
#include <vector>

namespace inls {

enum class PotentialKind { zero, gaussian_repulsive, gaussian_well, softcore };

enum class SignProfile { identically_zero, nonnegative, nonpositive, mixed };

/// Analytic radial potential. V(r) and x.grad V = r V'(r) come from closed
/// forms; there is no sampled-potential kind by design.
class Potential {
  public:
    static Potential zero();
    static Potential gaussian_repulsive(double c); //  c exp(-r^2)
    static Potential gaussian_well(double c);      // -c exp(-r^2)
    static Potential softcore(double c);           //  c / (1+r^2)

    PotentialKind kind() const { return kind_; }
    double amplitude() const { return c_; }

    double eval(double r) const;
    double x_dot_grad_v(double r) const;

    /// Closed-form sign analysis per family (then cross-checked by sampling).
    SignProfile v_sign() const;
    SignProfile xdgv_sign() const;
    SignProfile two_v_plus_xdgv_sign() const;

    /// Power-law tail exponents q with |f| ~ r^{-q}; infinity for
    /// super-polynomial decay. Drives the L^p membership decisions.
    double v_decay_exponent() const;
    double xdgv_decay_exponent() const;

    bool negative_part_is_zero() const { return v_sign() != SignProfile::nonpositive || c_ == 0.0; }

    std::string name() const;

  private:
    Potential(PotentialKind kind, double c);
    PotentialKind kind_;
    double c_;
};

struct KatoResult {
    bool divergent = false;
    double value = 0.0; // meaningful only when !divergent
};

struct KatoOptions {
    double r_max = 64.0;
    std::size_t n = 16384;
};

/// Global Kato norm of |V| via the spherical-average reduction
///   Phi(rho) = 4*pi [ (1/rho) Int_0^rho |V| s^2 ds + Int_rho^inf |V| s ds ],
/// supremum over rho sampled on the mesh plus the rho->0 limit. Divergent when
/// the tail integrand decays slower than s^{-2-eps} over the last decade.
KatoResult kato_norm(const Potential& V, const KatoOptions& opts = {});

/// Kato norm of the negative part V_- only.
KatoResult kato_norm_negative_part(const Potential& V, const KatoOptions& opts = {});

enum class TheoremId { t1_1, t1_2, t1_4 };

enum class CheckStatus { pass, fail, inapplicable };

struct HypothesisCheck {
    std::string name;
    CheckStatus status = CheckStatus::inapplicable;
    double evidence = 0.0;
};

struct HypothesisReport {
    TheoremId theorem = TheoremId::t1_1;
    std::vector<HypothesisCheck> checks;
    bool overall = false;

    const HypothesisCheck* find(const std::string& name) const;
};

/// Evaluates a theorem's assumption set on V. Sign conditions are decided in
/// closed form per family and confirmed by sampling at all grid nodes; a
/// discrepancy throws InternalConsistencyError.
HypothesisReport hypothesis_check(const Potential& V, TheoremId theorem, const RadialGrid& grid);

std::string theorem_name(TheoremId id);
std::string check_status_name(CheckStatus s);

} // namespace inls
