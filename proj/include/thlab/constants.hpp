#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "thlab/field.hpp"
#include "thlab/grid.hpp"
#include "thlab/scheme_params.hpp"

namespace thlab {

struct ConstantEntry {
    std::string name;
    double value;
    std::string provenance;
};

/// Every named constant of the stability and attractor estimates, computed
/// from its defining formula. Values can saturate: the theory constants grow
/// doubly exponentially, so an entry may overflow to +inf (and a reciprocal
/// gate underflow to the smallest normal double). Saturated entries keep
/// their provenance and are flagged; monitors that depend on them then run
/// in advisory mode.
struct ConstantsTable {
    // frozen inputs
    double nu = 1.0, kappa = 1.0, k = 0.01;
    double cb_hat = 0.0; // measured Ladyzhenskaya constant
    double r = 2.0;      // auxiliary window length (>= 4*kappa1)
    double T = 2.0;      // auxiliary horizon for the theta bounds
    double omega_sqrt = 1.0;
    double v0_l2 = 0.0, v0_h1 = 0.0, th0_l2 = 0.0, th0_h1 = 0.0;
    double u0_l2 = 0.0, u0_h1 = 0.0;
    double trunc_plus0 = 0.0, trunc_minus0 = 0.0; // |(theta0 - x2)_+|, |(theta0 - x2 + 1)_-|

    // derived values (evaluation order matters; see build_constants)
    double M1 = 0.0, K1 = 0.0, K2 = 0.0, c1 = 0.0, c2 = 0.0;
    double kappa1 = 0.0, kappa2 = 0.0;
    double K3_first = 0.0, K3_second = 0.0, kappa3_first = 0.0, kappa3_second = 0.0;
    double rho0 = 0.0, rho1 = 0.0;
    double kappa4 = 0.0, K4 = 0.0, kappa5 = 0.0, M2 = 0.0, M3 = 0.0, kappa6 = 0.0;
    double kappa7_u0 = 0.0, K5_u0 = 0.0;
    double R_star = 0.0, R1 = 0.0, kappa8 = 0.0, kappa0 = 0.0;
    double T0 = 0.0, N0_1 = 0.0, N0_2 = 0.0, N0 = 0.0, N1 = 0.0;

    // heuristic overrides for the uniqueness gate; NaN = unset. When the
    // theory gate saturates below the representable range, a measured
    // trajectory bound can be substituted here (flagged in reports).
    double K5_override = std::nan("");
    double kappa7_override = std::nan("");

    // ---- the constants as functions (for re-evaluation and composition) ----
    double M1_of(double th_l2_bound) const;                // majorized via |(th-x2)_+| <= |th| + |x2|
    double K1_of(double v_l2, double M1v) const;
    double K2_of(double K1v) const;
    double K3_of(double v_h1_init, double K1b, double M1b, double horizon) const;
    double kappa3_of(double K1b, double K3v) const;
    double rho1_of(double rv) const;
    double T0_of(double R) const; // absorbing-ball entry time; k-independent
    double kappa7_of(double s) const;
    double K5_of(double s) const;
    double k5_for_gate(double s) const {
        return std::isnan(K5_override) ? K5_of(s) : K5_override;
    }
    double kappa7_for_gate(double s) const {
        return std::isnan(kappa7_override) ? kappa7_of(s) : kappa7_override;
    }

    std::vector<ConstantEntry> entries() const;
    std::string to_json(const std::string& config_hash = "") const;
};

/// Compute every entry from the initial state and parameters. cb_hat must be
/// supplied (measured by estimate_cb or set by config). Throws if r < 4*kappa1.
ConstantsTable build_constants(const State& u0, const SchemeParams& p, const Grid& g,
                               double horizon_T, double r, double cb_hat);

} // namespace thlab
