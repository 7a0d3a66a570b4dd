#pragma once

#include <stdexcept>

namespace thlab {

/// Physical and solver parameters of the implicit Euler scheme.
struct SchemeParams {
    double nu = 1.0;     // viscosity
    double kappa = 1.0;  // diffusivity
    double k = 0.01;     // time step

    double eps_nl = 1e-11;   // nonlinear residual tolerance, relative to state scale
    int max_picard = 200;    // iteration cap
    double eps_div = 1e-10;  // divergence tolerance

    // diagnostic switches: disable the buoyancy term e2*theta in the velocity
    // equation and the v2 source in the temperature equation
    bool couple_buoyancy = true;
    bool couple_v2_source = true;

    // fallback policy on Picard non-convergence
    bool allow_k_halving = false;
    double k_floor = 0.0;

    void validate() const {
        if (!(nu > 0.0) || !(kappa > 0.0)) throw std::invalid_argument("SchemeParams: nu, kappa must be positive");
        if (!(k > 0.0)) throw std::invalid_argument("SchemeParams: k must be positive");
        if (!(eps_nl > 0.0)) throw std::invalid_argument("SchemeParams: eps_nl must be positive");
        if (max_picard < 1) throw std::invalid_argument("SchemeParams: max_picard must be >= 1");
    }
};

} // namespace thlab
