#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "thlab/scheme_params.hpp"

namespace thlab {

struct ConfigError : std::runtime_error {
    int line = 0;
    ConfigError(int ln, const std::string& msg)
        : std::runtime_error("config line " + std::to_string(ln) + ": " + msg), line(ln) {}
};

/// Run description: flat key=value text with '#' comments and
/// "include <path>" support. Fully determines a run; the canonical
/// serialization is hashed into every artifact.
struct RunConfig {
    int nx = 64, ny = 64;
    double nu = 0.1, kappa = 0.1, k = 0.01;
    int n_steps = 500;
    double eps_nl = 1e-11;
    int max_picard = 200;
    double eps_div = 1e-10;

    std::string preset = "conductive-perturbation"; // zero | conductive-perturbation | random | file:<prefix>
    double amplitude = 0.1;
    uint64_t seed = 1;

    bool couple_buoyancy = true;
    bool couple_v2_source = true;

    bool monitors = true;       // evaluate trajectory monitors
    bool strict_gates = false;  // refuse to run when k exceeds kappa1
    double c_h = 0.5;           // mesh slack coefficient (frozen calibration)
    double horizon_T = 2.0;     // auxiliary horizon for the constants table
    double r_window = 0.0;      // 0: use 4*kappa1
    double cb_hat = 0.0;        // 0: measure via estimate_cb
    int cb_samples = 1000;

    int snapshot_stride = 0; // 0: endpoints only
    std::string out_dir = "out";

    SchemeParams scheme_params() const {
        SchemeParams p;
        p.nu = nu;
        p.kappa = kappa;
        p.k = k;
        p.eps_nl = eps_nl;
        p.max_picard = max_picard;
        p.eps_div = eps_div;
        p.couple_buoyancy = couple_buoyancy;
        p.couple_v2_source = couple_v2_source;
        return p;
    }

    void set(const std::string& key, const std::string& value, int line = 0);
    void validate() const;
    std::string canonical() const;   // sorted key=value lines
    std::string config_hash() const; // FNV-1a 64 of the canonical form
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& include_root = ".");

uint64_t fnv1a64(const std::string& s);

} // namespace thlab
