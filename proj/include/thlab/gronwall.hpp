#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace thlab {

/// Inputs shared by the three discrete Gronwall lemmas. Sequences are
/// materialized arrays indexed by the step n, length >= n_star + 1. The
/// classical variant uses (k, xi0, eta, zeta, n_star); the uniform variant
/// adds the window (n1 = first step of the recursion, n2 = window length) and
/// the window bounds a1..a3; the divided variant uses (n0 = first step,
/// n1 = window length) with the same a1..a3.
struct GronwallInput {
    double k = 0.0;
    double xi0 = 0.0;
    std::vector<double> eta;
    std::vector<double> zeta;
    int n_star = 0;

    int n1 = 1; // uniform: start of recursion; divided: window length
    int n2 = 1; // uniform: window length
    double a1 = 0.0, a2 = 0.0, a3 = 0.0;

    int n0 = 1; // divided variant: first step
};

enum class GronwallVariant { Classical, Uniform, UniformV2 };

struct GronwallHypothesisViolation : std::runtime_error {
    std::string which;  // "eta" | "zeta" | "xi" | "dt"
    int window_start;
    GronwallHypothesisViolation(std::string w, int n)
        : std::runtime_error("gronwall hypothesis violated: " + w + " window at n'=" + std::to_string(n)),
          which(std::move(w)), window_start(n) {}
};

struct HypothesisReport {
    bool pass = true;
    std::string which;
    int window_start = -1;
};

/// Window-sum checks for the uniform lemmas; the xi window is checked only
/// when the sequence is supplied (it is the quantity being bounded). For the
/// divided variant this also enforces k*eta_n < 1/2 from n0 on.
HypothesisReport verify_hypotheses(const GronwallInput& inp, GronwallVariant variant,
                                   std::span<const double> xi = {});

/// Classical discrete Gronwall bound at step n (2 <= n <= n_star):
/// xi0 exp(k sum eta) + k sum zeta_i exp(k tail-sum eta) + k zeta_n.
double gronwall_classical_bound(const GronwallInput& inp, int n);

/// Uniform bound (a3/(k n2) + a2) e^{a1}, valid for n1+n2+1 <= n <= n_star.
/// Throws GronwallHypothesisViolation if the eta/zeta window sums exceed a1/a2.
double gronwall_uniform_bound(const GronwallInput& inp);

/// Divided-recursion variant: (1 - k eta_n) xi_n <= xi_{n-1} + k zeta_n with
/// k eta_n < 1/2; bound (a3/(k n1) + a2) e^{4 a1}, valid for n >= n0+n1.
double gronwall_uniform_v2_bound(const GronwallInput& inp);

} // namespace thlab
