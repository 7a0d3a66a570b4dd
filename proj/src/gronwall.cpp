#include "thlab/gronwall.hpp"

#include <cmath>

namespace thlab {

namespace {

double window_sum(std::span<const double> s, int from, int to) {
    double t = 0.0;
    for (int n = from; n <= to; ++n) t += s[static_cast<size_t>(n)];
    return t;
}

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

} // namespace

HypothesisReport verify_hypotheses(const GronwallInput& inp, GronwallVariant variant,
                                   std::span<const double> xi) {
    HypothesisReport rep;
    if (variant == GronwallVariant::Classical) return rep; // no window hypotheses

    const bool v2 = (variant == GronwallVariant::UniformV2);
    const int start = v2 ? inp.n0 : inp.n1;
    const int len = v2 ? inp.n1 : inp.n2;
    const int last_start = inp.n_star - len;

    if (v2) {
        for (int n = inp.n0; n <= inp.n_star; ++n) {
            if (inp.k * inp.eta[static_cast<size_t>(n)] >= 0.5) {
                rep.pass = false;
                rep.which = "dt";
                rep.window_start = n;
                return rep;
            }
        }
    }
    for (int np = start; np <= last_start; ++np) {
        if (inp.k * window_sum(inp.eta, np, np + len) > inp.a1) {
            rep.pass = false;
            rep.which = "eta";
            rep.window_start = np;
            return rep;
        }
        if (inp.k * window_sum(inp.zeta, np, np + len) > inp.a2) {
            rep.pass = false;
            rep.which = "zeta";
            rep.window_start = np;
            return rep;
        }
        if (!xi.empty() && inp.k * window_sum(xi, np, np + len) > inp.a3) {
            rep.pass = false;
            rep.which = "xi";
            rep.window_start = np;
            return rep;
        }
    }
    return rep;
}

double gronwall_classical_bound(const GronwallInput& inp, int n) {
    require(inp.k > 0.0, "gronwall: k must be positive");
    if (n < 2 || n > inp.n_star) throw std::out_of_range("gronwall_classical_bound: need 2 <= n <= n_star");
    require(static_cast<int>(inp.eta.size()) > inp.n_star && static_cast<int>(inp.zeta.size()) > inp.n_star,
            "gronwall: sequences must cover the horizon");

    double bound = inp.xi0 * std::exp(inp.k * window_sum(inp.eta, 0, n - 1));
    for (int i = 1; i <= n - 1; ++i)
        bound += inp.k * inp.zeta[static_cast<size_t>(i)] *
                 std::exp(inp.k * window_sum(inp.eta, i, n - 1));
    bound += inp.k * inp.zeta[static_cast<size_t>(n)];
    return bound;
}

double gronwall_uniform_bound(const GronwallInput& inp) {
    require(inp.k > 0.0, "gronwall: k must be positive");
    require(inp.n1 >= 1 && inp.n2 >= 1, "gronwall_uniform_bound: n1, n2 must be positive");
    require(inp.n1 < inp.n_star && inp.n1 + inp.n2 + 1 <= inp.n_star,
            "gronwall_uniform_bound: need n1 < n_star and n1+n2+1 <= n_star");
    require(static_cast<int>(inp.eta.size()) > inp.n_star && static_cast<int>(inp.zeta.size()) > inp.n_star,
            "gronwall: sequences must cover the horizon");
    HypothesisReport rep = verify_hypotheses(inp, GronwallVariant::Uniform);
    if (!rep.pass) throw GronwallHypothesisViolation(rep.which, rep.window_start);
    return (inp.a3 / (inp.k * inp.n2) + inp.a2) * std::exp(inp.a1);
}

double gronwall_uniform_v2_bound(const GronwallInput& inp) {
    require(inp.k > 0.0, "gronwall: k must be positive");
    require(inp.n0 >= 1 && inp.n1 >= 1, "gronwall_uniform_v2_bound: n0, n1 must be positive");
    require(static_cast<int>(inp.eta.size()) > inp.n_star && static_cast<int>(inp.zeta.size()) > inp.n_star,
            "gronwall: sequences must cover the horizon");
    HypothesisReport rep = verify_hypotheses(inp, GronwallVariant::UniformV2);
    if (!rep.pass) throw GronwallHypothesisViolation(rep.which, rep.window_start);
    return (inp.a3 / (inp.k * inp.n1) + inp.a2) * std::exp(4.0 * inp.a1);
}

} // namespace thlab
