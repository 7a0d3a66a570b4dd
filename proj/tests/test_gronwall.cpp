#include <cmath>
#include <vector>

#include "doctest.h"
#include "thlab/gronwall.hpp"
#include "thlab/sampling.hpp"

using namespace thlab;

namespace {

// equality-recursion oracles: run the lemma's recursion with equality and
// demand the returned bound dominates everywhere it claims to

std::vector<double> classical_equality_xi(const GronwallInput& inp) {
    std::vector<double> xi(static_cast<size_t>(inp.n_star) + 1, 0.0);
    xi[0] = inp.xi0;
    for (int n = 1; n <= inp.n_star; ++n)
        xi[n] = xi[n - 1] * (1.0 + inp.k * inp.eta[n - 1]) + inp.k * inp.zeta[n];
    return xi;
}

double max_window_sum(const std::vector<double>& s, double k, int start, int len, int horizon) {
    double best = 0.0;
    for (int np = start; np + len <= horizon; ++np) {
        double t = 0.0;
        for (int n = np; n <= np + len; ++n) t += s[static_cast<size_t>(n)];
        best = std::max(best, k * t);
    }
    return best;
}

GronwallInput random_classical_instance(uint64_t idx) {
    Rng rng = Rng::fork(101, idx);
    GronwallInput inp;
    inp.k = 1e-3 + 0.5 * rng.uniform();
    inp.n_star = 2 + static_cast<int>(rng.next() % 60);
    inp.xi0 = 10.0 * rng.uniform();
    inp.eta.resize(inp.n_star + 1);
    inp.zeta.resize(inp.n_star + 1);
    const double es = 5.0 * rng.uniform(), zs = 5.0 * rng.uniform();
    for (auto& t : inp.eta) t = es * rng.uniform();
    for (auto& t : inp.zeta) t = zs * rng.uniform();
    return inp;
}

} // namespace

TEST_SUITE("gronwall") {

TEST_CASE("classical bound: closed forms") {
    GronwallInput inp;
    inp.k = 0.1;
    inp.n_star = 10;
    inp.xi0 = 2.0;
    inp.eta.assign(11, 0.0);
    inp.zeta.assign(11, 0.0);
    for (int n = 0; n <= 10; ++n) inp.zeta[n] = 0.5 * n;

    // eta == 0: xi0 + k sum_{i=1}^{n-1} zeta_i + k zeta_n
    for (int n = 2; n <= 10; ++n) {
        double expect = inp.xi0;
        for (int i = 1; i <= n - 1; ++i) expect += inp.k * inp.zeta[i];
        expect += inp.k * inp.zeta[n];
        CHECK(gronwall_classical_bound(inp, n) == doctest::Approx(expect).epsilon(1e-14));
    }

    // zeta == 0, eta == c: xi0 * exp(k c n)
    const double c = 0.7;
    inp.eta.assign(11, c);
    inp.zeta.assign(11, 0.0);
    for (int n = 2; n <= 10; ++n)
        CHECK(gronwall_classical_bound(inp, n) ==
              doctest::Approx(inp.xi0 * std::exp(inp.k * c * n)).epsilon(1e-13));

    CHECK_THROWS_AS(gronwall_classical_bound(inp, 1), std::out_of_range);
    CHECK_THROWS_AS(gronwall_classical_bound(inp, 11), std::out_of_range);
}

TEST_CASE("classical bound: equality when eta == 0 and recursion is tight") {
    GronwallInput inp = random_classical_instance(7);
    inp.eta.assign(inp.eta.size(), 0.0);
    auto xi = classical_equality_xi(inp);
    for (int n = 2; n <= inp.n_star; ++n)
        CHECK(xi[n] == doctest::Approx(gronwall_classical_bound(inp, n)).epsilon(1e-12));
}

TEST_CASE("classical oracle dominance: 1000 randomized instances") {
    for (uint64_t t = 0; t < 1000; ++t) {
        GronwallInput inp = random_classical_instance(t);
        auto xi = classical_equality_xi(inp);
        for (int n = 2; n <= inp.n_star; ++n) {
            const double bound = gronwall_classical_bound(inp, n);
            CHECK(xi[n] <= bound * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("uniform bound: closed form and constant-sequence floor") {
    GronwallInput inp;
    inp.k = 0.05;
    inp.n1 = 2;
    inp.n2 = 4;
    inp.n_star = 12;
    inp.eta.assign(13, 0.0);
    inp.zeta.assign(13, 0.0);
    inp.a1 = 0.0;
    inp.a2 = 1.5;
    inp.a3 = 3.0;
    CHECK(gronwall_uniform_bound(inp) ==
          doctest::Approx(inp.a3 / (inp.k * inp.n2) + inp.a2).epsilon(1e-14));

    // constant xi == x with eta = zeta = 0: bound >= x
    const double x = 2.25;
    std::vector<double> xi(13, x);
    inp.a3 = inp.k * (inp.n2 + 1) * x; // tight window sum
    CHECK(verify_hypotheses(inp, GronwallVariant::Uniform, xi).pass);
    CHECK(gronwall_uniform_bound(inp) >= x);
}

TEST_CASE("uniform oracle dominance: 1000 randomized instances") {
    for (uint64_t t = 0; t < 1000; ++t) {
        Rng rng = Rng::fork(202, t);
        GronwallInput inp;
        inp.k = 1e-3 + 0.4 * rng.uniform();
        inp.n1 = 1 + static_cast<int>(rng.next() % 8);
        inp.n2 = 1 + static_cast<int>(rng.next() % 12);
        inp.n_star = inp.n1 + inp.n2 + 1 + static_cast<int>(rng.next() % 40);
        inp.eta.resize(inp.n_star + 1);
        inp.zeta.resize(inp.n_star + 1);
        const double es = 2.0 * rng.uniform(), zs = 4.0 * rng.uniform();
        for (auto& v : inp.eta) v = es * rng.uniform();
        for (auto& v : inp.zeta) v = zs * rng.uniform();

        // equality recursion from a random start at n1-1
        std::vector<double> xi(inp.n_star + 1, 0.0);
        const double x_start = 5.0 * rng.uniform();
        for (int n = 0; n <= inp.n1 - 1; ++n) xi[n] = x_start;
        for (int n = inp.n1; n <= inp.n_star; ++n)
            xi[n] = xi[n - 1] * (1.0 + inp.k * inp.eta[n - 1]) + inp.k * inp.zeta[n];

        inp.a1 = max_window_sum(inp.eta, inp.k, inp.n1, inp.n2, inp.n_star);
        inp.a2 = max_window_sum(inp.zeta, inp.k, inp.n1, inp.n2, inp.n_star);
        inp.a3 = max_window_sum(xi, inp.k, inp.n1, inp.n2, inp.n_star);

        CHECK(verify_hypotheses(inp, GronwallVariant::Uniform, xi).pass);
        const double bound = gronwall_uniform_bound(inp);
        for (int n = inp.n1 + inp.n2 + 1; n <= inp.n_star; ++n)
            CHECK(xi[n] <= bound * (1.0 + 1e-12));
    }
}

TEST_CASE("divided-variant bound: closed form, dt gate, oracle dominance") {
    GronwallInput inp;
    inp.k = 0.1;
    inp.n0 = 1;
    inp.n1 = 5;
    inp.n_star = 20;
    inp.eta.assign(21, 0.0);
    inp.zeta.assign(21, 0.0);
    inp.a1 = 0.0;
    inp.a2 = 2.0;
    inp.a3 = 1.0;
    CHECK(gronwall_uniform_v2_bound(inp) ==
          doctest::Approx(inp.a3 / (inp.k * inp.n1) + inp.a2).epsilon(1e-14));

    // k*eta = 0.5 exactly violates (dt)
    inp.eta.assign(21, 0.5 / inp.k);
    CHECK_THROWS_AS(gronwall_uniform_v2_bound(inp), GronwallHypothesisViolation);

    // k*eta = 0.49 is admissible and the equality recursion stays below
    for (uint64_t t = 0; t < 1000; ++t) {
        Rng rng = Rng::fork(303, t);
        GronwallInput gi;
        gi.k = 1e-3 + 0.3 * rng.uniform();
        gi.n0 = 1 + static_cast<int>(rng.next() % 5);
        gi.n1 = 1 + static_cast<int>(rng.next() % 10);
        gi.n_star = gi.n0 + gi.n1 + 1 + static_cast<int>(rng.next() % 40);
        gi.eta.resize(gi.n_star + 1);
        gi.zeta.resize(gi.n_star + 1);
        const double emax = (t % 7 == 0) ? 0.49 : 0.45 * rng.uniform();
        for (auto& v : gi.eta) v = emax / gi.k * rng.uniform();
        if (t % 7 == 0) gi.eta.assign(gi.eta.size(), 0.49 / gi.k);
        const double zs = 3.0 * rng.uniform();
        for (auto& v : gi.zeta) v = zs * rng.uniform();

        std::vector<double> xi(gi.n_star + 1, 0.0);
        const double x_start = 4.0 * rng.uniform();
        for (int n = 0; n <= gi.n0 - 1; ++n) xi[n] = x_start;
        for (int n = gi.n0; n <= gi.n_star; ++n)
            xi[n] = (xi[n - 1] + gi.k * gi.zeta[n]) / (1.0 - gi.k * gi.eta[n]);

        gi.a1 = max_window_sum(gi.eta, gi.k, gi.n0, gi.n1, gi.n_star);
        gi.a2 = max_window_sum(gi.zeta, gi.k, gi.n0, gi.n1, gi.n_star);
        gi.a3 = max_window_sum(xi, gi.k, gi.n0, gi.n1, gi.n_star);

        CHECK(verify_hypotheses(gi, GronwallVariant::UniformV2, xi).pass);
        const double bound = gronwall_uniform_v2_bound(gi);
        for (int n = gi.n0 + gi.n1; n <= gi.n_star; ++n)
            CHECK(xi[n] <= bound * (1.0 + 1e-12));
    }
}

TEST_CASE("verify_hypotheses: pass, spike failure, rescaled fuzz") {
    GronwallInput inp;
    inp.k = 0.1;
    inp.n1 = 2;
    inp.n2 = 3;
    inp.n_star = 15;
    inp.eta.assign(16, 0.0);
    inp.zeta.assign(16, 0.0);
    inp.a1 = 1.0;
    inp.a2 = 1.0;
    inp.a3 = 1.0;
    CHECK(verify_hypotheses(inp, GronwallVariant::Uniform).pass);

    // a spike in one window is reported with its window index
    inp.eta[7] = 100.0;
    auto rep = verify_hypotheses(inp, GronwallVariant::Uniform);
    CHECK_FALSE(rep.pass);
    CHECK(rep.which == "eta");
    CHECK(rep.window_start <= 7);
    CHECK(rep.window_start + inp.n2 >= 7);

    // generator that rescales sums below the a's always passes
    for (uint64_t t = 0; t < 200; ++t) {
        Rng rng = Rng::fork(404, t);
        GronwallInput gi;
        gi.k = 0.05 + 0.2 * rng.uniform();
        gi.n1 = 1 + static_cast<int>(rng.next() % 5);
        gi.n2 = 1 + static_cast<int>(rng.next() % 8);
        gi.n_star = gi.n1 + gi.n2 + 1 + static_cast<int>(rng.next() % 20);
        gi.eta.resize(gi.n_star + 1);
        gi.zeta.resize(gi.n_star + 1);
        for (auto& v : gi.eta) v = rng.uniform();
        for (auto& v : gi.zeta) v = rng.uniform();
        gi.a1 = 0.5 + rng.uniform();
        gi.a2 = 0.5 + rng.uniform();
        const double se = max_window_sum(gi.eta, gi.k, gi.n1, gi.n2, gi.n_star);
        const double sz = max_window_sum(gi.zeta, gi.k, gi.n1, gi.n2, gi.n_star);
        if (se > 0.0)
            for (auto& v : gi.eta) v *= 0.99 * gi.a1 / se;
        if (sz > 0.0)
            for (auto& v : gi.zeta) v *= 0.99 * gi.a2 / sz;
        CHECK(verify_hypotheses(gi, GronwallVariant::Uniform).pass);
    }
}

TEST_CASE("bounds are monotone in their inputs") {
    GronwallInput inp = random_classical_instance(55);
    const int n = inp.n_star;
    const double base = gronwall_classical_bound(inp, n);
    GronwallInput up = inp;
    up.xi0 *= 1.5;
    CHECK(gronwall_classical_bound(up, n) >= base);
    up = inp;
    up.eta[n / 2] += 1.0;
    CHECK(gronwall_classical_bound(up, n) >= base);
    up = inp;
    up.zeta[n / 2] += 1.0;
    CHECK(gronwall_classical_bound(up, n) >= base);

    GronwallInput ui;
    ui.k = 0.1;
    ui.n1 = 2;
    ui.n2 = 3;
    ui.n_star = 10;
    ui.eta.assign(11, 0.1);
    ui.zeta.assign(11, 0.1);
    ui.a1 = 1.0;
    ui.a2 = 1.0;
    ui.a3 = 1.0;
    const double ub = gronwall_uniform_bound(ui);
    GronwallInput ui2 = ui;
    ui2.a2 += 0.5;
    CHECK(gronwall_uniform_bound(ui2) >= ub);
    ui2 = ui;
    ui2.a3 += 0.5;
    CHECK(gronwall_uniform_bound(ui2) >= ub);
    ui2 = ui;
    ui2.a1 += 0.5;
    CHECK(gronwall_uniform_bound(ui2) >= ub);
}

} // TEST_SUITE
