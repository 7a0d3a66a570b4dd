#include <cmath>

#include "doctest.h"
#include "thlab/field_ops.hpp"
#include "thlab/maximum_principle.hpp"
#include "thlab/poisson.hpp"
#include "thlab/sampling.hpp"
#include "thlab/stepper.hpp"

using namespace thlab;

TEST_SUITE("maximum_principle") {

TEST_CASE("truncation algebra is pointwise exact") {
    Grid g = make_grid(16, 16);

    ScalarField c(g);
    for (double& t : c.data) t = -3.0;
    ScalarField cp = truncate_plus(c), cm = truncate_minus(c);
    for (double t : cp.data) CHECK(t == 0.0);
    for (double t : cm.data) CHECK(t == 3.0);

    ScalarField z(g);
    CHECK(l2_norm(truncate_plus(z), g) == 0.0);
    CHECK(l2_norm(truncate_minus(z), g) == 0.0);

    for (int t = 0; t < 50; ++t) {
        Rng rng = Rng::fork(88, t);
        ScalarField f = random_scalar_white(g, rng);
        ScalarField fp = truncate_plus(f), fm = truncate_minus(f);
        for (size_t n = 0; n < f.data.size(); ++n) {
            CHECK(fp.data[n] - fm.data[n] == f.data[n]);
            CHECK(fp.data[n] * fm.data[n] == 0.0);
            CHECK(fp.data[n] + fm.data[n] == std::fabs(f.data[n]));
        }
    }
}

TEST_CASE("truncation inequality: equality case and random pairs") {
    Grid g = make_grid(16, 16);
    Rng rng(11);
    ScalarField f = random_scalar_white(g, rng);
    TruncationCheck eq = truncation_inequality_check(f, f, g);
    CHECK(eq.pass);
    CHECK(eq.lhs_plus == doctest::Approx(eq.rhs_plus).epsilon(1e-12));

    for (int t = 0; t < 1000; ++t) {
        Rng r2 = Rng::fork(12, t);
        ScalarField phi = random_scalar_white(g, r2);
        ScalarField psi = random_scalar_white(g, r2);
        CHECK(truncation_inequality_check(phi, psi, g).pass);
    }

    // phi >= 0, psi <= 0: the gap is exactly 2 (psi_-, phi_+)
    ScalarField phi(g), psi(g);
    Rng r3(13);
    for (double& t : phi.data) t = r3.uniform();
    for (double& t : psi.data) t = -r3.uniform();
    TruncationCheck c = truncation_inequality_check(phi, psi, g);
    const double gap = 2.0 * inner_l2(truncate_minus(psi), truncate_plus(phi), g);
    CHECK(c.lhs_plus - c.rhs_plus == doctest::Approx(gap).epsilon(1e-12));
    CHECK(gap > 0.0);
}

TEST_CASE("decompose_theta: band case, shifted constant, reassembly") {
    Grid g = make_grid(16, 16);
    SchemeParams p;
    p.kappa = 1.0;
    p.k = 0.05;

    // theta inside [x2 - 1, x2]: bar part vanishes
    ScalarField inband(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) inband.at(i, j) = g.yc(j) - 0.5;
    ThetaDecomposition d = decompose_theta(inband, p, g);
    CHECK(l2_norm(d.theta_bar, g) == 0.0);
    CHECK(d.alpha == doctest::Approx(1.1).epsilon(1e-15));
    for (size_t n = 0; n < inband.data.size(); ++n)
        CHECK(d.theta_tilde.data[n] == inband.data[n]);

    // theta = x2 + 5: bar = 5, tilde = x2
    ScalarField above(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) above.at(i, j) = g.yc(j) + 5.0;
    d = decompose_theta(above, p, g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            CHECK(d.theta_bar.at(i, j) == doctest::Approx(5.0).epsilon(1e-14));
            CHECK(d.theta_tilde.at(i, j) == doctest::Approx(g.yc(j)).epsilon(1e-13));
        }

    // random theta: exact reassembly and the band invariant for tilde
    for (int t = 0; t < 50; ++t) {
        Rng rng = Rng::fork(14, t);
        ScalarField th = random_scalar_white(g, rng);
        scale(3.0, th);
        d = decompose_theta(th, p, g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                CHECK(d.theta_tilde.at(i, j) + d.theta_bar.at(i, j) ==
                      doctest::Approx(th.at(i, j)).epsilon(1e-14));
                CHECK(d.theta_tilde.at(i, j) >= g.yc(j) - 1.0 - 1e-14);
                CHECK(d.theta_tilde.at(i, j) <= g.yc(j) + 1e-14);
            }
    }
}

TEST_CASE("band invariance along a coupled run") {
    Grid g = make_grid(32, 32);
    SchemeParams p;
    p.nu = 1.0;
    p.kappa = 1.0;
    p.k = 0.02;
    // start inside the band with a nontrivial velocity
    State u0(g);
    Rng rng(15);
    u0.v = random_velocity_smooth(g, rng);
    scale(0.3 / l2_norm(u0.v, g), u0.v);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            u0.th.at(i, j) = g.yc(j) - 0.5 + 0.4 * std::sin(2.0 * 3.14159265358979 * g.xc(i));

    Trajectory t = run_trajectory(u0, p, g, 50);
    SlackPolicy slack;
    const double mesh = slack.mesh_term(g);
    double eps_cum = 0.0;
    for (size_t n = 1; n < t.reports.size(); ++n) {
        const StepReport& r = t.reports[n];
        eps_cum += slack.eps_ledger(r.eps_used, std::sqrt(r.v_l2sq));
        const double bar_sq = r.trunc_plus_sq + r.trunc_minus_sq;
        CHECK(bar_sq <= eps_cum + mesh);
    }
}

TEST_CASE("decay monitor on a decaying run") {
    Grid g = make_grid(32, 32);
    SchemeParams p;
    p.nu = 1.0;
    p.kappa = 1.0;
    p.k = 0.05;
    State u0(g);
    // positive excess over the band: (theta - x2)_+ = 1 initially
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) u0.th.at(i, j) = g.yc(j) + 1.0;
    Trajectory t = run_trajectory(u0, p, g, 60);
    SlackPolicy slack;
    DecayVerdicts v = decay_monitor(t, p, slack);
    CHECK(v.plus_decay.all_pass);
    CHECK(v.minus_decay.all_pass);
    CHECK(v.m1_bound.all_pass);
    CHECK(v.combined.all_pass);

    // per-step contraction of the truncated norms: each step multiplies the
    // squared norm by at most 1/(1 + 2 kappa k), up to the shared slack
    const double alpha = 1.0 + 2.0 * p.kappa * p.k;
    const double mesh = slack.mesh_term(g);
    for (size_t n = 1; n < t.reports.size(); ++n) {
        const StepReport& r = t.reports[n];
        const StepReport& q = t.reports[n - 1];
        const double eps = slack.eps_ledger(r.eps_used, std::sqrt(r.v_l2sq));
        CHECK(r.trunc_plus_sq <= q.trunc_plus_sq / alpha + eps + mesh);
        CHECK(r.trunc_minus_sq <= q.trunc_minus_sq / alpha + eps + mesh);
    }
}

TEST_CASE("theta absorbing entry: trivial cases") {
    Grid g = make_grid(16, 16);
    SchemeParams p;
    p.nu = 1.0;
    p.kappa = 1.0;
    p.k = 0.05;
    State u0(g); // |theta0| = 0 < 2|Omega|^(1/2): already inside
    Trajectory t = run_trajectory(u0, p, g, 2);
    AbsorbingEntry e = theta_absorbing_entry(t, p);
    CHECK(e.entered);
    CHECK(e.entry_step == 0);
    CHECK(e.predicted == 0.0); // log of a value < 1 clamps to zero
    CHECK(e.within_prediction);

    SchemeParams bad = p;
    bad.k = 1.0; // violates k <= 1/(2 kappa)
    Trajectory t2 = run_trajectory(u0, bad, g, 1);
    CHECK_THROWS_AS((void)theta_absorbing_entry(t2, bad), std::invalid_argument);
}

} // TEST_SUITE
