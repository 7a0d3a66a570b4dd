#include <cmath>
#include <cstring>

#include "doctest.h"
#include "thlab/bounds_monitor.hpp"
#include "thlab/field_ops.hpp"
#include "thlab/operators.hpp"
#include "thlab/poisson.hpp"
#include "thlab/sampling.hpp"
#include "thlab/stepper.hpp"

using namespace thlab;

namespace {

State small_data_state(const Grid& g, double amp, uint64_t seed) {
    Rng rng(seed);
    State u(g);
    u.v = random_velocity_smooth(g, rng);
    u.th = random_scalar_smooth(g, rng);
    const double s = l2_norm(u, g);
    if (s > 0.0) scale(amp / s, u);
    return u;
}

} // namespace

TEST_SUITE("stepper") {

TEST_CASE("zero state is an exact fixed point") {
    Grid g = make_grid(16, 16);
    SchemeParams p;
    p.nu = 1.0;
    p.kappa = 1.0;
    p.k = 0.01;
    ImplicitStepper stepper(g, p);
    State u(g);
    for (int n = 0; n < 20; ++n) {
        StepReport rep;
        u = stepper.step(u, &rep);
        CHECK(l2_norm(u, g) <= 1e-12);
        CHECK(rep.picard_iters >= 1);
    }
}

TEST_CASE("solver satisfies the weak equations to tolerance") {
    Grid g = make_grid(32, 32);
    SchemeParams p;
    p.nu = 0.1;
    p.kappa = 0.1;
    p.k = 0.01;
    State u0 = small_data_state(g, 0.5, 42);
    PressureProjector proj(g);
    u0.v = proj.project(u0.v);

    StepReport rep;
    ImplicitStepper stepper(g, p);
    State u1 = stepper.step(u0, &rep);

    CHECK(rep.residual_v <= rep.eps_used);
    CHECK(rep.residual_th <= rep.eps_used);
    CHECK(rep.max_div <= p.eps_div);

    // independent weak-form residual: test against a batch of random
    // admissible fields; |r(w)| <= residual_norm * |w|
    for (int t = 0; t < 20; ++t) {
        Rng rng = Rng::fork(99, t);
        VelocityField w = random_velocity_smooth(g, rng);
        const double lhs = inner_l2(u1.v, w, g) - inner_l2(u0.v, w, g) +
                           p.nu * p.k * inner_l2(apply_A1(u1.v, g), w, g) +
                           p.k * b1(u1.v, u1.v, w, g) -
                           p.k * inner_l2(theta_to_yfaces(u1.th, g), w, g);
        CHECK(std::fabs(lhs) <= 2.0 * rep.eps_used * l2_norm(w, g) + 1e-13);

        ScalarField ph = random_scalar_smooth(g, rng);
        const double lts = inner_l2(u1.th, ph, g) - inner_l2(u0.th, ph, g) +
                           p.kappa * p.k * inner_l2(apply_A2(u1.th, g), ph, g) +
                           p.k * b2(u1.v, u1.th, ph, g) -
                           p.k * inner_l2(u2_to_centers(u1.v, g), ph, g);
        CHECK(std::fabs(lts) <= 2.0 * rep.eps_used * l2_norm(ph, g) + 1e-13);
    }
}

TEST_CASE("coupling signs: buoyancy lifts warm fluid, rising fluid warms theta") {
    Grid g = make_grid(32, 32);
    SchemeParams p;
    p.nu = 1.0;
    p.kappa = 1.0;
    p.k = 0.05;
    ImplicitStepper stepper(g, p);

    // theta = sin(2 pi x1) sin(pi x2), v = 0: the step must produce upward
    // flow under the warm half and downward flow under the cold half
    State warm(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            warm.th.at(i, j) = std::sin(2.0 * 3.14159265358979 * g.xc(i)) * std::sin(3.14159265358979 * g.yc(j));
    State s1 = stepper.step(warm);
    CHECK(inner_l2(u2_to_centers(s1.v, g), warm.th, g) > 1e-6);

    // hydrostatic balance: constant theta is a pure gradient forcing and
    // produces no flow at all
    State hydro(g);
    for (double& t : hydro.th.data) t = 2.0;
    State s2 = stepper.step(hydro);
    CHECK(l2_norm(s2.v, g) <= 1e-10);

    // a roll with theta = 0 must tilt theta toward the rising side
    State roll(g);
    Rng rng(71);
    roll.v = random_velocity_smooth(g, rng);
    scale(0.5 / l2_norm(roll.v, g), roll.v);
    State s3 = stepper.step(roll);
    CHECK(inner_l2(u2_to_centers(roll.v, g), s3.th, g) > 0.0);
}

TEST_CASE("stepper on non-power-of-two grids") {
    for (auto [nx, ny] : {std::pair{12, 10}, std::pair{9, 6}}) {
        Grid g = make_grid(nx, ny);
        SchemeParams p;
        p.nu = 0.5;
        p.kappa = 0.5;
        p.k = 0.02;
        State u0 = small_data_state(g, 0.3, 77);
        PressureProjector proj(g);
        u0.v = proj.project(u0.v);
        Trajectory t = run_trajectory(u0, p, g, 10);
        SlackPolicy slack;
        CHECK(check_energy_ledgers(t, slack).all_pass());
        CHECK(t.reports.back().max_div <= p.eps_div);
    }
}

TEST_CASE("per-step energy ledger holds on a short run") {
    Grid g = make_grid(32, 32);
    SchemeParams p;
    p.nu = 1.0;
    p.kappa = 1.0;
    p.k = 0.01;
    State u0 = small_data_state(g, 0.3, 7);
    PressureProjector proj(g);
    u0.v = proj.project(u0.v);

    Trajectory t = run_trajectory(u0, p, g, 25);
    SlackPolicy slack;
    LedgerVerdicts led = check_energy_ledgers(t, slack);
    CHECK(led.v_energy.all_pass);
    CHECK(led.th_energy.all_pass);
    CHECK(led.v_identity.all_pass);
    CHECK(led.th_identity.all_pass);
}

TEST_CASE("uniqueness: two Picard initial guesses agree below the gate") {
    Grid g = make_grid(24, 24);
    SchemeParams p;
    p.nu = 1.0;
    p.kappa = 1.0;
    p.k = 0.005;
    State u0 = small_data_state(g, 0.3, 17);
    PressureProjector proj(g);
    u0.v = proj.project(u0.v);

    ImplicitStepper stepper(g, p);
    StepReport r1, r2;
    State a = stepper.step(u0, &r1);
    State zero(g);
    State b = stepper.step(u0, &r2, &zero);
    CHECK(l2_norm(diff(a, b), g) <= 1e-10);
}

TEST_CASE("run_trajectory with zero steps returns the initial state only") {
    Grid g = make_grid(8, 8);
    SchemeParams p;
    State u0 = small_data_state(g, 0.2, 2);
    Trajectory t = run_trajectory(u0, p, g, 0);
    CHECK(t.reports.size() == 1);
    CHECK(t.samples.size() == 1);
    CHECK(t.samples[0].th.data == u0.th.data);
    CHECK_THROWS_AS((void)run_trajectory(u0, p, g, -1), std::invalid_argument);
}

TEST_CASE("determinism: identical inputs give bitwise-identical trajectories") {
    Grid g = make_grid(16, 16);
    SchemeParams p;
    p.nu = 0.5;
    p.kappa = 0.5;
    p.k = 0.02;
    State u0 = small_data_state(g, 0.4, 3);
    Trajectory t1 = run_trajectory(u0, p, g, 10);
    Trajectory t2 = run_trajectory(u0, p, g, 10);
    const State& a = t1.final_state();
    const State& b = t2.final_state();
    CHECK(std::memcmp(a.v.u1.data(), b.v.u1.data(), a.v.u1.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(a.v.u2.data(), b.v.u2.data(), a.v.u2.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(a.th.data.data(), b.th.data.data(), a.th.data.size() * sizeof(double)) == 0);
}

TEST_CASE("semigroup property: n+m steps equal n then m, bitwise") {
    Grid g = make_grid(16, 16);
    SchemeParams p;
    p.nu = 0.5;
    p.kappa = 0.5;
    p.k = 0.02;
    State u0 = small_data_state(g, 0.4, 5);
    Trajectory t8 = run_trajectory(u0, p, g, 8);
    Trajectory t3 = run_trajectory(u0, p, g, 3);
    Trajectory t5 = run_trajectory(t3.final_state(), p, g, 5);
    const State& a = t8.final_state();
    const State& b = t5.final_state();
    CHECK(std::memcmp(a.v.u1.data(), b.v.u1.data(), a.v.u1.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(a.th.data.data(), b.th.data.data(), a.th.data.size() * sizeof(double)) == 0);
}

TEST_CASE("geometric L2 decay with coupling disabled") {
    Grid g = make_grid(24, 24);
    SchemeParams p;
    p.nu = 0.5;
    p.kappa = 0.5;
    p.k = 0.05;
    p.couple_buoyancy = false;
    p.couple_v2_source = false;
    State u0 = small_data_state(g, 1.0, 11);
    PressureProjector proj(g);
    u0.v = proj.project(u0.v);

    Trajectory t = run_trajectory(u0, p, g, 40);
    DecoupledDecayVerdicts d = check_decoupled_decay(t);
    CHECK(d.v_factor.all_pass);
    CHECK(d.th_factor.all_pass);
}

TEST_CASE("non-convergence reporting and k-halving fallback") {
    Grid g = make_grid(16, 16);
    SchemeParams p;
    p.nu = 0.01;
    p.kappa = 0.01;
    p.k = 5.0; // extreme step to defeat the fixed-point iteration
    p.max_picard = 2;
    State u0 = small_data_state(g, 5.0, 23);
    PressureProjector proj(g);
    u0.v = proj.project(u0.v);

    CHECK_THROWS_AS((void)run_trajectory(u0, p, g, 1), NonConvergenceError);

    SchemeParams ph = p;
    ph.allow_k_halving = true;
    ph.k_floor = 1e-4;
    ph.max_picard = 60;
    Trajectory t = run_trajectory(u0, ph, g, 1);
    CHECK(!t.halvings.empty());
}

TEST_CASE("uniqueness_timestep_bound formula") {
    ConstantsTable c;
    c.nu = 1.0;
    c.kappa = 1.0;
    c.cb_hat = 1.0;
    c.kappa7_override = 1.0;
    c.K5_override = 1.0;
    // all constants one: min{kappa7, 1/6, 1/4}
    CHECK(uniqueness_timestep_bound(1.0, c) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

    // monotone decreasing in K5; goes to 0+ as K5 -> inf
    c.K5_override = 2.0;
    const double b2v = uniqueness_timestep_bound(1.0, c);
    CHECK(b2v < 1.0 / 6.0);
    c.K5_override = std::numeric_limits<double>::infinity();
    CHECK(uniqueness_timestep_bound(1.0, c) == 0.0);

    // doubling nu (others fixed) does not decrease the bound
    c.K5_override = 2.0;
    ConstantsTable c2 = c;
    c2.nu = 2.0;
    CHECK(uniqueness_timestep_bound(1.0, c2) >= b2v);
}

} // TEST_SUITE
