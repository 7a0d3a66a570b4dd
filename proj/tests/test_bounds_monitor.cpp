#include <cmath>

#include "doctest.h"
#include "thlab/bounds_monitor.hpp"
#include "thlab/field_ops.hpp"
#include "thlab/poisson.hpp"
#include "thlab/sampling.hpp"

using namespace thlab;

namespace {

struct RunSetup {
    Grid g = make_grid(24, 24);
    SchemeParams p;
    State u0;
    ConstantsTable table;
    Trajectory traj;
};

RunSetup small_run(double amp, int n_steps, double k = 0.05) {
    RunSetup s;
    s.p.nu = 1.0;
    s.p.kappa = 1.0;
    s.p.k = k;
    s.u0 = State(s.g);
    if (amp > 0.0) {
        Rng rng(21);
        s.u0.v = random_velocity_smooth(s.g, rng);
        s.u0.th = random_scalar_smooth(s.g, rng);
        scale(amp / l2_norm(s.u0, s.g), s.u0);
        PressureProjector proj(s.g);
        s.u0.v = proj.project(s.u0.v);
    }
    s.table = build_constants(s.u0, s.p, s.g, 2.0, 2.0, 0.5);
    s.traj = run_trajectory(s.u0, s.p, s.g, n_steps);
    return s;
}

} // namespace

TEST_SUITE("bounds_monitor") {

TEST_CASE("zero trajectory passes every monitor trivially") {
    RunSetup s = small_run(0.0, 10);
    SlackPolicy slack;
    CHECK(check_energy_ledgers(s.traj, slack).all_pass());
    CHECK(check_l2_bounds(s.traj, s.table, slack).all_pass());
    CHECK(check_dissipation_sums(s.traj, s.table, 1, 10, slack).pass);
    CHECK(check_h1_recursions(s.traj, s.table, slack).all_pass());
    CHECK(check_uniform_h1(s.traj, s.table, slack).all_pass());
    EntryVerdictH e = absorbing_entry_H(s.traj, s.table);
    CHECK(e.entry_step == 0);
    CHECK(e.within_prediction);
}

TEST_CASE("small-data run: all a-priori bounds hold") {
    RunSetup s = small_run(0.4, 60);
    SlackPolicy slack;

    L2BoundVerdicts l2 = check_l2_bounds(s.traj, s.table, slack);
    CHECK(l2.decay_bound.all_pass);
    CHECK(l2.k1_bound.all_pass);

    H1RecursionVerdicts h1 = check_h1_recursions(s.traj, s.table, slack);
    CHECK(h1.linear_recursion.all_pass);
    CHECK(h1.quartic_inequality.all_pass);
    CHECK(h1.v_increment_sum.pass);
    CHECK(h1.th_increment_sum.pass);

    UniformH1Verdicts uh = check_uniform_h1(s.traj, s.table, slack);
    CHECK(uh.all_pass()); // K4/M3 typically saturated: bounds hold trivially, flagged advisory
    CHECK(uh.advisory);   // the theory gate sits far below any runnable k

    // dissipation windows of several dyadic lengths
    for (int len = 1; len <= 32; len *= 2)
        for (int i = 1; i + len - 1 <= s.traj.n_steps(); i += len)
            CHECK(check_dissipation_sums(s.traj, s.table, i, i + len - 1, slack).pass);
}

TEST_CASE("single-step dissipation window is the rearranged ledger") {
    RunSetup s = small_run(0.4, 5);
    SlackPolicy slack;
    LedgerVerdicts led = check_energy_ledgers(s.traj, slack);
    DissipationVerdict d = check_dissipation_sums(s.traj, s.table, 3, 3, slack);
    CHECK(d.pass);
    // the window margin exceeds the ledger margin by exactly |v^n|^2 + |dv|^2
    const StepReport& r = s.traj.reports[3];
    const VerdictRow& lrow = led.v_energy.rows[2]; // n = 3
    CHECK(lrow.n == 3);
    CHECK(d.v_row.margin == doctest::Approx(lrow.margin + r.v_l2sq + r.dv_l2sq).epsilon(1e-12));
}

TEST_CASE("absorbing entries: data outside the ball enters within prediction") {
    // R = 6 data at nu = kappa = 1, k = 0.05; rho0 = 2 + sqrt(5) ~ 4.24
    Grid g = make_grid(24, 24);
    SchemeParams p;
    p.nu = 1.0;
    p.kappa = 1.0;
    p.k = 0.05;
    State u0(g);
    Rng rng(31);
    u0.v = random_velocity_smooth(g, rng);
    u0.th = random_scalar_smooth(g, rng);
    scale(6.0 / l2_norm(u0, g), u0);
    PressureProjector proj(g);
    u0.v = proj.project(u0.v);

    ConstantsTable table = build_constants(u0, p, g, 2.0, 2.0, 0.5);
    Trajectory traj = run_trajectory(u0, p, g, 120);

    EntryVerdictH e = absorbing_entry_H(traj, table);
    CHECK(e.entered);
    CHECK(e.entry_step > 0);
    CHECK(e.within_prediction);

    SlackPolicy slack;
    EntryVerdictV ev = v_absorbing_entry_V(traj, table, slack);
    CHECK(ev.n0_measured == e.entry_step);
    CHECK(ev.pigeonhole_found);
    CHECK(ev.r_star_ok);
    CHECK(ev.entered_V); // R1 saturates to +inf here; entry is immediate past N1
    CHECK(ev.pass);
}

TEST_CASE("monitors detect forged violations") {
    RunSetup s = small_run(0.4, 20);
    SlackPolicy slack;

    // inflate a dissipation term: the energy ledger and the window sums must
    // trip, and once the value clears the absolute floor 4 M1^2/nu^2 so must
    // the linear recursion
    Trajectory forged = s.traj;
    forged.reports[5].v_h1sq += 100.0;
    CHECK_FALSE(check_energy_ledgers(forged, slack).v_energy.all_pass);
    CHECK_FALSE(check_dissipation_sums(forged, s.table, 5, 5, slack).pass);
    CHECK_FALSE(check_h1_recursions(forged, s.table, slack).linear_recursion.all_pass);

    // inflate |v^n|^2 at the tail: the a-priori decay bound and K1 must trip
    forged = s.traj;
    forged.reports.back().v_l2sq = 1e6;
    L2BoundVerdicts l2 = check_l2_bounds(forged, s.table, slack);
    CHECK_FALSE(l2.decay_bound.all_pass);
    CHECK_FALSE(l2.k1_bound.all_pass);

    // inflate a truncation norm: the maximum-principle decay must trip
    forged = s.traj;
    forged.reports[7].trunc_plus_sq += 1.0;
    CHECK_FALSE(decay_monitor(forged, s.p, slack).plus_decay.all_pass);

    // break the ledger identity by faking the coupling term
    forged = s.traj;
    forged.reports[3].coup_v += 1.0;
    CHECK_FALSE(check_energy_ledgers(forged, slack).v_identity.all_pass);
}

TEST_CASE("monitors reject malformed windows") {
    RunSetup s = small_run(0.1, 5);
    SlackPolicy slack;
    CHECK_THROWS_AS((void)check_dissipation_sums(s.traj, s.table, 0, 3, slack), std::out_of_range);
    CHECK_THROWS_AS((void)check_dissipation_sums(s.traj, s.table, 2, 9, slack), std::out_of_range);
}

} // TEST_SUITE
