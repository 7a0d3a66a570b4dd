#include "thlab/bounds_monitor.hpp"

#include <cmath>
#include <sstream>

namespace thlab {

std::string VerdictSeries::to_csv() const {
    std::ostringstream os;
    os << "n,lhs,rhs,margin,pass\n";
    char buf[128];
    for (const VerdictRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%d\n", r.n, r.lhs, r.rhs, r.margin,
                      r.pass ? 1 : 0);
        os << buf;
    }
    return os.str();
}

LedgerVerdicts check_energy_ledgers(const Trajectory& traj, const SlackPolicy& slack) {
    LedgerVerdicts v;
    v.v_energy.name = "v_energy_step";
    v.th_energy.name = "th_energy_step";
    v.v_identity.name = "v_ledger_identity";
    v.th_identity.name = "th_ledger_identity";
    const SchemeParams& p = traj.params;
    for (size_t n = 1; n < traj.reports.size(); ++n) {
        const StepReport& r = traj.reports[n];
        const StepReport& q = traj.reports[n - 1];
        const double eps = slack.eps_ledger(r.eps_used, std::sqrt(r.v_l2sq));
        const double k = r.k_used;

        v.v_energy.add(r.n, r.v_l2sq - q.v_l2sq + r.dv_l2sq + p.nu * k * r.v_h1sq,
                       k / p.nu * r.th_l2sq + eps);
        v.th_energy.add(r.n, r.th_l2sq - q.th_l2sq + r.dth_l2sq + p.kappa * k * r.th_h1sq,
                        k / p.kappa * r.v_l2sq + eps);

        const double lhs_v = r.v_l2sq - q.v_l2sq + r.dv_l2sq + 2.0 * p.nu * k * r.v_h1sq;
        const double rhs_v = p.couple_buoyancy ? 2.0 * k * r.coup_v : 0.0;
        v.v_identity.add(r.n, std::fabs(lhs_v - rhs_v), eps);
        const double lhs_t = r.th_l2sq - q.th_l2sq + r.dth_l2sq + 2.0 * p.kappa * k * r.th_h1sq;
        const double rhs_t = p.couple_v2_source ? 2.0 * k * r.coup_th : 0.0;
        v.th_identity.add(r.n, std::fabs(lhs_t - rhs_t), eps);
    }
    return v;
}

DecoupledDecayVerdicts check_decoupled_decay(const Trajectory& traj, double tol_per_step) {
    DecoupledDecayVerdicts v;
    v.v_factor.name = "decoupled_v_decay_factor";
    v.th_factor.name = "decoupled_th_decay_factor";
    const SchemeParams& p = traj.params;
    for (size_t n = 1; n < traj.reports.size(); ++n) {
        const StepReport& r = traj.reports[n];
        const StepReport& q = traj.reports[n - 1];
        const double k = r.k_used;
        v.v_factor.add(r.n, r.v_l2sq, q.v_l2sq / (1.0 + p.nu * k) + tol_per_step);
        v.th_factor.add(r.n, r.th_l2sq, q.th_l2sq / (1.0 + 2.0 * p.kappa * k) + tol_per_step);
    }
    return v;
}

L2BoundVerdicts check_l2_bounds(const Trajectory& traj, const ConstantsTable& c, const SlackPolicy& slack) {
    L2BoundVerdicts v;
    v.decay_bound.name = "v_l2_apriori_bound";
    v.k1_bound.name = "v_l2_K1_bound";
    const SchemeParams& p = traj.params;
    const Grid& g = traj.grid;
    const double v0sq = traj.reports[0].v_l2sq;
    const double m1sq_nu2 = c.M1 * c.M1 / (p.nu * p.nu);
    double fac = 1.0;
    double eps_cum = 0.0;
    const double mesh = slack.mesh_term(g);
    for (size_t n = 1; n < traj.reports.size(); ++n) {
        const StepReport& r = traj.reports[n];
        fac /= (1.0 + p.nu * r.k_used);
        eps_cum += slack.eps_ledger(r.eps_used, std::sqrt(r.v_l2sq));
        v.decay_bound.add(r.n, r.v_l2sq, fac * v0sq + m1sq_nu2 * (1.0 - fac) + eps_cum + mesh);
        v.k1_bound.add(r.n, std::sqrt(r.v_l2sq), c.K1 + std::sqrt(eps_cum + mesh));
    }
    return v;
}

DissipationVerdict check_dissipation_sums(const Trajectory& traj, const ConstantsTable& c, int i, int m,
                                          const SlackPolicy& slack) {
    if (i < 1 || m < i || m >= static_cast<int>(traj.reports.size()))
        throw std::out_of_range("check_dissipation_sums: need 1 <= i <= m <= horizon");
    DissipationVerdict d;
    double sv = 0.0, st = 0.0, sum_th_l2 = 0.0, sum_v_l2 = 0.0, eps_cum = 0.0;
    for (int n = i; n <= m; ++n) {
        const StepReport& r = traj.reports[n];
        sv += c.nu * r.k_used * r.v_h1sq;
        st += c.kappa * r.k_used * r.th_h1sq;
        sum_th_l2 += r.k_used * r.th_l2sq;
        sum_v_l2 += r.k_used * r.v_l2sq;
        eps_cum += slack.eps_ledger(r.eps_used, std::sqrt(r.v_l2sq));
    }
    const double prev_v = traj.reports[i - 1].v_l2sq;
    const double prev_t = traj.reports[i - 1].th_l2sq;
    d.v_row = {i, sv, prev_v + sum_th_l2 / c.nu + eps_cum, 0.0, false};
    d.v_row.margin = d.v_row.rhs - d.v_row.lhs;
    d.v_row.pass = d.v_row.lhs <= d.v_row.rhs;
    d.th_row = {i, st, prev_t + sum_v_l2 / c.kappa + eps_cum, 0.0, false};
    d.th_row.margin = d.th_row.rhs - d.th_row.lhs;
    d.th_row.pass = d.th_row.lhs <= d.th_row.rhs;
    d.pass = d.v_row.pass && d.th_row.pass;
    return d;
}

H1RecursionVerdicts check_h1_recursions(const Trajectory& traj, const ConstantsTable& c,
                                        const SlackPolicy& slack) {
    H1RecursionVerdicts v;
    v.linear_recursion.name = "v_h1_linear_recursion";
    v.quartic_inequality.name = "v_h1_quartic";
    const SchemeParams& p = traj.params;
    double sum_dv = 0.0, sum_dth = 0.0, eps_cum = 0.0;
    const int N = traj.n_steps();
    for (size_t n = 1; n < traj.reports.size(); ++n) {
        const StepReport& r = traj.reports[n];
        const StepReport& q = traj.reports[n - 1];
        const double eps = slack.eps_ledger(r.eps_used, std::sqrt(r.v_l2sq));
        eps_cum += eps;
        v.linear_recursion.add(r.n, r.v_h1sq,
                               c.K2 * q.v_h1sq + 4.0 * c.M1 * c.M1 / (p.nu * p.nu) + eps);
        const double quart = c.c1 * c.K1 * c.K1 * r.k_used * r.v_h1sq * r.v_h1sq - r.v_h1sq +
                             q.v_h1sq + 2.0 / p.nu * r.k_used * c.M1 * c.M1;
        v.quartic_inequality.add(r.n, -quart, eps); // quart >= -eps
        sum_dv += r.dv_h1sq;
        sum_dth += r.dth_h1sq;
    }
    v.saturated_constants = !std::isfinite(c.K4) || !std::isfinite(c.M3);
    const double k = p.k;
    const double rhs_v = c.K4 * c.K4 + c.c1 * c.K1 * c.K1 * std::pow(c.K4, 4) * k * N +
                         2.0 / p.nu * c.M1 * c.M1 * k * N + eps_cum;
    v.v_increment_sum = {1, sum_dv, rhs_v, rhs_v - sum_dv, sum_dv <= rhs_v};
    const double rhs_t = c.M3 * c.M3 + c.c2 * c.K1 * c.K1 * c.K4 * c.K4 * c.M3 * c.M3 * k * N +
                         2.0 / p.kappa * c.K1 * c.K1 * k * N + eps_cum;
    v.th_increment_sum = {1, sum_dth, rhs_t, rhs_t - sum_dth, sum_dth <= rhs_t};
    return v;
}

UniformH1Verdicts check_uniform_h1(const Trajectory& traj, const ConstantsTable& c,
                                   const SlackPolicy& slack, bool strict) {
    UniformH1Verdicts v;
    v.v_bound.name = "v_h1_uniform_K4";
    v.th_bound.name = "th_h1_uniform_M3";
    v.state_bound.name = "state_h1_uniform_K5";
    v.gate_satisfied = traj.params.k <= c.kappa7_u0;
    v.advisory = !v.gate_satisfied;
    if (strict && !v.gate_satisfied)
        throw std::invalid_argument("check_uniform_h1: strict mode requires k <= kappa7(|u0|_V)");
    const double mesh = std::sqrt(slack.mesh_term(traj.grid));
    double eps_cum = 0.0;
    for (size_t n = 1; n < traj.reports.size(); ++n) {
        const StepReport& r = traj.reports[n];
        eps_cum += slack.eps_ledger(r.eps_used, std::sqrt(r.v_l2sq));
        const double s = std::sqrt(eps_cum) + mesh;
        v.v_bound.add(r.n, std::sqrt(r.v_h1sq), c.K4 + s);
        v.th_bound.add(r.n, std::sqrt(r.th_h1sq), c.M3 + s);
        v.state_bound.add(r.n, std::sqrt(r.v_h1sq + r.th_h1sq), c.K5_u0 + s);
    }
    return v;
}

EntryVerdictH absorbing_entry_H(const Trajectory& traj, const ConstantsTable& c) {
    if (traj.params.k > c.kappa1)
        throw std::invalid_argument("absorbing_entry_H: requires k <= kappa1");
    EntryVerdictH e;
    e.predicted = std::ceil(c.N0_1 + c.N0_2);
    for (const StepReport& r : traj.reports) {
        if (std::sqrt(r.v_l2sq + r.th_l2sq) <= c.rho0) {
            e.entry_step = r.n;
            e.entered = true;
            break;
        }
    }
    e.within_prediction = e.entered && e.entry_step <= static_cast<int>(e.predicted);
    return e;
}

EntryVerdictV v_absorbing_entry_V(const Trajectory& traj, const ConstantsTable& c,
                                  const SlackPolicy& slack) {
    EntryVerdictV e;
    const SchemeParams& p = traj.params;
    // measured entry into the H-ball; rho0 holds from there on for this check
    for (const StepReport& r : traj.reports) {
        if (std::sqrt(r.v_l2sq + r.th_l2sq) <= c.rho0) {
            e.n0_measured = r.n;
            break;
        }
    }
    if (e.n0_measured < 0) return e;
    const int window = static_cast<int>(std::floor(1.0 / p.k));
    e.n1 = e.n0_measured + window;
    e.horizon_sufficient = traj.n_steps() >= e.n1;
    e.r_star = c.R_star;
    e.R1 = c.R1;
    e.R1_saturated = !std::isfinite(c.R1);
    e.pigeonhole_rhs = 2.0 * c.rho0 * c.rho0 * (2.0 + 1.0 / p.nu + 1.0 / p.kappa);

    double eps_cum = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int n = e.n0_measured + 1; n <= std::min(e.n1, traj.n_steps()); ++n) {
        const StepReport& r = traj.reports[n];
        eps_cum += slack.eps_ledger(r.eps_used, std::sqrt(r.v_l2sq));
        const double lhs = p.nu * r.v_h1sq + p.kappa * r.th_h1sq;
        if (lhs < best) {
            best = lhs;
            e.pigeonhole_step = n;
            e.pigeonhole_lhs = lhs;
            e.l_state_h1 = std::sqrt(r.v_h1sq + r.th_h1sq);
        }
    }
    e.pigeonhole_found = e.pigeonhole_step > 0 && e.pigeonhole_lhs <= e.pigeonhole_rhs + eps_cum;
    e.r_star_ok = e.pigeonhole_step > 0 &&
                  e.l_state_h1 * e.l_state_h1 <=
                      e.pigeonhole_rhs * (1.0 / p.nu + 1.0 / p.kappa) + eps_cum;
    if (e.horizon_sufficient) {
        for (int n = e.n1; n <= traj.n_steps(); ++n) {
            const StepReport& r = traj.reports[n];
            if (std::sqrt(r.v_h1sq + r.th_h1sq) <= c.R1) {
                e.entry_step_V = n;
                e.entered_V = true;
                break;
            }
        }
    }
    e.pass = e.horizon_sufficient && e.pigeonhole_found && e.r_star_ok && e.entered_V;
    return e;
}

} // namespace thlab
