#include "thlab/maximum_principle.hpp"

#include <cmath>

#include "thlab/field_ops.hpp"
#include "thlab/stepper.hpp"

namespace thlab {

ScalarField truncate_plus(const ScalarField& phi) {
    ScalarField r = phi;
    for (double& t : r.data) t = std::max(t, 0.0);
    return r;
}

ScalarField truncate_minus(const ScalarField& phi) {
    ScalarField r = phi;
    for (double& t : r.data) t = std::max(-t, 0.0);
    return r;
}

ScalarField theta_minus_x2(const ScalarField& th, const Grid& g) {
    ScalarField r = th;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) r.at(i, j) -= g.yc(j);
    return r;
}

ScalarField theta_minus_x2_plus1(const ScalarField& th, const Grid& g) {
    ScalarField r = th;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) r.at(i, j) += 1.0 - g.yc(j);
    return r;
}

TruncationCheck truncation_inequality_check(const ScalarField& phi, const ScalarField& psi,
                                            const Grid& g) {
    ScalarField pp = truncate_plus(phi), sp = truncate_plus(psi);
    ScalarField pm = truncate_minus(phi), sm = truncate_minus(psi);
    ScalarField d = diff(phi, psi);

    TruncationCheck c;
    c.lhs_plus = 2.0 * inner_l2(d, pp, g);
    ScalarField dp = diff(pp, sp);
    c.rhs_plus = inner_l2(pp, pp, g) - inner_l2(sp, sp, g) + inner_l2(dp, dp, g);

    c.lhs_minus = -2.0 * inner_l2(d, pm, g);
    ScalarField dm = diff(pm, sm);
    c.rhs_minus = inner_l2(pm, pm, g) - inner_l2(sm, sm, g) + inner_l2(dm, dm, g);

    const double tol = 1e-12 * (inner_l2(phi, phi, g) + inner_l2(psi, psi, g) + 1.0);
    c.pass = (c.lhs_plus >= c.rhs_plus - tol) && (c.lhs_minus >= c.rhs_minus - tol);
    return c;
}

ThetaDecomposition decompose_theta(const ScalarField& thn, const SchemeParams& p, const Grid& g) {
    ThetaDecomposition d;
    d.alpha = 1.0 + 2.0 * p.kappa * p.k;
    ScalarField bar = truncate_plus(theta_minus_x2(thn, g));
    axpy(-1.0, truncate_minus(theta_minus_x2_plus1(thn, g)), bar);
    d.theta_bar = bar;
    d.theta_tilde = diff(thn, bar);
    return d;
}

DecayVerdicts decay_monitor(const Trajectory& traj, const SchemeParams& p, const SlackPolicy& slack) {
    DecayVerdicts v;
    v.plus_decay.name = "theta_trunc_plus_decay";
    v.minus_decay.name = "theta_trunc_minus_decay";
    v.m1_bound.name = "theta_l2_M1_bound";
    v.combined.name = "theta_l2_decay_to_band";

    const Grid& g = traj.grid;
    const double mesh = slack.mesh_term(g);
    const double alpha = 1.0 + 2.0 * p.kappa * p.k;
    const double p0 = traj.reports[0].trunc_plus_sq;
    const double m0 = traj.reports[0].trunc_minus_sq;
    const double m1 = 1.0 + std::sqrt(p0) + std::sqrt(m0); // |Omega|^(1/2) = 1

    double decay = 1.0;
    double eps_cum = 0.0;
    for (size_t n = 1; n < traj.reports.size(); ++n) {
        const StepReport& r = traj.reports[n];
        decay /= alpha;
        eps_cum += slack.eps_ledger(r.eps_used, std::sqrt(r.v_l2sq));
        v.plus_decay.add(r.n, r.trunc_plus_sq, decay * p0 + eps_cum + mesh);
        v.minus_decay.add(r.n, r.trunc_minus_sq, decay * m0 + eps_cum + mesh);
        const double th_l2 = std::sqrt(r.th_l2sq);
        v.m1_bound.add(r.n, th_l2, m1 + std::sqrt(eps_cum + mesh));
        v.combined.add(r.n, th_l2,
                       1.0 + (std::sqrt(p0) + std::sqrt(m0)) * std::pow(alpha, -0.5 * r.n) +
                           std::sqrt(eps_cum + mesh));
    }
    return v;
}

AbsorbingEntry theta_absorbing_entry(const Trajectory& traj, const SchemeParams& p) {
    if (p.k > 1.0 / (2.0 * p.kappa))
        throw std::invalid_argument("theta_absorbing_entry: requires k <= 1/(2 kappa)");
    AbsorbingEntry e;
    const double R = std::sqrt(traj.reports[0].th_l2sq);
    const double n01 = (2.0 * R > 1.0) ? 2.0 * std::log(2.0 * R) / (p.kappa * p.k) : 0.0;
    e.predicted = std::ceil(n01);
    for (const StepReport& r : traj.reports) {
        if (std::sqrt(r.th_l2sq) <= 2.0) { // 2 |Omega|^(1/2)
            e.entry_step = r.n;
            e.entered = true;
            break;
        }
    }
    e.within_prediction = e.entered && e.entry_step <= static_cast<int>(e.predicted);
    return e;
}

} // namespace thlab
