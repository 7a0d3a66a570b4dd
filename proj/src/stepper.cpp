#include "thlab/stepper.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "thlab/fft.hpp"
#include "thlab/field_ops.hpp"
#include "thlab/operators.hpp"
#include "thlab/poisson.hpp"

namespace thlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
using Cplx = std::complex<double>;
} // namespace

struct ImplicitStepper::Impl {
    Grid g;
    SchemeParams p;
    Dft dft;
    PressureProjector proj;
    int nh; // stored spectrum size

    // m = 0: u2 vanishes and the system splits into two real tridiagonals
    std::vector<double> u1_diag0, u1_sub0, th_diag0, th_sub0;
    // m >= 1: dense LU of the coupled (u1, u2, theta, q) block
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXcd>> lu;

    mutable std::vector<Cplx> spec_v1, spec_v2, spec_th; // ny(+1) rows * nh
    mutable Eigen::VectorXcd rhs_m, sol_m;

    Impl(const Grid& grid, const SchemeParams& params)
        : g(grid), p(params), dft(grid.nx), proj(grid), nh(grid.nx / 2 + 1) {
        p.validate();
        build_m0();
        build_lu();
        spec_v1.resize(static_cast<size_t>(g.ny) * nh);
        spec_v2.resize(static_cast<size_t>(g.ny + 1) * nh);
        spec_th.resize(static_cast<size_t>(g.ny) * nh);
        const int N = 4 * g.ny - 1;
        rhs_m.resize(N);
        sol_m.resize(N);
    }

    // Thomas factorization of (1 + c*L) for the cell-height operators with
    // ghost reflection; sub[r] holds the elimination multipliers.
    static void factor_tridiag(int ny, double c, double ihy2, std::vector<double>& diag,
                               std::vector<double>& sub) {
        diag.resize(ny);
        sub.assign(ny, 0.0);
        const double off = -c * ihy2;
        for (int j = 0; j < ny; ++j) {
            double d = 1.0 + c * (2.0 + (j == 0 ? 1.0 : 0.0) + (j == ny - 1 ? 1.0 : 0.0)) * ihy2;
            if (j > 0) {
                sub[j] = off / diag[j - 1];
                d -= sub[j] * off;
            }
            diag[j] = d;
        }
    }

    template <typename T>
    static void solve_tridiag(const std::vector<double>& diag, const std::vector<double>& sub,
                              double off, T* x, int n) {
        for (int j = 1; j < n; ++j) x[j] -= sub[j] * x[j - 1];
        x[n - 1] /= diag[n - 1];
        for (int j = n - 2; j >= 0; --j) x[j] = (x[j] - off * x[j + 1]) / diag[j];
    }

    void build_m0() {
        const double ihy2 = 1.0 / (g.hy * g.hy);
        factor_tridiag(g.ny, p.nu * p.k, ihy2, u1_diag0, u1_sub0);
        factor_tridiag(g.ny, p.kappa * p.k, ihy2, th_diag0, th_sub0);
    }

    void build_lu() {
        const int ny = g.ny;
        const int N = 4 * ny - 1;
        const double ihy2 = 1.0 / (g.hy * g.hy);
        const double ihy = 1.0 / g.hy;
        auto iu1 = [&](int j) { return j; };
        auto iu2 = [&](int j) { return ny + (j - 1); };
        auto ith = [&](int j) { return ny + (ny - 1) + j; };
        auto iq = [&](int j) { return 2 * ny + (ny - 1) + j; };

        lu.reserve(nh - 1);
        for (int m = 1; m < nh; ++m) {
            const double beta = 2.0 * kPi * m / g.nx;
            const double lx = (2.0 - 2.0 * std::cos(beta)) / (g.hx * g.hx);
            const Cplx del = (1.0 - std::exp(Cplx(0.0, -beta))) / g.hx; // centers -> x-faces gradient
            const Cplx div = (std::exp(Cplx(0.0, beta)) - 1.0) / g.hx;  // x-faces -> centers divergence
            Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(N, N);

            for (int j = 0; j < ny; ++j) { // u1 momentum rows
                const int r = iu1(j);
                A(r, iu1(j)) = 1.0 + p.nu * p.k * (lx + (2.0 + (j == 0 ? 1.0 : 0.0) + (j == ny - 1 ? 1.0 : 0.0)) * ihy2);
                if (j > 0) A(r, iu1(j - 1)) = -p.nu * p.k * ihy2;
                if (j < ny - 1) A(r, iu1(j + 1)) = -p.nu * p.k * ihy2;
                A(r, iq(j)) = del;
            }
            for (int j = 1; j < ny; ++j) { // u2 momentum rows
                const int r = iu2(j);
                A(r, iu2(j)) = 1.0 + p.nu * p.k * (lx + 2.0 * ihy2);
                if (j - 1 >= 1) A(r, iu2(j - 1)) = -p.nu * p.k * ihy2;
                if (j + 1 <= ny - 1) A(r, iu2(j + 1)) = -p.nu * p.k * ihy2;
                A(r, iq(j)) += ihy;
                A(r, iq(j - 1)) -= ihy;
                if (p.couple_buoyancy) {
                    A(r, ith(j - 1)) -= 0.5 * p.k;
                    A(r, ith(j)) -= 0.5 * p.k;
                }
            }
            for (int j = 0; j < ny; ++j) { // theta rows
                const int r = ith(j);
                A(r, ith(j)) = 1.0 + p.kappa * p.k * (lx + (2.0 + (j == 0 ? 1.0 : 0.0) + (j == ny - 1 ? 1.0 : 0.0)) * ihy2);
                if (j > 0) A(r, ith(j - 1)) = -p.kappa * p.k * ihy2;
                if (j < ny - 1) A(r, ith(j + 1)) = -p.kappa * p.k * ihy2;
                if (p.couple_v2_source) {
                    if (j >= 1) A(r, iu2(j)) -= 0.5 * p.k;
                    if (j + 1 <= ny - 1) A(r, iu2(j + 1)) -= 0.5 * p.k;
                }
            }
            for (int j = 0; j < ny; ++j) { // divergence rows
                const int r = iq(j);
                A(r, iu1(j)) = div;
                if (j + 1 <= ny - 1) A(r, iu2(j + 1)) += ihy;
                if (j >= 1) A(r, iu2(j)) -= ihy;
            }
            lu.emplace_back(A);
        }
    }

    void forward_rows(const VelocityField& v, const ScalarField& th) const {
        for (int j = 0; j < g.ny; ++j) {
            dft.forward_r2c(&v.u1[static_cast<size_t>(j) * g.nx], &spec_v1[static_cast<size_t>(j) * nh]);
            dft.forward_r2c(&th.data[static_cast<size_t>(j) * g.nx], &spec_th[static_cast<size_t>(j) * nh]);
        }
        for (int j = 0; j <= g.ny; ++j)
            dft.forward_r2c(&v.u2[static_cast<size_t>(j) * g.nx], &spec_v2[static_cast<size_t>(j) * nh]);
    }

    void inverse_rows(VelocityField& v, ScalarField& th) const {
        for (int j = 0; j < g.ny; ++j) {
            dft.inverse_c2r(&spec_v1[static_cast<size_t>(j) * nh], &v.u1[static_cast<size_t>(j) * g.nx]);
            dft.inverse_c2r(&spec_th[static_cast<size_t>(j) * nh], &th.data[static_cast<size_t>(j) * g.nx]);
        }
        for (int j = 0; j <= g.ny; ++j)
            dft.inverse_c2r(&spec_v2[static_cast<size_t>(j) * nh], &v.u2[static_cast<size_t>(j) * g.nx]);
        v.enforce_wall_bc();
    }

    /// Solve the linear step with frozen advection fields already folded into
    /// (rhs_v, rhs_th); returns the solution of the coupled saddle system.
    void solve_linear(const VelocityField& rhs_v, const ScalarField& rhs_th, State& out) const {
        const int ny = g.ny;
        forward_rows(rhs_v, rhs_th);

        // m = 0: u2 forced to zero by the constraint, u1 and theta decouple
        {
            std::vector<Cplx> col(ny);
            const double offu = -p.nu * p.k / (g.hy * g.hy);
            for (int j = 0; j < ny; ++j) col[j] = spec_v1[static_cast<size_t>(j) * nh];
            solve_tridiag(u1_diag0, u1_sub0, offu, col.data(), ny);
            for (int j = 0; j < ny; ++j) spec_v1[static_cast<size_t>(j) * nh] = col[j];

            const double offt = -p.kappa * p.k / (g.hy * g.hy);
            for (int j = 0; j < ny; ++j) col[j] = spec_th[static_cast<size_t>(j) * nh];
            solve_tridiag(th_diag0, th_sub0, offt, col.data(), ny);
            for (int j = 0; j < ny; ++j) spec_th[static_cast<size_t>(j) * nh] = col[j];

            for (int j = 0; j <= ny; ++j) spec_v2[static_cast<size_t>(j) * nh] = Cplx(0.0, 0.0);
        }

        for (int m = 1; m < nh; ++m) {
            auto iu1 = [&](int j) { return j; };
            auto iu2 = [&](int j) { return ny + (j - 1); };
            auto ith = [&](int j) { return ny + (ny - 1) + j; };
            for (int j = 0; j < ny; ++j) rhs_m(iu1(j)) = spec_v1[static_cast<size_t>(j) * nh + m];
            for (int j = 1; j < ny; ++j) rhs_m(iu2(j)) = spec_v2[static_cast<size_t>(j) * nh + m];
            for (int j = 0; j < ny; ++j) rhs_m(ith(j)) = spec_th[static_cast<size_t>(j) * nh + m];
            for (int j = 0; j < ny; ++j) rhs_m(2 * ny + (ny - 1) + j) = Cplx(0.0, 0.0);
            sol_m = lu[m - 1].solve(rhs_m);
            if (!sol_m.allFinite()) throw LinearSolveFailure("implicit step: wavenumber solve returned non-finite values");
            for (int j = 0; j < ny; ++j) spec_v1[static_cast<size_t>(j) * nh + m] = sol_m(iu1(j));
            spec_v2[static_cast<size_t>(0) * nh + m] = Cplx(0.0, 0.0);
            for (int j = 1; j < ny; ++j) spec_v2[static_cast<size_t>(j) * nh + m] = sol_m(iu2(j));
            spec_v2[static_cast<size_t>(ny) * nh + m] = Cplx(0.0, 0.0);
            for (int j = 0; j < ny; ++j) spec_th[static_cast<size_t>(j) * nh + m] = sol_m(ith(j));
        }

        inverse_rows(out.v, out.th);
    }
};

ImplicitStepper::ImplicitStepper(const Grid& g, const SchemeParams& p)
    : impl_(std::make_unique<Impl>(g, p)) {}
ImplicitStepper::~ImplicitStepper() = default;
ImplicitStepper::ImplicitStepper(ImplicitStepper&&) noexcept = default;
ImplicitStepper& ImplicitStepper::operator=(ImplicitStepper&&) noexcept = default;

const SchemeParams& ImplicitStepper::params() const { return impl_->p; }
const Grid& ImplicitStepper::grid() const { return impl_->g; }

StepReport state_scalars(const State& u, const Grid& g) {
    StepReport r;
    r.v_l2sq = inner_l2(u.v, u.v, g);
    const double vh = h1_seminorm(u.v, g);
    r.v_h1sq = vh * vh;
    r.th_l2sq = inner_l2(u.th, u.th, g);
    const double th = h1_seminorm(u.th, g);
    r.th_h1sq = th * th;
    double sp = 0.0, sm = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double d = u.th.at(i, j) - g.yc(j);
            const double dp = std::max(d, 0.0), dm = std::max(-(d + 1.0), 0.0);
            sp += dp * dp;
            sm += dm * dm;
        }
    r.trunc_plus_sq = sp * g.hx * g.hy;
    r.trunc_minus_sq = sm * g.hx * g.hy;
    return r;
}

State ImplicitStepper::step(const State& prev, StepReport* report, const State* picard_init) const {
    const Impl& im = *impl_;
    const Grid& g = im.g;
    const SchemeParams& p = im.p;

    const double scale0 = 1.0 + l2_norm(prev, g);
    const double eps = p.eps_nl * scale0;

    // lagged advection fields of the current Picard iterate; after each
    // linear solve they are refreshed from the residual evaluation
    const State& init = picard_init ? *picard_init : prev;
    VelocityField adv_v = skew_advect(init.v, init.v, g);
    ScalarField adv_th = skew_advect(init.v, init.th, g);

    State next(g);
    double res_v = 0.0, res_th = 0.0;
    int iters = 0;
    bool converged = false;

    VelocityField rhs_v(g);
    ScalarField rhs_th(g);
    for (iters = 1; iters <= p.max_picard; ++iters) {
        // rhs = previous state minus the lagged skew advection
        rhs_v = prev.v;
        axpy(-p.k, adv_v, rhs_v);
        rhs_th = prev.th;
        axpy(-p.k, adv_th, rhs_th);

        if (!std::isfinite(l2_norm(rhs_v, g)) || !std::isfinite(l2_norm(rhs_th, g)))
            throw NonConvergenceError(iters, res_v, res_th); // Picard iterate diverged

        im.solve_linear(rhs_v, rhs_th, next);

        // fully implicit residual: the advection mismatch is the only part
        // that survives; the pressure gradient is removed by projection
        VelocityField adv_v_new = skew_advect(next.v, next.v, g);
        ScalarField adv_th_new = skew_advect(next.v, next.th, g);

        VelocityField rv = next.v;
        axpy(-1.0, prev.v, rv);
        axpy(p.nu * p.k, apply_A1(next.v, g), rv);
        axpy(p.k, adv_v_new, rv);
        if (p.couple_buoyancy) axpy(-p.k, theta_to_yfaces(next.th, g), rv);
        res_v = l2_norm(im.proj.project(rv), g);

        ScalarField rt = next.th;
        axpy(-1.0, prev.th, rt);
        axpy(p.kappa * p.k, apply_A2(next.th, g), rt);
        axpy(p.k, adv_th_new, rt);
        if (p.couple_v2_source) axpy(-p.k, u2_to_centers(next.v, g), rt);
        res_th = l2_norm(rt, g);

        adv_v = std::move(adv_v_new);
        adv_th = std::move(adv_th_new);

        if (res_v <= eps && res_th <= eps) {
            converged = true;
            break;
        }
    }
    if (!converged) throw NonConvergenceError(p.max_picard, res_v, res_th);

    const double max_div = max_abs_divergence(next.v, g);
    if (max_div > p.eps_div * scale0)
        throw LinearSolveFailure("implicit step: divergence constraint violated beyond eps_div");

    if (report) {
        StepReport r = state_scalars(next, g);
        r.k_used = p.k;
        r.picard_iters = iters;
        r.residual_v = res_v;
        r.residual_th = res_th;
        r.eps_used = eps;
        r.max_div = max_div;
        State d = diff(next, prev);
        r.dv_l2sq = inner_l2(d.v, d.v, g);
        const double dvh = h1_seminorm(d.v, g);
        r.dv_h1sq = dvh * dvh;
        r.dth_l2sq = inner_l2(d.th, d.th, g);
        const double dth = h1_seminorm(d.th, g);
        r.dth_h1sq = dth * dth;
        r.coup_v = inner_l2(theta_to_yfaces(next.th, g), next.v, g);
        r.coup_th = inner_l2(u2_to_centers(next.v, g), next.th, g);
        *report = r;
    }
    return next;
}

State implicit_euler_step(const State& prev, const SchemeParams& p, const Grid& g,
                          StepReport* report, const State* picard_init) {
    return ImplicitStepper(g, p).step(prev, report, picard_init);
}

Trajectory run_trajectory(const State& u0, const SchemeParams& p, const Grid& g, int n_steps,
                          const TrajectoryOptions& opt) {
    if (n_steps < 0) throw std::invalid_argument("run_trajectory: n_steps must be >= 0");
    Trajectory t;
    t.grid = g;
    t.params = p;
    t.reports.reserve(n_steps + 1);
    StepReport r0 = state_scalars(u0, g);
    r0.n = 0;
    r0.k_used = p.k;
    t.reports.push_back(r0);
    t.samples.push_back(u0);
    t.sample_steps.push_back(0);

    SchemeParams pcur = p;
    std::unique_ptr<ImplicitStepper> stepper = std::make_unique<ImplicitStepper>(g, pcur);
    State cur = u0;
    for (int n = 1; n <= n_steps; ++n) {
        StepReport rep;
        State next(g);
        for (;;) {
            try {
                next = stepper->step(cur, &rep);
                break;
            } catch (const NonConvergenceError& e) {
                if (!pcur.allow_k_halving || pcur.k * 0.5 < pcur.k_floor) {
                    NonConvergenceError err(e.iters, e.residual_v, e.residual_th);
                    err.step = n;
                    throw err;
                }
                pcur.k *= 0.5;
                t.halvings.emplace_back(n, pcur.k);
                stepper = std::make_unique<ImplicitStepper>(g, pcur);
            }
        }
        rep.n = n;
        t.reports.push_back(rep);
        cur = std::move(next);
        const bool keep = (opt.store_stride > 0 && n % opt.store_stride == 0) || n == n_steps;
        if (keep) {
            t.samples.push_back(cur);
            t.sample_steps.push_back(n);
        }
    }
    return t;
}

double uniqueness_timestep_bound(double u0_v_norm, const ConstantsTable& c) {
    if (!(c.cb_hat > 0.0)) throw std::invalid_argument("uniqueness_timestep_bound: constants missing cb_hat");
    const double k7 = c.kappa7_for_gate(u0_v_norm);
    const double K5 = c.k5_for_gate(u0_v_norm);
    const double cb = c.cb_hat;
    const double e2 = 1.0 / (2.0 * (cb / c.nu * K5 * K5 + cb * K5 * K5 + 1.0 / c.kappa));
    const double e3 = 1.0 / (2.0 * (cb * K5 * K5 + cb / c.nu));
    return std::min(k7, std::min(e2, e3));
}

} // namespace thlab
