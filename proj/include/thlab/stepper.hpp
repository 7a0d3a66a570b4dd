#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "thlab/constants.hpp"
#include "thlab/field.hpp"
#include "thlab/grid.hpp"
#include "thlab/scheme_params.hpp"

namespace thlab {

/// Per-step diagnostics: solver counters plus the scalar energy ledger that
/// all trajectory monitors consume.
struct StepReport {
    int n = 0;
    double k_used = 0.0;
    int picard_iters = 0;
    double residual_v = 0.0;
    double residual_th = 0.0;
    double eps_used = 0.0;
    double max_div = 0.0;

    // state scalars at step n
    double v_l2sq = 0.0, v_h1sq = 0.0, th_l2sq = 0.0, th_h1sq = 0.0;
    // increments against step n-1
    double dv_l2sq = 0.0, dv_h1sq = 0.0, dth_l2sq = 0.0, dth_h1sq = 0.0;
    // coupling terms (e2 theta^n, v^n) and (v2^n, theta^n)
    double coup_v = 0.0, coup_th = 0.0;
    // truncation norms |(theta^n - x2)_+|^2 and |(theta^n - x2 + 1)_-|^2
    double trunc_plus_sq = 0.0, trunc_minus_sq = 0.0;
};

struct NonConvergenceError : std::runtime_error {
    int step = -1;
    int iters = 0;
    double residual_v = 0.0, residual_th = 0.0;
    NonConvergenceError(int it, double rv, double rt)
        : std::runtime_error("implicit step: Picard iteration did not reach the residual tolerance"),
          iters(it), residual_v(rv), residual_th(rt) {}
};

struct LinearSolveFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One fully implicit Euler step solved by Picard iteration with the
/// advecting velocity (and advected fields) lagged; the linear coupled
/// velocity-temperature-pressure system is solved directly per x1-wavenumber
/// after a DFT in x1. Deterministic and reusable across steps.
class ImplicitStepper {
public:
    ImplicitStepper(const Grid& g, const SchemeParams& p);
    ~ImplicitStepper();
    ImplicitStepper(ImplicitStepper&&) noexcept;
    ImplicitStepper& operator=(ImplicitStepper&&) noexcept;

    const SchemeParams& params() const;
    const Grid& grid() const;

    /// Advance prev by one step. picard_init defaults to prev; the report is
    /// optional. Throws NonConvergenceError / LinearSolveFailure.
    State step(const State& prev, StepReport* report = nullptr,
               const State* picard_init = nullptr) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Convenience single-step call; builds a stepper internally.
State implicit_euler_step(const State& prev, const SchemeParams& p, const Grid& g,
                          StepReport* report = nullptr, const State* picard_init = nullptr);

struct TrajectoryOptions {
    int store_stride = 0; // 0: keep only the initial and final state
};

struct Trajectory {
    Grid grid;
    SchemeParams params;
    std::vector<StepReport> reports;  // reports[0] holds the initial scalars
    std::vector<State> samples;       // stored per stride (always step 0 and final)
    std::vector<int> sample_steps;
    std::vector<std::pair<int, double>> halvings; // (step, new k) when enabled

    const State& initial() const { return samples.front(); }
    const State& final_state() const { return samples.back(); }
    int n_steps() const { return static_cast<int>(reports.size()) - 1; }
};

/// March n_steps implicit Euler steps; scalars of every step are recorded,
/// full states per TrajectoryOptions::store_stride. Deterministic.
Trajectory run_trajectory(const State& u0, const SchemeParams& p, const Grid& g, int n_steps,
                          const TrajectoryOptions& opt = {});

/// The uniqueness time-step gate: min of the three admissibility expressions,
/// with cb_hat standing in for both the named and the generic constant. Uses
/// the table's gate overrides when set (heuristic mode, flagged in reports).
double uniqueness_timestep_bound(double u0_v_norm, const ConstantsTable& constants);

/// Scalar ledger of a state, used for the n = 0 report row.
StepReport state_scalars(const State& u, const Grid& g);

} // namespace thlab
