#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "thlab/config.hpp"
#include "thlab/field.hpp"
#include "thlab/grid.hpp"

namespace thlab {

/// Exit-code contract: 0 all strict monitors pass, 1 monitor failure,
/// 2 usage/config error, 3 solver failure.
enum ExitCode : int { kExitOk = 0, kExitMonitorFail = 1, kExitUsage = 2, kExitSolver = 3 };

State make_initial_state(const RunConfig& cfg, const Grid& g);

/// Run a trajectory with all enabled monitors; write the time series,
/// verdict CSVs, constants export and snapshots under cfg.out_dir.
int cmd_simulate(const RunConfig& cfg, std::ostream& log);

/// Gronwall and truncation-inequality fuzz suites.
int cmd_verify_lemmas(uint64_t seed, int trials, const std::string& out_dir, std::ostream& log);

struct StudyCliOptions {
    std::vector<double> ladder;
    double k_ref = 0.0;
    bool distance_only = false; // allow ladders shorter than the regression minimum
};

int cmd_attractor_study(const RunConfig& cfg, const StudyCliOptions& opts, std::ostream& log);

/// Dump the constants table for the configured initial data.
int cmd_constants(const RunConfig& cfg, std::ostream& out, std::ostream& log);

} // namespace thlab
