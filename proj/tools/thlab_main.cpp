#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "thlab/commands.hpp"

namespace {

// flag overrides applied on top of an optional config file
struct CliOverrides {
    std::vector<std::pair<std::string, std::string>> kv;
};

thlab::RunConfig load_config(const std::string& config_path, const CliOverrides& ov) {
    thlab::RunConfig cfg;
    if (!config_path.empty()) cfg = thlab::parse_config_file(config_path);
    for (const auto& [k, v] : ov.kv) cfg.set(k, v);
    if (cfg.out_dir == "out") {
        if (const char* root = std::getenv("THLAB_OUT_ROOT")) cfg.out_dir = std::string(root) + "/out";
    }
    cfg.validate();
    return cfg;
}

void add_common_flags(CLI::App* app, std::string& config_path, CliOverrides& ov) {
    app->add_option("--config", config_path, "key=value config file (supports include)");
    app->add_option("--set", ov.kv,
                    "override a config key, e.g. --set nx 128 (repeatable)")
        ->expected(-1)
        ->type_size(2);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"thlab: implicit-Euler Boussinesq laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    CliOverrides ov;

    auto* sim = app.add_subcommand("simulate", "run a monitored trajectory");
    add_common_flags(sim, config_path, ov);

    auto* ver = app.add_subcommand("verify-lemmas", "Gronwall and truncation fuzz suites");
    uint64_t seed = 1;
    int trials = 1000;
    std::string ver_out = "out";
    ver->add_option("--seed", seed, "fuzz seed");
    ver->add_option("--trials", trials, "instances per suite");
    ver->add_option("--out", ver_out, "output directory");

    auto* study = app.add_subcommand("attractor-study", "k -> 0 attractor convergence experiment");
    add_common_flags(study, config_path, ov);
    thlab::StudyCliOptions sopts;
    study->add_option("--ladder", sopts.ladder, "descending time steps")->expected(-1);
    study->add_option("--k-ref", sopts.k_ref, "reference time step (< min(ladder)/4)")->required();
    study->add_flag("--distance-only", sopts.distance_only, "skip slope assertions (short ladders)");

    auto* con = app.add_subcommand("constants", "dump the constants table as JSON");
    add_common_flags(con, config_path, ov);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? thlab::kExitOk : thlab::kExitUsage;
    }

    try {
        if (sim->parsed()) return thlab::cmd_simulate(load_config(config_path, ov), std::cout);
        if (ver->parsed()) return thlab::cmd_verify_lemmas(seed, trials, ver_out, std::cout);
        if (study->parsed()) return thlab::cmd_attractor_study(load_config(config_path, ov), sopts, std::cout);
        if (con->parsed()) return thlab::cmd_constants(load_config(config_path, ov), std::cout, std::cerr);
    } catch (const thlab::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return thlab::kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return thlab::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return thlab::kExitSolver;
    }
    return thlab::kExitUsage;
}
