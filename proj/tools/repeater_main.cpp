#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "rydberg/reporting.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitConfig = 2;

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::string angular = "";
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
};

rydberg::RunConfig resolve_config(const CommonOpts& opts) {
    rydberg::RunConfig cfg = opts.config_path.empty()
                                 ? rydberg::default_run_config()
                                 : rydberg::load_run_config(opts.config_path);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.trials) cfg.sweep.trials = *opts.trials;
    if (opts.angular == "2pi") cfg.angular = rydberg::AngularConvention::TwoPi;
    if (opts.angular == "1") cfg.angular = rydberg::AngularConvention::One;
    cfg.validate();
    return cfg;
}

std::uint64_t require_seed(const rydberg::RunConfig& cfg) {
    if (!cfg.seed) {
        throw rydberg::ConfigError(
            "a seed is mandatory for stochastic subcommands (--seed or config \"seed\")");
    }
    return *cfg.seed;
}

int emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return kExitOk;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write output file: " << out_path << "\n";
        return kExitConfig;
    }
    out << text;
    return kExitOk;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool stochastic) {
    cmd->add_option("--config", opts.config_path, "JSON config file");
    cmd->add_option("--out", opts.out_path, "output file (default: stdout)");
    cmd->add_option("--angular-convention", opts.angular, "MHz conversion: 2pi or 1")
        ->check(CLI::IsMember({"2pi", "1"}));
    if (stochastic) {
        cmd->add_option("--seed", opts.seed, "RNG seed (mandatory unless set in the config)");
        cmd->add_option("--trials", opts.trials, "Monte Carlo trials");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Desk-scale model of a Rydberg-blockade quantum repeater"};
    app.require_subcommand(1);

    CommonOpts verify_opts, error_opts, rate_opts, sim_opts, phys_opts;
    int verify_row = -1;
    bool verify_corrupt = false;
    std::string trajectory_out;

    auto* verify = app.add_subcommand("verify-protocol",
                                      "golden checks for the pulse-level protocols");
    verify->add_option("--row", verify_row, "print a single truth-table row (1-4)")
        ->check(CLI::Range(1, 4));
    verify->add_flag("--corrupt-convention", verify_corrupt,
                     "negative control: flip one pulse sign, the run must fail");
    verify->add_option("--out", verify_opts.out_path, "output file (default: stdout)");

    auto* error_sweep = app.add_subcommand("error-sweep",
                                           "optimized E_loc/E_cnot over the shift grid");
    add_common(error_sweep, error_opts, false);

    auto* rate = app.add_subcommand("rate-sweep",
                                    "analytic + Monte Carlo rate over the distance grid");
    add_common(rate, rate_opts, true);

    auto* simulate = app.add_subcommand("simulate", "single-scenario Monte Carlo report");
    add_common(simulate, sim_opts, true);
    simulate->add_option("--trajectory-out", trajectory_out,
                         "also write the fidelity trajectory CSV");

    auto* physics = app.add_subcommand("physics", "atomic-physics consistency report");
    add_common(physics, phys_opts, false);
    physics->add_option("--format", phys_opts.format, "text or json")
        ->check(CLI::IsMember({"text", "json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (verify->parsed()) {
            rydberg::VerifyOptions opt;
            opt.only_row = verify_row;
            opt.corrupt_convention = verify_corrupt;
            auto report = rydberg::verify_protocol_report(opt);
            int rc = emit(report.text, verify_opts.out_path);
            if (rc != kExitOk) return rc;
            return report.ok ? kExitOk : kExitAssertion;
        }
        if (error_sweep->parsed()) {
            auto cfg = resolve_config(error_opts);
            return emit(rydberg::error_sweep_csv(cfg), error_opts.out_path);
        }
        if (rate->parsed()) {
            auto cfg = resolve_config(rate_opts);
            std::uint64_t seed = require_seed(cfg);
            return emit(rydberg::rate_sweep_csv(cfg, cfg.sweep.trials, seed),
                        rate_opts.out_path);
        }
        if (simulate->parsed()) {
            auto cfg = resolve_config(sim_opts);
            cfg.chain.rng_seed = require_seed(cfg);
            if (!trajectory_out.empty()) {
                int rc = emit(rydberg::trajectory_csv(cfg.chain), trajectory_out);
                if (rc != kExitOk) return rc;
            }
            return emit(rydberg::simulate_report_json(cfg.chain, cfg.sweep.trials),
                        sim_opts.out_path);
        }
        if (physics->parsed()) {
            auto cfg = resolve_config(phys_opts);
            std::string text = phys_opts.format == "json"
                                   ? rydberg::physics_report_json(cfg)
                                   : rydberg::physics_report_text(cfg);
            return emit(text, phys_opts.out_path);
        }
    } catch (const rydberg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAssertion;
    }
    return kExitOk;
}
