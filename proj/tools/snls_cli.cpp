#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "snls/experiment.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;

struct Options {
    std::string config;
    std::string config_flag;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "out";
    int threads = 0;
    bool force = false;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("config_file", o.config, "JSON configuration file");
    cmd->add_option("--config", o.config_flag, "JSON configuration file (alternative to the positional form)");
    cmd->add_option("--seed", o.seed, "override run.seed");
    cmd->add_option("--out-dir", o.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--threads", o.threads, "worker threads (0: hardware concurrency)");
    cmd->add_flag("--force", o.force, "overwrite outputs produced by a different config");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Marcus-noise stochastic NLS experiments"};
    app.set_version_flag("--version", snls::kVersion);
    app.require_subcommand(1);
    Options opt;
    auto* simulate = app.add_subcommand("simulate", "evolve one path; trajectory and report CSVs");
    auto* ensemble = app.add_subcommand("ensemble", "evolve an ensemble of paths; summary JSON and per-path CSV");
    auto* probe = app.add_subcommand("probe-strichartz", "deterministic and stochastic Strichartz probes");
    auto* picard = app.add_subcommand("picard", "Picard iteration of the truncated mild form");
    auto* verify = app.add_subcommand("verify-lemmas", "randomized certification of the jump-map and noise bounds");
    for (auto* cmd : {simulate, ensemble, probe, picard, verify}) add_common(cmd, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    const std::string path = !opt.config_flag.empty() ? opt.config_flag : opt.config;
    if (path.empty()) {
        std::cerr << "error: a configuration file is required (positional or --config)\n";
        return kConfigError;
    }
    if (!opt.config.empty() && !opt.config_flag.empty() && opt.config != opt.config_flag) {
        std::cerr << "error: conflicting configuration files given\n";
        return kConfigError;
    }

    try {
        const snls::ExperimentConfig cfg = snls::load_config(path, opt.seed);
        const snls::OutputDirectory out(opt.out_dir, cfg.hash(), opt.force);
        const int threads = opt.threads > 0 ? opt.threads : std::max(1u, std::thread::hardware_concurrency());

        if (simulate->parsed()) {
            std::cout << snls::simulate_command(cfg, out).report;
        } else if (ensemble->parsed()) {
            const auto s = snls::ensemble_command(cfg, threads, out);
            std::cout << snls::summary_json(s);
            if (s.failures > 0) return kNumericalFailure;
        } else if (probe->parsed()) {
            std::cout << snls::probe_command(cfg, out);
        } else if (picard->parsed()) {
            const auto iterates = snls::picard_command(cfg, out);
            std::cout << "picard: " << iterates.size() - 1 << " iterations, final y_distance "
                      << snls::format_number(iterates.back().y_distance) << "\n";
        } else if (verify->parsed()) {
            const auto r = snls::verify_command(cfg, out);
            std::cout << r.report;
            if (r.violations > 0) {
                std::cerr << "verify-lemmas: " << r.violations << " violation(s)\n";
                return kViolation;
            }
        }
    } catch (const snls::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kConfigError;
    } catch (const snls::OutputConflict& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const snls::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    }
    return kOk;
}
