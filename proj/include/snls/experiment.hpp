#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "snls/config.hpp"
#include "snls/mild.hpp"

namespace snls {

inline constexpr const char* kVersion = "0.1.0";

struct PathResult {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    bool ok = true;
    std::string error;
    std::size_t jumps = 0;
    double max_mass_drift = 0.0;
    std::map<Observable, double> terminal;
};

struct ObservableStats {
    double mean = 0.0;
    double variance = 0.0;  ///< unbiased; 0 for a single path
    double min = 0.0;
    double max = 0.0;
};

struct EnsembleSummary {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<Observable> observables;
    std::vector<PathResult> paths;  ///< ordered by path index
    std::map<Observable, ObservableStats> stats;  ///< over successful paths
    std::size_t failures = 0;
    double max_mass_drift = 0.0;
};

/// Samples and evolves cfg.paths independent paths (path i uses
/// stream_seed(cfg.seed, i)) on `threads` workers. Failures are recorded
/// per path; results do not depend on the thread count.
EnsembleSummary run_ensemble(const ExperimentConfig& cfg, int threads);

std::string summary_json(const EnsembleSummary& s);
std::string paths_csv(const EnsembleSummary& s);

std::string reports_csv(const std::vector<StepReport>& reports, const std::string& hash);
std::string trajectory_csv(const Trajectory& traj, const std::string& hash);
std::string events_csv(const SamplePath& path, int mark_dimension, const std::string& hash);

/// Output directory guarded by a manifest holding the config hash.
class OutputDirectory {
public:
    /// Throws OutputConflict when the manifest records a different hash and !force.
    OutputDirectory(std::filesystem::path dir, const std::string& hash, bool force);
    void write(const std::string& name, const std::string& content) const;
    const std::filesystem::path& path() const noexcept { return dir_; }

private:
    std::filesystem::path dir_;
};

class OutputConflict : public Error {
public:
    using Error::Error;
};

// Subcommand bodies. Each writes into `out` and returns its JSON report.
struct SimulateResult {
    EvolveResult run;
    SamplePath path;
    std::string report;
};
SimulateResult simulate_command(const ExperimentConfig& cfg, const OutputDirectory& out);
EnsembleSummary ensemble_command(const ExperimentConfig& cfg, int threads, const OutputDirectory& out);
std::string probe_command(const ExperimentConfig& cfg, const OutputDirectory& out);
std::vector<PicardIterate> picard_command(const ExperimentConfig& cfg, const OutputDirectory& out);

struct VerifyResult {
    std::uint64_t violations = 0;
    std::string report;
};
VerifyResult verify_command(const ExperimentConfig& cfg, const OutputDirectory& out);

/// Shortest round-trip decimal form used in every emitted file.
std::string format_number(double x);

}  // namespace snls
