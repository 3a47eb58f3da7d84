#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "snls/errors.hpp"
#include "snls/solver.hpp"
#include "snls/strichartz.hpp"

namespace snls {

/// Malformed configuration. `field` is a dotted key path ("grid.points"),
/// empty for syntax errors; `line` is 1-based, 0 when unknown.
class ConfigError : public Error {
public:
    ConfigError(std::string field, int line, int column, const std::string& message);

    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    std::string field_;
    int line_;
    int column_;
};

struct InitialData {
    enum class Kind { gaussian, plane_wave };
    Kind kind = Kind::gaussian;
    double amplitude = 1.0;
    double width = 1.0;            ///< gaussian: A exp(-|x - c|^2 / width^2) e^{i k.x}
    std::vector<double> center;    ///< gaussian center, one entry per axis
    std::vector<double> momentum;  ///< gaussian carrier wavenumber
    std::vector<int> mode;         ///< plane wave: k = mode * pi / L
};

ComplexField make_initial(const Grid& grid, const InitialData& data);

/// Exact solution of the plane-wave problem (no truncation) at time t:
/// A e^{i(k.x - (|k|^2 + lambda A^{2 sigma}) t)} e^{-i sum_j gt_j(A^2)(S_j(t) - mu_j t)},
/// S_j the j-th component of the mark sum up to t. Empty for non-plane-wave data.
std::optional<ComplexField> plane_wave_exact(const SolverConfig& cfg, const InitialData& data,
                                             const SamplePath& path, double t);

struct PicardOptions {
    double horizon = 0.05;
    double radius = 10.0;
    int iterations = 8;
    double dt = 1e-3;
};

struct ProbeOptions {
    double horizon = 1.0;
    double dt = 1e-2;
    int trials = 100;
    double q = 2.0;
    double r = 2.0;              ///< exponent r of the measured pair
    double source_r = 2.0;       ///< rho of the dual source pair
    int forcing_mode = 1;        ///< deterministic forcing e^{i mode pi x / L}
    MarkModulation modulation = MarkModulation::linear;
    double scale = 1.0;
    double profile_width = 1.0;  ///< xi profile exp(-|x|^2 / width^2)
    bool stability = true;       ///< also rerun with 2N points and 10x trials
};

struct VerifyOptions {
    std::uint64_t jump_trials = 100000;
    double jump_radius = 10.0;
    std::uint64_t flow_trials = 10000;
    double flow_radius = 10.0;
    std::uint64_t lipschitz_pairs = 1000000;
    double lipschitz_radius = 1000.0;
    std::uint64_t cutoff_pairs = 100000;
    std::uint64_t sample_paths = 2000;
};

enum class Observable { mass, lr_norm, y_norm, mixed_norm };
std::string to_string(Observable o);

struct ExperimentConfig {
    SolverConfig solver;
    InitialData initial;
    std::uint64_t seed = 0;
    int paths = 1;
    std::vector<Observable> observables;
    PicardOptions picard;
    ProbeOptions probe;
    VerifyOptions verify;
    /// Canonical JSON (sorted keys, defaults filled, seed override applied).
    std::string canonical;

    /// FNV-1a 64 of the canonical form, as 16 hex digits.
    std::string hash() const;
};

/// Parses a JSON configuration. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text, std::optional<std::uint64_t> seed_override = std::nullopt);
ExperimentConfig load_config(const std::string& path, std::optional<std::uint64_t> seed_override = std::nullopt);

std::string fnv1a_hex(const std::string& data);

}  // namespace snls
