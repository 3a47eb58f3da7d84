#pragma once

#include <optional>
#include <vector>

#include "snls/grid.hpp"
#include "snls/noise.hpp"
#include "snls/propagator.hpp"

namespace snls {

/// Parameters of one pathwise run of
///   du = i[Lap u - lambda |u|^{2 sigma} u] dt + Marcus jump noise.
struct SolverConfig {
    Grid grid;
    double horizon;
    double dt;
    double lambda;  ///< < 0 focusing, > 0 defocusing
    double sigma;   ///< 0 < sigma < 2/n
    NoiseCoefficients coeffs;
    LevyMeasure measure;
    int save_every = 1;
    std::optional<double> truncation_radius;

    /// (p, r) with r = 2 sigma + 2.
    AdmissiblePair pair() const;
    void validate() const;
};

struct StepReport {
    double time;
    double mass;     ///< ||u||_{L^2}
    double lr_norm;  ///< ||u||_{L^r}, r = 2 sigma + 2
    double y_norm;   ///< running Y-norm
    bool jump_applied;
};

/// Everything needed to continue a run bit-for-bit.
struct SolverState {
    ComplexField field;
    double time;
    long base_index;
    YNormTracker tracker;
};

struct EvolveResult {
    Trajectory trajectory;
    std::vector<StepReport> reports;
    SolverState final_state;

    /// max_k | ||u(t_k)|| - ||u_0|| | / ||u_0|| over the reports.
    double max_relative_mass_drift() const;
};

/// One point of the step schedule: a base grid time k dt and/or a jump time.
struct CutPoint {
    double time;
    long base_index;  ///< index of the base time, or -1 for a pure jump time
    const JumpEvent* event;
};

/// Cut points in (state time, horizon] for base times and path events.
/// `until_index` stops the schedule at base time until_index * dt.
std::vector<CutPoint> build_schedule(double horizon, double dt, const SamplePath& path, double start_time,
                                     long start_index, long until_index);
std::vector<CutPoint> build_schedule(const SolverConfig& cfg, const SamplePath& path, double start_time,
                                     long start_index, long until_index);

/// Times of every state visited by the solver (save_every = 1): base times
/// k dt on [0, T] and path event times, the latter repeated for the left limit.
std::vector<double> jump_time_grid(double horizon, double dt, const SamplePath& path);
std::vector<double> solver_time_grid(const SolverConfig& cfg, const SamplePath& path);

/// Strang splitting: half-step modulus-preserving rotation (nonlinearity and
/// compensator drift), exact free step, half-step rotation. Steps are cut at
/// jump times and the Marcus jump map is applied there.
class SplitStepSolver {
public:
    explicit SplitStepSolver(SolverConfig cfg);

    const SolverConfig& config() const noexcept { return cfg_; }
    SolverState initial_state(const ComplexField& u0) const;

    /// Advances `state` to base time until_index * dt (or the horizon when
    /// until_index < 0), applying every path event in (state.time, end].
    /// The returned trajectory starts with the incoming state.
    EvolveResult run(SolverState state, const SamplePath& path, long until_index = -1) const;

private:
    void strang_step(ComplexField& u, double h, double lambda_eff) const;
    void rotate_half(ComplexField& u, double h, double lambda_eff) const;

    SolverConfig cfg_;
    FreePropagator prop_;
    Mark drift_;
};

EvolveResult evolve(const ComplexField& u0, const SolverConfig& cfg, const SamplePath& path);
/// evolve with the nonlinearity weighted by theta_R(running Y-norm).
EvolveResult evolve_truncated(const ComplexField& u0, SolverConfig cfg, const SamplePath& path, double radius);

/// Exact flow of du/dt = -i lambda |u|^{2 sigma} u over dt.
ComplexField nonlinear_phase_step(const ComplexField& f, double dt, double lambda, double sigma);
/// Exact flow of du/dt = i sum_j mu_j g_j(u) over dt.
ComplexField compensator_drift_step(const ComplexField& f, double dt, const NoiseCoefficients& coeffs,
                                    std::span<const double> mu);
/// Pointwise Marcus jump u -> Phi(z, u).
ComplexField apply_jump(const ComplexField& f, std::span<const double> z, const NoiseCoefficients& coeffs);

/// Quintic smoothstep cutoff: 1 on [0, R], 0 on [2R, inf).
/// Lipschitz constant 15/(8R).
double cutoff_theta(double x, double radius);
inline constexpr double kCutoffSlope = 15.0 / 8.0;

/// First snapshot time at which the running Y-norm exceeds k.
std::optional<double> y_exit_time(const Trajectory& traj, const AdmissiblePair& pair, double k);

}  // namespace snls
