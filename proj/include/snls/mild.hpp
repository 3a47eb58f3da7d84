#pragma once

#include <optional>
#include <vector>

#include "snls/propagator.hpp"
#include "snls/solver.hpp"

namespace snls {

// Pathwise evaluation of the mild form
//   u(t) = S_t u0 + Psi1(u)(t) + Psi2(u)(t) + Psi3(u)(t)
// on a trajectory's own time grid. All time integrals use left-endpoint
// quadrature; a repeated time marks a jump, the first entry being u(s-).
// For a finite-activity path the compensated Poisson integral is a finite
// sum over events minus an absolutely convergent compensator.

/// Psi1(t) = -i int_0^t S_{t-s} theta_R(||u||_{Y_s}) lambda |u|^{2 sigma} u ds.
/// Without a radius theta_R is taken as 1.
Trajectory psi1_trajectory(const FreePropagator& prop, const Trajectory& u, const SolverConfig& cfg,
                           std::optional<double> radius);

/// Psi2(t) = sum_{s_i <= t} S_{t-s_i} G(z_i, u(s_i-)) - int_0^t S_{t-s} int G(z, u(s)) nu(dz) ds.
Trajectory psi2_trajectory(const FreePropagator& prop, const Trajectory& u, const SamplePath& path,
                           const SolverConfig& cfg);

/// Psi3(t) = int_0^t S_{t-s} int H(z, u(s)) nu(dz) ds.
Trajectory psi3_trajectory(const FreePropagator& prop, const Trajectory& u, const SolverConfig& cfg);

/// Psi2 at one time, summing every event and compensator term separately
/// (event-ordered); cross-checks the recursive accumulation.
ComplexField psi2_direct(const FreePropagator& prop, const Trajectory& u, const SamplePath& path,
                         const SolverConfig& cfg, double t);

// Single-time accessors; t must be a grid time (the right-continuous entry is used).
ComplexField psi1(const Trajectory& u, const SolverConfig& cfg, std::optional<double> radius, double t);
ComplexField psi2(const Trajectory& u, const SamplePath& path, const SolverConfig& cfg, double t);
ComplexField psi3(const Trajectory& u, const SolverConfig& cfg, double t);

/// S_t u0 on the given time grid.
Trajectory free_on_grid(const FreePropagator& prop, const ComplexField& u0, const std::vector<double>& times);

/// Gamma_R(u) = S_t u0 + Psi1 + Psi2 + Psi3 at every grid time of u.
Trajectory gamma_r(const Trajectory& u, const ComplexField& u0, const SamplePath& path, const SolverConfig& cfg,
                   std::optional<double> radius);

struct PicardIterate {
    Trajectory iterate;
    double y_distance;  ///< ||u^{k} - u^{k-1}||_Y; NaN for the initial iterate
    double ratio;       ///< y_distance / previous y_distance; NaN when undefined
};

/// u^0 = S_t u0, u^{k+1} = Gamma_R(u^k) on the solver grid of (cfg, path).
/// Stops early when an iterate reproduces its predecessor exactly. Throws
/// NotContracting when the distance ratio exceeds 1 three times in a row.
std::vector<PicardIterate> picard(const ComplexField& u0, const SamplePath& path, const SolverConfig& cfg,
                                  std::optional<double> radius, int iterations);

}  // namespace snls
