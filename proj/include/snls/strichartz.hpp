#pragma once

#include <cstdint>

#include "snls/grid.hpp"
#include "snls/noise.hpp"
#include "snls/propagator.hpp"

namespace snls {

struct InhomogeneousRatios {
    double sup_l2;  ///< ||Phi_f||_{L^inf L^2} / ||f||_{L^gamma' L^rho'}
    double lp_lr;   ///< ||Phi_f||_{L^p L^r}   / ||f||_{L^gamma' L^rho'}
};

/// Duhamel response of `forcing` restricted to [0, T] measured against the
/// dual norm built from `source` = (gamma, rho). Throws on zero forcing.
InhomogeneousRatios det_inhomogeneous_probe(const Trajectory& forcing, const AdmissiblePair& pair,
                                            const AdmissiblePair& source, double horizon);

enum class MarkModulation {
    linear,    ///< xi(s, z) = scale * z_1 * profile
    quadratic  ///< xi(s, z) = scale * |z|^2 * profile
};

/// Deterministic integrand xi(s, z) = scale * w(z) * profile; predictable by construction.
struct NoiseProfile {
    ComplexField profile;
    MarkModulation modulation = MarkModulation::linear;
    double scale = 1.0;

    double weight(std::span<const double> z) const;
    /// int w(z) nu(dz)
    double mean_weight(const LevyMeasure& measure) const;
    /// int |w(z)|^k nu(dz)
    double abs_weight_moment(const LevyMeasure& measure, double k) const;
};

/// I(t) = int_0^t int S_{t-s} xi(s, z) Ntilde(ds, dz) on the jump-aware grid
/// of [0, T] with base step dt (events summed exactly, compensator by
/// left-endpoint quadrature).
Trajectory stochastic_convolution(const FreePropagator& prop, const SamplePath& path, const LevyMeasure& measure,
                                  const NoiseProfile& xi, double horizon, double dt);

struct StochasticProbeReport {
    AdmissiblePair pair;
    double q;
    int trials;
    double lhs;            ///< Monte Carlo mean of ||I||^q_{L^p(0,T;L^r)}
    double lhs_stderr;
    double rhs_quadratic;  ///< (int_0^T int ||xi||_2^2 nu ds)^{q/2}
    double rhs_qth;        ///< int_0^T int ||xi||_2^q nu ds
    double ratio;          ///< lhs / (rhs_quadratic + rhs_qth); 0 when both sides vanish
    double terminal_mean_square;  ///< Monte Carlo mean of ||I(T)||_2^2
    double terminal_mean_square_stderr;
    double isometry_prediction;   ///< T int ||xi||_2^2 nu(dz)
    double dt;
    double horizon;
};

StochasticProbeReport stochastic_strichartz_probe(const LevyMeasure& measure, const NoiseProfile& xi,
                                                  const AdmissiblePair& pair, double q, int trials,
                                                  std::uint64_t seed, double horizon, double dt);

}  // namespace snls
