#pragma once

#include <cstdint>
#include <span>

#include "snls/noise.hpp"

namespace snls {

/// Phi(1, z, y) together with the rotation angle alpha = sum_j z_j gt_j(|y|^2).
struct FlowResult {
    Complex value;
    double phase;
};

/// Time-one map of dPhi/ds = -i sum_j z_j g_j(Phi), Phi(0) = y.
///
/// |Phi(s)| is constant along the flow, so the vector field is a fixed
/// rotation rate and Phi(1) = y exp(-i alpha) in closed form.
FlowResult marcus_jump(Complex y, std::span<const double> z, const NoiseCoefficients& coeffs);

/// Classical RK4 integration of the same flow on [0, 1]; reference oracle.
Complex marcus_jump_ode(Complex y, std::span<const double> z, const NoiseCoefficients& coeffs, int steps);

/// G(z, y) = Phi(1, z, y) - y.
Complex jump_increment(std::span<const double> z, Complex y, const NoiseCoefficients& coeffs);
/// H(z, y) = G(z, y) + i sum_j z_j g_j(y).
Complex jump_remainder(std::span<const double> z, Complex y, const NoiseCoefficients& coeffs);

/// Constants of the four growth/Lipschitz bounds on G and H for |z| <= 1.
struct JumpBoundConstants {
    double growth_g;     ///< |G(z,y)| <= C1 |z| |y|,  C1 = sqrt(m) L1 e^{sqrt(m) L1}
    double lipschitz_g;  ///< |G(z,y1)-G(z,y2)| <= C2 |z| |y1-y2|,  C2 = C1 (Gronwall, s = 1)
    double growth_h;     ///< |H(z,y)| <= C3 |z|^2 |y|,  C3 = (m/2) max_j sup|gt_j|^2
    double lipschitz_h;  ///< |H(z,y1)-H(z,y2)| <= C4 |z|^2 |y1-y2|,  C4 = m L2 (e^k - 1 - k)/k^2, k = sqrt(m) L1
};

JumpBoundConstants jump_bound_constants(const NoiseCoefficients& coeffs);

struct BoundCheck {
    double max_ratio = 0.0;  ///< max observed lhs / rhs
    std::uint64_t violations = 0;
};

struct JumpBoundReport {
    std::uint64_t trials = 0;
    JumpBoundConstants constants{};
    BoundCheck growth_g;
    BoundCheck lipschitz_g;
    BoundCheck growth_h;
    BoundCheck lipschitz_h;

    std::uint64_t violations() const noexcept {
        return growth_g.violations + lipschitz_g.violations + growth_h.violations + lipschitz_h.violations;
    }
};

/// Randomized check of the four bounds with z uniform in the unit ball of R^m
/// and y, y1, y2 uniform in the disc of the given radius.
JumpBoundReport verify_jump_bounds(const NoiseCoefficients& coeffs, std::uint64_t trials, double radius,
                                   std::uint64_t seed);

struct FlowOracleCheck {
    std::uint64_t trials = 0;
    double max_closed_vs_ode = 0.0;   ///< max |Phi_closed - Phi_ode|
    double max_modulus_drift = 0.0;   ///< max | |Phi_ode| - |y| |
    double max_closed_modulus_drift = 0.0;  ///< max | |Phi_closed| - |y| | / |y|
};

/// Compares the closed-form jump map with RK4 on random y (|y| <= radius)
/// and z in the unit ball.
FlowOracleCheck verify_flow_oracle(const NoiseCoefficients& coeffs, std::uint64_t trials, double radius, int steps,
                                   std::uint64_t seed);

}  // namespace snls
