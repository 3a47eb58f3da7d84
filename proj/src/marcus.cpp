#include "snls/marcus.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace snls {

namespace {

// e^{-i a} - 1 without cancellation for small a.
Complex expm1_rotation(double a) {
    const double s = std::sin(0.5 * a);
    return {-2.0 * s * s, -std::sin(a)};
}

// e^{-i a} - 1 + i a; the imaginary part a - sin a uses a series near zero.
Complex expm1_rotation_second_order(double a) {
    const double s = std::sin(0.5 * a);
    double im;
    if (std::abs(a) < 0.1) {
        const double a2 = a * a;
        im = a * a2 / 6.0 * (1.0 - a2 / 20.0 * (1.0 - a2 / 42.0 * (1.0 - a2 / 72.0)));
    } else {
        im = a - std::sin(a);
    }
    return {-2.0 * s * s, im};
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Mark random_ball_point(std::mt19937_64& rng, int m) {
    Mark z(m);
    double len = 0.0;
    while (len == 0.0) {
        for (auto& v : z) {
            const double u1 = 1.0 - uniform01(rng);
            const double u2 = uniform01(rng);
            v = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
        }
        len = euclidean_norm(z);
    }
    const double r = std::pow(uniform01(rng), 1.0 / m);
    for (auto& v : z) v *= r / len;
    return z;
}

Complex random_disc_point(std::mt19937_64& rng, double radius) {
    const double r = radius * std::sqrt(uniform01(rng));
    return std::polar(r, 2.0 * std::numbers::pi * uniform01(rng));
}

void record(BoundCheck& check, double lhs, double rhs) {
    if (rhs > 0.0) check.max_ratio = std::max(check.max_ratio, lhs / rhs);
    if (lhs > rhs * (1.0 + 1e-12) + 1e-300) ++check.violations;
}

}  // namespace

FlowResult marcus_jump(Complex y, std::span<const double> z, const NoiseCoefficients& coeffs) {
    const double alpha = coeffs.phase(z, y);
    return {y * std::polar(1.0, -alpha), alpha};
}

Complex marcus_jump_ode(Complex y, std::span<const double> z, const NoiseCoefficients& coeffs, int steps) {
    if (steps < 16) throw InvalidArgument("marcus_jump_ode needs at least 16 steps");
    const Complex minus_i{0.0, -1.0};
    auto rhs = [&](Complex phi) { return minus_i * coeffs.phase(z, phi) * phi; };
    const double h = 1.0 / steps;
    Complex phi = y;
    for (int s = 0; s < steps; ++s) {
        const Complex k1 = rhs(phi);
        const Complex k2 = rhs(phi + 0.5 * h * k1);
        const Complex k3 = rhs(phi + 0.5 * h * k2);
        const Complex k4 = rhs(phi + h * k3);
        phi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return phi;
}

Complex jump_increment(std::span<const double> z, Complex y, const NoiseCoefficients& coeffs) {
    return y * expm1_rotation(coeffs.phase(z, y));
}

Complex jump_remainder(std::span<const double> z, Complex y, const NoiseCoefficients& coeffs) {
    return y * expm1_rotation_second_order(coeffs.phase(z, y));
}

JumpBoundConstants jump_bound_constants(const NoiseCoefficients& coeffs) {
    const auto lip = lipschitz_constants(coeffs);
    const double m = coeffs.count();
    const double kappa = std::sqrt(m) * lip.l1;
    const double c1 = kappa * std::exp(kappa);
    double sup_value = 0.0;
    for (int j = 0; j < coeffs.count(); ++j) sup_value = std::max(sup_value, coeffs.bounds(j).sup_value);
    // int_0^1 int_0^a e^{kappa b} db da
    const double double_integral =
        kappa < 1e-6 ? 0.5 + kappa / 6.0 : (std::expm1(kappa) - kappa) / (kappa * kappa);
    return {c1, c1, 0.5 * m * sup_value * sup_value, m * lip.l2 * double_integral};
}

JumpBoundReport verify_jump_bounds(const NoiseCoefficients& coeffs, std::uint64_t trials, double radius,
                                   std::uint64_t seed) {
    JumpBoundReport report;
    report.trials = trials;
    report.constants = jump_bound_constants(coeffs);
    const auto& c = report.constants;
    std::mt19937_64 rng(seed);
    const int m = coeffs.count();
    for (std::uint64_t t = 0; t < trials; ++t) {
        const Mark z = random_ball_point(rng, m);
        const Complex y1 = random_disc_point(rng, radius);
        // Every fourth trial probes nearby points to stress the Lipschitz bounds locally.
        const Complex y2 = (t % 4 == 3) ? y1 + random_disc_point(rng, 1e-3 * radius) : random_disc_point(rng, radius);
        const double zn = euclidean_norm(z);
        const double dy = std::abs(y1 - y2);

        const Complex g1 = jump_increment(z, y1, coeffs);
        const Complex g2 = jump_increment(z, y2, coeffs);
        const Complex h1 = jump_remainder(z, y1, coeffs);
        const Complex h2 = jump_remainder(z, y2, coeffs);

        record(report.growth_g, std::abs(g1), c.growth_g * zn * std::abs(y1));
        record(report.lipschitz_g, std::abs(g1 - g2), c.lipschitz_g * zn * dy);
        record(report.growth_h, std::abs(h1), c.growth_h * zn * zn * std::abs(y1));
        record(report.lipschitz_h, std::abs(h1 - h2), c.lipschitz_h * zn * zn * dy);
    }
    return report;
}

FlowOracleCheck verify_flow_oracle(const NoiseCoefficients& coeffs, std::uint64_t trials, double radius, int steps,
                                   std::uint64_t seed) {
    FlowOracleCheck out;
    out.trials = trials;
    std::mt19937_64 rng(seed);
    for (std::uint64_t t = 0; t < trials; ++t) {
        const Mark z = random_ball_point(rng, coeffs.count());
        const Complex y = random_disc_point(rng, radius);
        const Complex closed = marcus_jump(y, z, coeffs).value;
        const Complex ode = marcus_jump_ode(y, z, coeffs, steps);
        out.max_closed_vs_ode = std::max(out.max_closed_vs_ode, std::abs(closed - ode));
        out.max_modulus_drift = std::max(out.max_modulus_drift, std::abs(std::abs(ode) - std::abs(y)));
        if (std::abs(y) > 0.0)
            out.max_closed_modulus_drift =
                std::max(out.max_closed_modulus_drift, std::abs(std::abs(closed) - std::abs(y)) / std::abs(y));
    }
    return out;
}

}  // namespace snls
