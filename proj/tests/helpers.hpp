#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "snls/config.hpp"
#include "snls/grid.hpp"
#include "snls/noise.hpp"
#include "snls/solver.hpp"

namespace testing {

using snls::Complex;

inline snls::ComplexField random_field(const snls::Grid& g, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, scale);
    snls::ComplexField f(g);
    for (auto& v : f.values()) v = {n(rng), n(rng)};
    return f;
}

inline snls::ComplexField mode_field(const snls::Grid& g, int mode, double amplitude = 1.0) {
    snls::ComplexField f(g);
    const int N = g.points_per_axis();
    for (std::size_t i = 0; i < g.size(); ++i)
        f[i] = amplitude * std::polar(1.0, mode * std::numbers::pi / g.half_length() * g.coordinate(static_cast<int>(i % N)));
    return f;
}

inline snls::ComplexField gaussian(const snls::Grid& g, double width = 1.0) {
    snls::InitialData d;
    d.width = width;
    d.center.assign(g.dimension(), 0.0);
    d.momentum.assign(g.dimension(), 0.0);
    return snls::make_initial(g, d);
}

inline snls::LevyMeasure symmetric_atoms(double z = 0.5, double rate = 2.5) {
    return snls::LevyMeasure(1, snls::FiniteAtoms{{{{z}, rate}, {{-z}, rate}}});
}

inline snls::SolverConfig config(const snls::Grid& g, double horizon, double dt, double lambda,
                                 snls::NoiseCoefficients coeffs, snls::LevyMeasure measure, int save_every = 1) {
    return snls::SolverConfig{g, horizon, dt, lambda, 1.0, std::move(coeffs), std::move(measure), save_every,
                              std::nullopt};
}

inline snls::SamplePath empty_path(double horizon) { return snls::SamplePath{0.0, horizon, 0, {}}; }

inline snls::SamplePath manual_path(double horizon, std::vector<snls::JumpEvent> events) {
    return snls::SamplePath{0.0, horizon, 0, std::move(events)};
}

// Plain O(N^2) DFT, independent of FFTW.
inline std::vector<Complex> naive_dft(const std::vector<Complex>& x) {
    const std::size_t n = x.size();
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
            out[k] += x[j] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j * k % n) / n);
    return out;
}

inline double max_abs_diff(const snls::ComplexField& a, const snls::ComplexField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace testing
