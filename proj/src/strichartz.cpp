#include "snls/strichartz.hpp"

#include <cmath>

#include "snls/solver.hpp"

namespace snls {

InhomogeneousRatios det_inhomogeneous_probe(const Trajectory& forcing, const AdmissiblePair& pair,
                                            const AdmissiblePair& source, double horizon) {
    const Trajectory f = forcing.prefix(horizon);
    if (f.empty()) throw InvalidArgument("empty forcing");
    const double dual = mixed_norm(f, conjugate_exponent(source.p), conjugate_exponent(source.r));
    if (!(dual > 0.0)) throw InvalidArgument("zero forcing");
    FreePropagator prop(f.grid());
    const Trajectory response = duhamel_trajectory(prop, f);
    return {mixed_norm(response, kInfinity, 2.0) / dual, mixed_norm(response, pair) / dual};
}

double NoiseProfile::weight(std::span<const double> z) const {
    if (modulation == MarkModulation::linear) return scale * z[0];
    const double r = euclidean_norm(z);
    return scale * r * r;
}

double NoiseProfile::mean_weight(const LevyMeasure& measure) const {
    if (modulation == MarkModulation::linear) return scale * measure.first_moment()[0];
    return scale * measure.second_moment();
}

double NoiseProfile::abs_weight_moment(const LevyMeasure& measure, double k) const {
    const double s = std::pow(std::abs(scale), k);
    if (modulation == MarkModulation::linear) return s * measure.coordinate_abs_moment(k);
    return s * measure.radial_moment(2.0 * k);
}

Trajectory stochastic_convolution(const FreePropagator& prop, const SamplePath& path, const LevyMeasure& measure,
                                  const NoiseProfile& xi, double horizon, double dt) {
    const auto times = jump_time_grid(horizon, dt, path);
    const std::size_t n = prop.grid().size();
    std::vector<Complex> shape(xi.profile.values().begin(), xi.profile.values().end());
    prop.to_fourier(shape);
    const double compensator = xi.mean_weight(measure);

    Trajectory out(prop.grid());
    std::vector<Complex> acc(n);
    auto emit = [&](double t) {
        std::vector<Complex> physical = acc;
        prop.from_fourier(physical);
        out.append(t, ComplexField(prop.grid(), std::move(physical)));
    };
    emit(times[0]);
    auto ev = path.events.begin();
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
        const double h = times[k + 1] - times[k];
        if (h > 0.0) {
            if (compensator != 0.0)
                for (std::size_t i = 0; i < n; ++i) acc[i] -= h * compensator * shape[i];
            prop.evolve_spectrum(acc, h);
        } else {
            while (ev != path.events.end() && ev->time < times[k]) ++ev;
            if (ev == path.events.end() || ev->time != times[k]) throw Error("jump grid out of sync with path");
            const double w = xi.weight(ev->mark);
            for (std::size_t i = 0; i < n; ++i) acc[i] += w * shape[i];
        }
        emit(times[k + 1]);
    }
    return out;
}

StochasticProbeReport stochastic_strichartz_probe(const LevyMeasure& measure, const NoiseProfile& xi,
                                                  const AdmissiblePair& pair, double q, int trials,
                                                  std::uint64_t seed, double horizon, double dt) {
    if (q < 2.0) throw InvalidArgument("q must be >= 2");
    if (trials < 10) throw InvalidArgument("at least 10 trials are required");
    FreePropagator prop(xi.profile.grid());

    double sum = 0.0, sum_sq = 0.0;
    double term_sum = 0.0, term_sum_sq = 0.0;
    for (int i = 0; i < trials; ++i) {
        const SamplePath path = sample_path(measure, horizon, stream_seed(seed, static_cast<std::uint64_t>(i)));
        const Trajectory conv = stochastic_convolution(prop, path, measure, xi, horizon, dt);
        const double v = std::pow(mixed_norm(conv, pair), q);
        sum += v;
        sum_sq += v * v;
        const double terminal = std::pow(l2_norm(conv.fields().back()), 2);
        term_sum += terminal;
        term_sum_sq += terminal * terminal;
    }
    const double n = trials;
    auto stderr_of = [n](double s, double s2) {
        const double mean = s / n;
        return std::sqrt(std::max(0.0, s2 / n - mean * mean) / (n - 1.0));
    };

    const double mass = l2_norm(xi.profile);
    const double quad_base = horizon * mass * mass * xi.abs_weight_moment(measure, 2.0);
    StochasticProbeReport rep{};
    rep.pair = pair;
    rep.q = q;
    rep.trials = trials;
    rep.lhs = sum / n;
    rep.lhs_stderr = stderr_of(sum, sum_sq);
    rep.rhs_quadratic = std::pow(quad_base, 0.5 * q);
    rep.rhs_qth = horizon * std::pow(mass, q) * xi.abs_weight_moment(measure, q);
    const double rhs = rep.rhs_quadratic + rep.rhs_qth;
    rep.ratio = rhs > 0.0 ? rep.lhs / rhs : 0.0;
    rep.terminal_mean_square = term_sum / n;
    rep.terminal_mean_square_stderr = stderr_of(term_sum, term_sum_sq);
    rep.isometry_prediction = quad_base;
    rep.dt = dt;
    rep.horizon = horizon;
    return rep;
}

}  // namespace snls
