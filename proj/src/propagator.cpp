#include "snls/propagator.hpp"

#include <cmath>

namespace snls {

FreePropagator::FreePropagator(const Grid& grid) : fft_(grid), k2_(grid.size()) {
    const int n = grid.points_per_axis();
    for (std::size_t idx = 0; idx < k2_.size(); ++idx) {
        const double kx = grid.wavenumber(static_cast<int>(idx % n));
        double k2 = kx * kx;
        if (grid.dimension() == 2) {
            const double ky = grid.wavenumber(static_cast<int>(idx / n));
            k2 += ky * ky;
        }
        k2_[idx] = k2;
    }
    cached_phases_.assign(k2_.size(), Complex{1.0, 0.0});
}

const std::vector<Complex>& FreePropagator::phases(double t) const {
    if (t != cached_time_) {
        for (std::size_t i = 0; i < k2_.size(); ++i) cached_phases_[i] = std::polar(1.0, -k2_[i] * t);
        cached_time_ = t;
    }
    return cached_phases_;
}

void FreePropagator::evolve_spectrum(std::span<Complex> spectrum, double t) const {
    if (t == 0.0) return;
    const auto& ph = phases(t);
    for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] *= ph[i];
}

void FreePropagator::apply(ComplexField& f, double t) const {
    if (t == 0.0) return;
    fft_.forward(f.values());
    evolve_spectrum(f.values(), t);
    fft_.inverse(f.values());
}

ComplexField FreePropagator::step(const ComplexField& f, double t) const {
    ComplexField out = f;
    apply(out, t);
    return out;
}

ComplexField free_step(const ComplexField& f, double t) {
    f.require_finite();
    FreePropagator prop(f.grid());
    return prop.step(f, t);
}

ComplexField duhamel(const FreePropagator& prop, const Trajectory& forcing, double t, Quadrature rule) {
    if (forcing.empty()) throw InvalidArgument("empty forcing");
    const auto& s = forcing.times();
    if (t < s.front() || t > s.back())
        throw InvalidArgument("duhamel: t outside the sampled range");
    if (rule == Quadrature::trapezoid) (void)forcing.index_at(t);

    std::vector<Complex> acc(prop.grid().size());
    std::vector<Complex> term(prop.grid().size());
    auto add = [&](std::size_t k, double weight) {
        if (weight == 0.0) return;
        auto v = forcing.field(k).values();
        term.assign(v.begin(), v.end());
        prop.to_fourier(term);
        prop.evolve_spectrum(term, t - s[k]);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += weight * term[i];
    };
    for (std::size_t k = 0; k + 1 < forcing.size() && s[k] < t; ++k) {
        const double dt = std::min(s[k + 1], t) - s[k];
        if (dt <= 0.0) continue;
        if (rule == Quadrature::left_endpoint) {
            add(k, dt);
        } else {
            add(k, 0.5 * dt);
            add(k + 1, 0.5 * dt);
        }
    }
    prop.from_fourier(acc);
    return ComplexField(prop.grid(), std::move(acc));
}

Trajectory duhamel_trajectory(const FreePropagator& prop, const Trajectory& forcing, Quadrature rule) {
    Trajectory out(prop.grid());
    if (forcing.empty()) return out;
    const auto& s = forcing.times();
    std::vector<Complex> acc(prop.grid().size());
    std::vector<Complex> cur(prop.grid().size());
    std::vector<Complex> next(prop.grid().size());
    auto spectrum_of = [&](std::size_t k, std::vector<Complex>& dst) {
        auto v = forcing.field(k).values();
        dst.assign(v.begin(), v.end());
        prop.to_fourier(dst);
    };
    auto emit = [&](double time) {
        std::vector<Complex> physical = acc;
        prop.from_fourier(physical);
        out.append(time, ComplexField(prop.grid(), std::move(physical)));
    };
    emit(s[0]);
    spectrum_of(0, cur);
    for (std::size_t k = 0; k + 1 < forcing.size(); ++k) {
        const double dt = s[k + 1] - s[k];
        spectrum_of(k + 1, next);
        if (dt > 0.0) {
            const double w = rule == Quadrature::left_endpoint ? dt : 0.5 * dt;
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * cur[i];
            prop.evolve_spectrum(acc, dt);
            if (rule == Quadrature::trapezoid)
                for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * next[i];
        }
        emit(s[k + 1]);
        std::swap(cur, next);
    }
    return out;
}

long step_count(double horizon, double dt) {
    if (!(dt > 0.0) || !(horizon > 0.0)) throw InvalidArgument("horizon and dt must be positive");
    const double ratio = horizon / dt;
    const long k = std::lround(ratio);
    if (k < 1 || std::abs(ratio - static_cast<double>(k)) > 1e-9 * std::max(1.0, ratio))
        throw InvalidArgument("dt must divide the horizon");
    return k;
}

Trajectory free_trajectory(const FreePropagator& prop, const ComplexField& phi, double horizon, double dt) {
    const long steps = step_count(horizon, dt);
    Trajectory out(prop.grid());
    std::vector<Complex> spectrum(phi.values().begin(), phi.values().end());
    prop.to_fourier(spectrum);
    for (long k = 0; k <= steps; ++k) {
        const double t = k == steps ? horizon : static_cast<double>(k) * dt;
        std::vector<Complex> physical = spectrum;
        prop.evolve_spectrum(physical, t);
        prop.from_fourier(physical);
        out.append(t, ComplexField(prop.grid(), std::move(physical)));
    }
    return out;
}

double strichartz_homogeneous_probe(const ComplexField& phi, const AdmissiblePair& pair, double horizon,
                                    double dt) {
    const double mass = l2_norm(phi);
    if (mass == 0.0) throw InvalidArgument("degenerate probe");
    FreePropagator prop(phi.grid());
    return mixed_norm(free_trajectory(prop, phi, horizon, dt), pair) / mass;
}

}  // namespace snls
