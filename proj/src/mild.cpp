#include "snls/mild.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "snls/marcus.hpp"

namespace snls {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// W_0 = 0; across an interval of length dt > 0, W <- S_dt (W + dt F_k);
// across a repeated time (jump), W <- W + J_k. Runs in Fourier space.
template <class Forcing, class Jump>
Trajectory accumulate(const FreePropagator& prop, const Trajectory& u, Forcing&& forcing, Jump&& jump) {
    Trajectory out(prop.grid());
    if (u.empty()) return out;
    const auto& t = u.times();
    const std::size_t n = prop.grid().size();
    std::vector<Complex> acc(n);
    auto emit = [&](double time) {
        std::vector<Complex> physical = acc;
        prop.from_fourier(physical);
        out.append(time, ComplexField(prop.grid(), std::move(physical)));
    };
    emit(t[0]);
    for (std::size_t k = 0; k + 1 < u.size(); ++k) {
        const double dt = t[k + 1] - t[k];
        if (dt > 0.0) {
            if (auto f = forcing(k)) {
                auto hat = f->values();
                prop.to_fourier(hat);
                for (std::size_t i = 0; i < n; ++i) acc[i] += dt * hat[i];
            }
            prop.evolve_spectrum(acc, dt);
        } else if (auto j = jump(k)) {
            auto hat = j->values();
            prop.to_fourier(hat);
            for (std::size_t i = 0; i < n; ++i) acc[i] += hat[i];
        }
        emit(t[k + 1]);
    }
    return out;
}

const JumpEvent& event_at(const SamplePath& path, double time) {
    auto it = std::lower_bound(path.events.begin(), path.events.end(), time,
                               [](const JumpEvent& e, double t) { return e.time < t; });
    if (it == path.events.end() || it->time != time)
        throw InvalidArgument("trajectory has a jump at a time with no path event");
    return *it;
}

std::vector<double> phase_coefficients(const NoiseCoefficients& coeffs, double theta) {
    std::vector<double> a(coeffs.count());
    for (int j = 0; j < coeffs.count(); ++j) a[j] = coeffs.value(j, theta);
    return a;
}

// int G(z, u(x)) nu(dz) pointwise.
ComplexField compensator_field(const ComplexField& u, const SolverConfig& cfg) {
    ComplexField out(u.grid());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto a = phase_coefficients(cfg.coeffs, std::norm(u[i]));
        out[i] = u[i] * cfg.measure.phase_integral(a);
    }
    return out;
}

ComplexField jump_field(const ComplexField& u, const JumpEvent& ev, const NoiseCoefficients& coeffs) {
    ComplexField out(u.grid());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = jump_increment(ev.mark, u[i], coeffs);
    return out;
}

Trajectory sum(std::initializer_list<const Trajectory*> parts) {
    const Trajectory& first = **parts.begin();
    Trajectory out(first.grid());
    for (std::size_t k = 0; k < first.size(); ++k) {
        ComplexField f = first.field(k);
        for (auto it = parts.begin() + 1; it != parts.end(); ++it) f += (*it)->field(k);
        out.append(first.time(k), std::move(f));
    }
    return out;
}

}  // namespace

Trajectory psi1_trajectory(const FreePropagator& prop, const Trajectory& u, const SolverConfig& cfg,
                           std::optional<double> radius) {
    const auto pair = cfg.pair();
    std::vector<double> weight(u.size(), 1.0);
    if (radius) {
        YNormTracker tracker(pair);
        for (std::size_t k = 0; k < u.size(); ++k) {
            const double l2 = l2_norm(u.field(k));
            const double lr = lr_norm(u.field(k), pair.r);
            tracker.observe(l2, lr);
            weight[k] = cutoff_theta(tracker.value(), *radius);
            if (k + 1 < u.size()) tracker.advance(l2, lr, u.time(k + 1) - u.time(k));
        }
    }
    const Complex minus_i{0.0, -1.0};
    return accumulate(
        prop, u,
        [&](std::size_t k) -> std::optional<ComplexField> {
            if (cfg.lambda == 0.0) return std::nullopt;
            ComplexField f = u.field(k);
            const double c = weight[k] * cfg.lambda;
            for (auto& v : f.values()) v = minus_i * c * std::pow(std::norm(v), cfg.sigma) * v;
            return f;
        },
        [](std::size_t) -> std::optional<ComplexField> { return std::nullopt; });
}

Trajectory psi2_trajectory(const FreePropagator& prop, const Trajectory& u, const SamplePath& path,
                           const SolverConfig& cfg) {
    return accumulate(
        prop, u,
        [&](std::size_t k) -> std::optional<ComplexField> {
            ComplexField f = compensator_field(u.field(k), cfg);
            f *= -1.0;
            return f;
        },
        [&](std::size_t k) -> std::optional<ComplexField> {
            return jump_field(u.field(k), event_at(path, u.time(k)), cfg.coeffs);
        });
}

Trajectory psi3_trajectory(const FreePropagator& prop, const Trajectory& u, const SolverConfig& cfg) {
    const Mark mu = cfg.measure.first_moment();
    return accumulate(
        prop, u,
        [&](std::size_t k) -> std::optional<ComplexField> {
            const ComplexField& uk = u.field(k);
            ComplexField f(uk.grid());
            for (std::size_t i = 0; i < uk.size(); ++i) {
                const auto a = phase_coefficients(cfg.coeffs, std::norm(uk[i]));
                double drift = 0.0;
                for (std::size_t j = 0; j < a.size(); ++j) drift += mu[j] * a[j];
                // int (e^{-i z.a} - 1 + i z.a) nu(dz)
                f[i] = uk[i] * (cfg.measure.phase_integral(a) + Complex{0.0, drift});
            }
            return f;
        },
        [](std::size_t) -> std::optional<ComplexField> { return std::nullopt; });
}

ComplexField psi2_direct(const FreePropagator& prop, const Trajectory& u, const SamplePath& path,
                         const SolverConfig& cfg, double t) {
    const std::size_t last = u.index_at(t);
    const std::size_t n = prop.grid().size();
    std::vector<Complex> acc(n);
    auto add = [&](ComplexField f, double lag, double weight) {
        auto hat = f.values();
        prop.to_fourier(hat);
        prop.evolve_spectrum(hat, lag);
        for (std::size_t i = 0; i < n; ++i) acc[i] += weight * hat[i];
    };
    // Events first, then the compensator, each term propagated on its own.
    for (std::size_t k = 0; k < last; ++k)
        if (u.time(k + 1) == u.time(k))
            add(jump_field(u.field(k), event_at(path, u.time(k)), cfg.coeffs), t - u.time(k), 1.0);
    for (std::size_t k = 0; k < last; ++k) {
        const double dt = u.time(k + 1) - u.time(k);
        if (dt > 0.0) add(compensator_field(u.field(k), cfg), t - u.time(k), -dt);
    }
    prop.from_fourier(acc);
    return ComplexField(prop.grid(), std::move(acc));
}

ComplexField psi1(const Trajectory& u, const SolverConfig& cfg, std::optional<double> radius, double t) {
    const std::size_t k = u.index_at(t);
    FreePropagator prop(u.grid());
    return psi1_trajectory(prop, u, cfg, radius).field(k);
}

ComplexField psi2(const Trajectory& u, const SamplePath& path, const SolverConfig& cfg, double t) {
    const std::size_t k = u.index_at(t);
    FreePropagator prop(u.grid());
    return psi2_trajectory(prop, u, path, cfg).field(k);
}

ComplexField psi3(const Trajectory& u, const SolverConfig& cfg, double t) {
    const std::size_t k = u.index_at(t);
    FreePropagator prop(u.grid());
    return psi3_trajectory(prop, u, cfg).field(k);
}

Trajectory free_on_grid(const FreePropagator& prop, const ComplexField& u0, const std::vector<double>& times) {
    Trajectory out(prop.grid());
    if (times.empty()) return out;
    std::vector<Complex> hat(u0.values().begin(), u0.values().end());
    prop.to_fourier(hat);
    prop.evolve_spectrum(hat, times[0]);
    auto emit = [&](double time) {
        std::vector<Complex> physical = hat;
        prop.from_fourier(physical);
        out.append(time, ComplexField(prop.grid(), std::move(physical)));
    };
    emit(times[0]);
    for (std::size_t k = 1; k < times.size(); ++k) {
        prop.evolve_spectrum(hat, times[k] - times[k - 1]);
        emit(times[k]);
    }
    return out;
}

Trajectory gamma_r(const Trajectory& u, const ComplexField& u0, const SamplePath& path, const SolverConfig& cfg,
                   std::optional<double> radius) {
    FreePropagator prop(u.grid());
    const Trajectory base = free_on_grid(prop, u0, u.times());
    const Trajectory p1 = psi1_trajectory(prop, u, cfg, radius);
    const Trajectory p2 = psi2_trajectory(prop, u, path, cfg);
    const Trajectory p3 = psi3_trajectory(prop, u, cfg);
    return sum({&base, &p1, &p2, &p3});
}

std::vector<PicardIterate> picard(const ComplexField& u0, const SamplePath& path, const SolverConfig& cfg,
                                  std::optional<double> radius, int iterations) {
    if (iterations < 2) throw InvalidArgument("picard needs at least 2 iterations");
    cfg.validate();
    const auto pair = cfg.pair();
    FreePropagator prop(cfg.grid);
    std::vector<PicardIterate> out;
    out.push_back({free_on_grid(prop, u0, solver_time_grid(cfg, path)), kNaN, kNaN});
    int expanding = 0;
    for (int it = 0; it < iterations; ++it) {
        Trajectory next = gamma_r(out.back().iterate, u0, path, cfg, radius);
        const double dist = y_norm(difference(next, out.back().iterate), pair);
        const double prev = out.back().y_distance;
        const double ratio = std::isnan(prev) || prev == 0.0 ? kNaN : dist / prev;
        out.push_back({std::move(next), dist, ratio});
        expanding = ratio > 1.0 ? expanding + 1 : 0;
        if (expanding >= 3) throw NotContracting();
        if (dist == 0.0) break;
    }
    return out;
}

}  // namespace snls
