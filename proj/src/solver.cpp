#include "snls/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "snls/marcus.hpp"

namespace snls {

namespace {

struct Norms {
    double l2;
    double lr;
};

// L^2 and L^r in one pass; throws BlowUpError on non-finite data.
Norms measure(const ComplexField& u, double r, double time) {
    double s2 = 0.0;
    double sr = 0.0;
    for (const auto& v : u.values()) {
        const double a2 = std::norm(v);
        s2 += a2;
        sr += std::pow(a2, 0.5 * r);
    }
    if (!std::isfinite(s2) || !std::isfinite(sr)) throw BlowUpError(time);
    const double w = u.grid().cell_volume();
    return {std::sqrt(w * s2), std::pow(w * sr, 1.0 / r)};
}

double base_time(long k, long total, double dt, double horizon) {
    return k == total ? horizon : static_cast<double>(k) * dt;
}

}  // namespace

AdmissiblePair SolverConfig::pair() const { return make_admissible_pair(grid.dimension(), 2.0 * sigma + 2.0); }

void SolverConfig::validate() const {
    const int n = grid.dimension();
    if (!(sigma > 0.0) || !(sigma < 2.0 / n))
        throw InvalidArgument("sigma must satisfy 0 < sigma < 2/n");
    if (!std::isfinite(lambda)) throw InvalidArgument("lambda must be finite");
    (void)step_count(horizon, dt);
    if (save_every < 1) throw InvalidArgument("save_every must be >= 1");
    if (coeffs.count() != measure.mark_dimension())
        throw InvalidArgument("noise coefficient count must equal the mark dimension");
    if (truncation_radius && !(*truncation_radius >= 1.0))
        throw InvalidArgument("truncation radius must be >= 1");
}

double EvolveResult::max_relative_mass_drift() const {
    if (reports.empty()) return 0.0;
    const double m0 = reports.front().mass;
    double worst = 0.0;
    for (const auto& r : reports) worst = std::max(worst, std::abs(r.mass - m0) / m0);
    return worst;
}

std::vector<CutPoint> build_schedule(const SolverConfig& cfg, const SamplePath& path, double start_time,
                                     long start_index, long until_index) {
    return build_schedule(cfg.horizon, cfg.dt, path, start_time, start_index, until_index);
}

std::vector<CutPoint> build_schedule(double horizon, double dt, const SamplePath& path, double start_time,
                                     long start_index, long until_index) {
    const long total = step_count(horizon, dt);
    const long end_index = until_index < 0 ? total : std::min(until_index, total);
    std::vector<CutPoint> cuts;
    auto ev = path.events.begin();
    while (ev != path.events.end() && (ev->time <= start_time || ev->time <= path.origin)) ++ev;
    for (long k = start_index + 1; k <= end_index; ++k) {
        const double b = base_time(k, total, dt, horizon);
        while (ev != path.events.end() && ev->time < b) {
            cuts.push_back({ev->time, -1, &*ev});
            ++ev;
        }
        if (ev != path.events.end() && ev->time == b) {
            cuts.push_back({b, k, &*ev});
            ++ev;
        } else {
            cuts.push_back({b, k, nullptr});
        }
    }
    return cuts;
}

std::vector<double> solver_time_grid(const SolverConfig& cfg, const SamplePath& path) {
    return jump_time_grid(cfg.horizon, cfg.dt, path);
}

std::vector<double> jump_time_grid(double horizon, double dt, const SamplePath& path) {
    std::vector<double> times{0.0};
    for (const auto& c : build_schedule(horizon, dt, path, 0.0, 0, -1)) {
        times.push_back(c.time);
        if (c.event) times.push_back(c.time);
    }
    return times;
}

SplitStepSolver::SplitStepSolver(SolverConfig cfg)
    : cfg_(std::move(cfg)), prop_(cfg_.grid), drift_(cfg_.measure.first_moment()) {
    cfg_.validate();
}

SolverState SplitStepSolver::initial_state(const ComplexField& u0) const {
    if (!(u0.grid() == cfg_.grid)) throw InvalidArgument("initial data grid mismatch");
    u0.require_finite();
    return {u0, 0.0, 0, YNormTracker(cfg_.pair())};
}

void SplitStepSolver::rotate_half(ComplexField& u, double duration, double lambda_eff) const {
    // The nonlinear and drift rotations depend on |u| only, which both
    // preserve, so they commute and are applied as a single phase.
    const double sigma = cfg_.sigma;
    const bool has_drift = std::any_of(drift_.begin(), drift_.end(), [](double v) { return v != 0.0; });
    const int m = cfg_.coeffs.count();
    for (auto& v : u.values()) {
        const double theta = std::norm(v);
        double rate = -lambda_eff * std::pow(theta, sigma);
        if (has_drift)
            for (int j = 0; j < m; ++j) rate += drift_[j] * cfg_.coeffs.value(j, theta);
        v *= std::polar(1.0, rate * duration);
    }
}

void SplitStepSolver::strang_step(ComplexField& u, double h, double lambda_eff) const {
    rotate_half(u, 0.5 * h, lambda_eff);
    prop_.apply(u, h);
    rotate_half(u, 0.5 * h, lambda_eff);
}

EvolveResult SplitStepSolver::run(SolverState state, const SamplePath& path, long until_index) const {
    const double r = cfg_.pair().r;
    EvolveResult res{Trajectory(cfg_.grid), {}, std::move(state)};
    SolverState& st = res.final_state;
    ComplexField& u = st.field;

    Norms norms = measure(u, r, st.time);
    st.tracker.observe(norms.l2, norms.lr);
    auto snapshot = [&](bool jumped) {
        res.reports.push_back({st.time, norms.l2, norms.lr, st.tracker.value(), jumped});
        res.trajectory.append(st.time, u);
    };
    snapshot(false);

    const auto cuts = build_schedule(cfg_, path, st.time, st.base_index, until_index);
    for (std::size_t c = 0; c < cuts.size(); ++c) {
        const CutPoint& cut = cuts[c];
        const double h = cut.time - st.time;
        double lambda_eff = cfg_.lambda;
        if (cfg_.truncation_radius) lambda_eff *= cutoff_theta(st.tracker.value(), *cfg_.truncation_radius);
        st.tracker.advance(norms.l2, norms.lr, h);
        strang_step(u, h, lambda_eff);
        st.time = cut.time;
        if (cut.base_index >= 0) st.base_index = cut.base_index;
        norms = measure(u, r, st.time);
        st.tracker.observe(norms.l2, norms.lr);

        const bool last = c + 1 == cuts.size();
        if (cut.event) {
            snapshot(false);
            for (auto& v : u.values()) v = marcus_jump(v, cut.event->mark, cfg_.coeffs).value;
            norms = measure(u, r, st.time);
            st.tracker.observe(norms.l2, norms.lr);
            snapshot(true);
        } else if (last || (cut.base_index >= 0 && cut.base_index % cfg_.save_every == 0)) {
            snapshot(false);
        }
    }
    return res;
}

EvolveResult evolve(const ComplexField& u0, const SolverConfig& cfg, const SamplePath& path) {
    SplitStepSolver solver(cfg);
    return solver.run(solver.initial_state(u0), path);
}

EvolveResult evolve_truncated(const ComplexField& u0, SolverConfig cfg, const SamplePath& path, double radius) {
    cfg.truncation_radius = radius;
    return evolve(u0, cfg, path);
}

ComplexField nonlinear_phase_step(const ComplexField& f, double dt, double lambda, double sigma) {
    if (dt < 0.0) throw InvalidArgument("dt must be non-negative");
    ComplexField out = f;
    for (auto& v : out.values()) v *= std::polar(1.0, -lambda * std::pow(std::norm(v), sigma) * dt);
    return out;
}

ComplexField compensator_drift_step(const ComplexField& f, double dt, const NoiseCoefficients& coeffs,
                                    std::span<const double> mu) {
    if (static_cast<int>(mu.size()) != coeffs.count()) throw InvalidArgument("drift vector has wrong dimension");
    for (double v : mu)
        if (!std::isfinite(v)) throw InvalidArgument("drift must be finite");
    ComplexField out = f;
    for (auto& v : out.values()) {
        const double theta = std::norm(v);
        double rate = 0.0;
        for (int j = 0; j < coeffs.count(); ++j) rate += mu[j] * coeffs.value(j, theta);
        v *= std::polar(1.0, rate * dt);
    }
    return out;
}

ComplexField apply_jump(const ComplexField& f, std::span<const double> z, const NoiseCoefficients& coeffs) {
    if (euclidean_norm(z) > 1.0) throw InvalidArgument("jump mark outside the unit ball");
    ComplexField out = f;
    for (auto& v : out.values()) v = marcus_jump(v, z, coeffs).value;
    return out;
}

double cutoff_theta(double x, double radius) {
    if (x < 0.0) throw InvalidArgument("cutoff_theta: negative argument");
    if (!(radius > 0.0)) throw InvalidArgument("cutoff_theta: radius must be positive");
    if (x <= radius) return 1.0;
    if (x >= 2.0 * radius) return 0.0;
    const double s = (x - radius) / radius;
    return 1.0 - s * s * s * (s * (6.0 * s - 15.0) + 10.0);
}

std::optional<double> y_exit_time(const Trajectory& traj, const AdmissiblePair& pair, double k) {
    if (!(k > 0.0)) throw InvalidArgument("exit level must be positive");
    YNormTracker tracker(pair);
    for (std::size_t j = 0; j < traj.size(); ++j) {
        const double l2 = l2_norm(traj.field(j));
        const double lr = lr_norm(traj.field(j), pair.r);
        tracker.observe(l2, lr);
        if (tracker.value() > k) return traj.time(j);
        if (j + 1 < traj.size()) tracker.advance(l2, lr, traj.time(j + 1) - traj.time(j));
    }
    return std::nullopt;
}

}  // namespace snls
