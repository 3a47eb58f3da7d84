#include "snls/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "snls/marcus.hpp"
#include "snls/mild.hpp"
#include "snls/strichartz.hpp"

namespace snls {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

std::string hash_line(const std::string& hash) { return "# config_hash=" + hash + "\n"; }

ordered num(double x) { return std::isfinite(x) ? ordered(x) : ordered(nullptr); }

ordered grid_json(const Grid& g) {
    return {{"n", g.dimension()}, {"points", g.points_per_axis()}, {"half_length", g.half_length()}};
}

ordered pair_json(const AdmissiblePair& p) { return {{"p", num(p.p)}, {"r", num(p.r)}}; }

ordered meta_json(const ExperimentConfig& cfg) {
    return {{"config_hash", cfg.hash()}, {"seed", cfg.seed}, {"version", kVersion}};
}

PathResult run_path(const ExperimentConfig& cfg, std::size_t index) {
    PathResult r;
    r.index = index;
    r.seed = stream_seed(cfg.seed, index);
    try {
        const SamplePath path = sample_path(cfg.solver.measure, cfg.solver.horizon, r.seed);
        r.jumps = path.events.size();
        SolverConfig sc = cfg.solver;
        sc.save_every = std::numeric_limits<int>::max();  // only the endpoints are needed
        const EvolveResult res = evolve(make_initial(sc.grid, cfg.initial), sc, path);
        r.max_mass_drift = res.max_relative_mass_drift();
        const auto& st = res.final_state;
        for (Observable o : cfg.observables) {
            switch (o) {
                case Observable::mass: r.terminal[o] = l2_norm(st.field); break;
                case Observable::lr_norm: r.terminal[o] = lr_norm(st.field, sc.pair().r); break;
                case Observable::y_norm: r.terminal[o] = st.tracker.value(); break;
                case Observable::mixed_norm: r.terminal[o] = st.tracker.mixed(); break;
            }
        }
    } catch (const Error& e) {
        r.ok = false;
        r.error = e.what();
        r.terminal.clear();
    }
    return r;
}

Trajectory constant_forcing(const Grid& grid, int mode, double horizon, double dt) {
    ComplexField f(grid);
    const int N = grid.points_per_axis();
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        const double x = grid.coordinate(static_cast<int>(idx % N));
        f[idx] = std::polar(1.0, mode * std::numbers::pi / grid.half_length() * x);
    }
    Trajectory out(grid);
    const long steps = step_count(horizon, dt);
    for (long k = 0; k <= steps; ++k) out.append(k == steps ? horizon : k * dt, f);
    return out;
}

ComplexField gaussian_profile(const Grid& grid, double width) {
    InitialData d;
    d.width = width;
    d.center.assign(grid.dimension(), 0.0);
    d.momentum.assign(grid.dimension(), 0.0);
    return make_initial(grid, d);
}

struct ProbeRun {
    double homogeneous;
    InhomogeneousRatios inhomogeneous;
    StochasticProbeReport stochastic;
};

ProbeRun probe_once(const ExperimentConfig& cfg, const Grid& grid, int trials, double dt) {
    const auto& p = cfg.probe;
    const AdmissiblePair pair = make_admissible_pair(grid.dimension(), p.r);
    const AdmissiblePair source = make_admissible_pair(grid.dimension(), p.source_r);
    ProbeRun out{};
    out.homogeneous = strichartz_homogeneous_probe(make_initial(grid, cfg.initial), pair, p.horizon, dt);
    out.inhomogeneous =
        det_inhomogeneous_probe(constant_forcing(grid, p.forcing_mode, p.horizon, dt), pair, source, p.horizon);
    NoiseProfile xi{gaussian_profile(grid, p.profile_width), p.modulation, p.scale};
    out.stochastic = stochastic_strichartz_probe(cfg.solver.measure, xi, pair, p.q, trials, cfg.seed, p.horizon, dt);
    return out;
}

ordered probe_run_json(const ProbeRun& r, const Grid& grid) {
    const auto& s = r.stochastic;
    return {{"pair", pair_json(s.pair)},
            {"q", s.q},
            {"trials", s.trials},
            {"lhs", num(s.lhs)},
            {"lhs_stderr", num(s.lhs_stderr)},
            {"rhs_quadratic", num(s.rhs_quadratic)},
            {"rhs_qth", num(s.rhs_qth)},
            {"ratio", num(s.ratio)},
            {"terminal_mean_square", num(s.terminal_mean_square)},
            {"terminal_mean_square_stderr", num(s.terminal_mean_square_stderr)},
            {"isometry_prediction", num(s.isometry_prediction)},
            {"dt", s.dt},
            {"horizon", s.horizon},
            {"grid", grid_json(grid)},
            {"homogeneous_ratio", num(r.homogeneous)},
            {"inhomogeneous_sup_l2_ratio", num(r.inhomogeneous.sup_l2)},
            {"inhomogeneous_lp_lr_ratio", num(r.inhomogeneous.lp_lr)}};
}

}  // namespace

EnsembleSummary run_ensemble(const ExperimentConfig& cfg, int threads) {
    EnsembleSummary s;
    s.config_hash = cfg.hash();
    s.seed = cfg.seed;
    s.observables = cfg.observables;
    const std::size_t m = static_cast<std::size_t>(cfg.paths);
    s.paths.resize(m);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < m; i = next++) s.paths[i] = run_path(cfg, i);
    };
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(m)));
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    // Aggregation in path order, independent of completion order.
    for (Observable o : cfg.observables) {
        std::vector<double> v;
        for (const auto& p : s.paths)
            if (p.ok) v.push_back(p.terminal.at(o));
        ObservableStats st;
        if (!v.empty()) {
            double sum = 0.0;
            for (double x : v) sum += x;
            st.mean = sum / static_cast<double>(v.size());
            double ss = 0.0;
            for (double x : v) ss += (x - st.mean) * (x - st.mean);
            st.variance = v.size() > 1 ? ss / static_cast<double>(v.size() - 1) : 0.0;
            st.min = *std::min_element(v.begin(), v.end());
            st.max = *std::max_element(v.begin(), v.end());
        }
        s.stats[o] = st;
    }
    for (const auto& p : s.paths) {
        if (!p.ok) ++s.failures;
        else s.max_mass_drift = std::max(s.max_mass_drift, p.max_mass_drift);
    }
    return s;
}

std::string summary_json(const EnsembleSummary& s) {
    ordered j;
    j["config_hash"] = s.config_hash;
    j["seed"] = s.seed;
    j["version"] = kVersion;
    j["paths"] = s.paths.size();
    j["failures"] = s.failures;
    j["max_relative_mass_drift"] = num(s.max_mass_drift);
    ordered obs = ordered::object();
    for (Observable o : s.observables) {
        const auto& st = s.stats.at(o);
        obs[to_string(o)] = {{"mean", num(st.mean)}, {"variance", num(st.variance)}, {"min", num(st.min)},
                             {"max", num(st.max)}};
    }
    j["observables"] = obs;
    ordered failed = ordered::array();
    for (const auto& p : s.paths)
        if (!p.ok) failed.push_back({{"path", p.index}, {"error", p.error}});
    j["failed_paths"] = failed;
    return j.dump(2) + "\n";
}

std::string paths_csv(const EnsembleSummary& s) {
    std::ostringstream os;
    os << hash_line(s.config_hash) << "path,seed,status,jumps,max_mass_drift";
    for (Observable o : s.observables) os << ',' << to_string(o);
    os << '\n';
    for (const auto& p : s.paths) {
        os << p.index << ',' << p.seed << ',' << (p.ok ? "ok" : "failed") << ',' << p.jumps << ','
           << format_number(p.max_mass_drift);
        for (Observable o : s.observables) os << ',' << (p.ok ? format_number(p.terminal.at(o)) : "");
        os << '\n';
    }
    return os.str();
}

std::string reports_csv(const std::vector<StepReport>& reports, const std::string& hash) {
    std::ostringstream os;
    os << hash_line(hash) << "time,mass,lr_norm,y_norm,jump_flag\n";
    for (const auto& r : reports)
        os << format_number(r.time) << ',' << format_number(r.mass) << ',' << format_number(r.lr_norm) << ','
           << format_number(r.y_norm) << ',' << (r.jump_applied ? 1 : 0) << '\n';
    return os.str();
}

std::string trajectory_csv(const Trajectory& traj, const std::string& hash) {
    std::ostringstream os;
    os << hash_line(hash) << "snapshot,time,index,re,im\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const std::string t = format_number(traj.time(k));
        const auto vals = traj.field(k).values();
        for (std::size_t i = 0; i < vals.size(); ++i)
            os << k << ',' << t << ',' << i << ',' << format_number(vals[i].real()) << ','
               << format_number(vals[i].imag()) << '\n';
    }
    return os.str();
}

std::string events_csv(const SamplePath& path, int mark_dimension, const std::string& hash) {
    std::ostringstream os;
    os << hash_line(hash) << "time";
    for (int j = 1; j <= mark_dimension; ++j) os << ",z_" << j;
    os << '\n';
    for (const auto& e : path.events) {
        os << format_number(e.time);
        for (double z : e.mark) os << ',' << format_number(z);
        os << '\n';
    }
    return os.str();
}

OutputDirectory::OutputDirectory(std::filesystem::path dir, const std::string& hash, bool force)
    : dir_(std::move(dir)) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw OutputConflict("cannot create output directory '" + dir_.string() + "': " + ec.message());
    const fs::path manifest = dir_ / "manifest.json";
    if (fs::exists(manifest) && !force) {
        std::ifstream in(manifest);
        std::string recorded;
        try {
            recorded = json::parse(in).at("config_hash").get<std::string>();
        } catch (const std::exception&) {
            throw OutputConflict("unreadable manifest in '" + dir_.string() + "'; use --force to overwrite");
        }
        if (recorded != hash)
            throw OutputConflict("output directory '" + dir_.string() + "' holds results for config hash " +
                                 recorded + "; use --force to overwrite");
    }
    ordered m = {{"config_hash", hash}, {"version", kVersion}};
    write("manifest.json", m.dump(2) + "\n");
}

void OutputDirectory::write(const std::string& name, const std::string& content) const {
    const auto target = dir_ / name;
    std::ofstream out(target, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw Error("cannot write '" + target.string() + "'");
}

SimulateResult simulate_command(const ExperimentConfig& cfg, const OutputDirectory& out) {
    const std::string hash = cfg.hash();
    SamplePath path = sample_path(cfg.solver.measure, cfg.solver.horizon, stream_seed(cfg.seed, 0));
    const ComplexField u0 = make_initial(cfg.solver.grid, cfg.initial);
    EvolveResult run = evolve(u0, cfg.solver, path);

    out.write("trajectory.csv", trajectory_csv(run.trajectory, hash));
    out.write("reports.csv", reports_csv(run.reports, hash));
    out.write("events.csv", events_csv(path, cfg.solver.measure.mark_dimension(), hash));

    ordered rep = meta_json(cfg);
    rep["command"] = "simulate";
    rep["jumps"] = path.events.size();
    rep["snapshots"] = run.trajectory.size();
    rep["final_time"] = run.final_state.time;
    rep["max_relative_mass_drift"] = num(run.max_relative_mass_drift());
    rep["final_y_norm"] = num(run.final_state.tracker.value());

    if (plane_wave_exact(cfg.solver, cfg.initial, path, 0.0)) {
        std::ostringstream os;
        os << hash_line(hash) << "time,l2_error\n";
        double final_error = 0.0;
        for (std::size_t k = 0; k < run.trajectory.size(); ++k) {
            if (run.trajectory.is_left_limit(k)) continue;
            const double t = run.trajectory.time(k);
            const auto exact = plane_wave_exact(cfg.solver, cfg.initial, path, t);
            final_error = l2_norm(run.trajectory.field(k) - *exact);
            os << format_number(t) << ',' << format_number(final_error) << '\n';
        }
        out.write("reference.csv", os.str());
        rep["final_l2_error"] = num(final_error);
    }
    const std::string text = rep.dump(2) + "\n";
    out.write("simulate.json", text);
    return {std::move(run), std::move(path), text};
}

EnsembleSummary ensemble_command(const ExperimentConfig& cfg, int threads, const OutputDirectory& out) {
    EnsembleSummary s = run_ensemble(cfg, threads);
    out.write("summary.json", summary_json(s));
    out.write("paths.csv", paths_csv(s));
    return s;
}

std::string probe_command(const ExperimentConfig& cfg, const OutputDirectory& out) {
    const auto& p = cfg.probe;
    const Grid& grid = cfg.solver.grid;
    const ProbeRun base = probe_once(cfg, grid, p.trials, p.dt);
    ordered rep = probe_run_json(base, grid);
    rep["config_hash"] = cfg.hash();
    rep["seed"] = cfg.seed;
    rep["version"] = kVersion;
    rep["source_pair"] = pair_json(make_admissible_pair(grid.dimension(), p.source_r));

    if (p.stability) {
        const Grid fine(grid.dimension(), 2 * grid.points_per_axis(), grid.half_length());
        const std::vector<std::pair<std::string, ProbeRun>> variants = {
            {"refined_grid", probe_once(cfg, fine, p.trials, p.dt)},
            {"more_trials", probe_once(cfg, grid, 10 * p.trials, p.dt)},
            {"half_dt", probe_once(cfg, grid, p.trials, 0.5 * p.dt)},
        };
        ordered vj = ordered::object();
        auto spread = [&](auto get) {
            double lo = get(base), hi = get(base);
            for (const auto& [name, run] : variants) {
                lo = std::min(lo, get(run));
                hi = std::max(hi, get(run));
            }
            return lo > 0.0 ? hi / lo : (hi == 0.0 ? 1.0 : std::numeric_limits<double>::infinity());
        };
        for (const auto& [name, run] : variants)
            vj[name] = probe_run_json(run, name == "refined_grid" ? fine : grid);
        rep["variants"] = vj;
        rep["stability_factor"] = {
            {"stochastic_ratio", num(spread([](const ProbeRun& r) { return r.stochastic.ratio; }))},
            {"homogeneous_ratio", num(spread([](const ProbeRun& r) { return r.homogeneous; }))},
            {"inhomogeneous_sup_l2_ratio", num(spread([](const ProbeRun& r) { return r.inhomogeneous.sup_l2; }))},
            {"inhomogeneous_lp_lr_ratio", num(spread([](const ProbeRun& r) { return r.inhomogeneous.lp_lr; }))}};
    }
    const std::string text = rep.dump(2) + "\n";
    out.write("probe.json", text);
    return text;
}

std::vector<PicardIterate> picard_command(const ExperimentConfig& cfg, const OutputDirectory& out) {
    const auto& pc = cfg.picard;
    SolverConfig sc = cfg.solver;
    sc.horizon = pc.horizon;
    sc.dt = pc.dt;
    sc.save_every = 1;
    sc.truncation_radius = pc.radius;
    const SamplePath path = sample_path(sc.measure, pc.horizon, stream_seed(cfg.seed, 0));
    const ComplexField u0 = make_initial(sc.grid, cfg.initial);
    std::vector<PicardIterate> iterates = picard(u0, path, sc, pc.radius, pc.iterations);

    std::ostringstream os;
    os << hash_line(cfg.hash()) << "iteration,y_distance,ratio\n";
    for (std::size_t k = 1; k < iterates.size(); ++k) {
        os << k << ',' << format_number(iterates[k].y_distance) << ',';
        if (!std::isnan(iterates[k].ratio)) os << format_number(iterates[k].ratio);
        os << '\n';
    }
    out.write("picard.csv", os.str());

    const EvolveResult solver = evolve_truncated(u0, sc, path, pc.radius);
    ordered rep = meta_json(cfg);
    rep["command"] = "picard";
    rep["T0"] = pc.horizon;
    rep["R"] = pc.radius;
    rep["dt"] = pc.dt;
    rep["iterations"] = iterates.size() - 1;
    double max_ratio = 0.0;
    for (std::size_t k = 2; k < iterates.size(); ++k)
        if (!std::isnan(iterates[k].ratio)) max_ratio = std::max(max_ratio, iterates[k].ratio);
    rep["max_ratio_after_first"] = num(max_ratio);
    rep["final_y_distance"] = num(iterates.back().y_distance);
    rep["limit_vs_solver_y_distance"] =
        num(y_norm(difference(iterates.back().iterate, solver.trajectory), sc.pair()));
    out.write("picard.json", rep.dump(2) + "\n");
    return iterates;
}

VerifyResult verify_command(const ExperimentConfig& cfg, const OutputDirectory& out) {
    const auto& v = cfg.verify;
    VerifyResult result;
    ordered rep = meta_json(cfg);
    rep["command"] = "verify-lemmas";

    std::vector<std::pair<std::string, NoiseCoefficients>> families = {
        {"config", cfg.solver.coeffs},
        {"constant", NoiseCoefficients({ConstantCoefficient{1.0}})},
        {"rational", NoiseCoefficients({RationalCoefficient{1.0, 1.0}})},
        {"saturating", NoiseCoefficients({SaturatingCoefficient{1.0}})},
    };

    // Jump flow: closed form against the ODE oracle.
    {
        const auto chk = verify_flow_oracle(cfg.solver.coeffs, v.flow_trials, v.flow_radius, 256, cfg.seed);
        const std::uint64_t bad = (chk.max_closed_vs_ode > 1e-10) + (chk.max_modulus_drift > 1e-10) +
                                  (chk.max_closed_modulus_drift > 1e-12);
        result.violations += bad;
        rep["marcus_flow"] = {{"trials", chk.trials},
                              {"max_closed_vs_ode", num(chk.max_closed_vs_ode)},
                              {"max_ode_modulus_drift", num(chk.max_modulus_drift)},
                              {"max_closed_relative_modulus_drift", num(chk.max_closed_modulus_drift)},
                              {"violations", bad}};
    }

    // Growth and Lipschitz bounds of G and H; L1/L2 inequalities.
    ordered jump = ordered::object();
    ordered lip = ordered::object();
    for (std::size_t f = 0; f < families.size(); ++f) {
        const auto& [name, coeffs] = families[f];
        const auto jr = verify_jump_bounds(coeffs, v.jump_trials, v.jump_radius, stream_seed(cfg.seed, 100 + f));
        result.violations += jr.violations();
        auto bound = [](const BoundCheck& b, double c) {
            return ordered{{"constant", num(c)}, {"max_ratio", num(b.max_ratio)}, {"violations", b.violations}};
        };
        jump[name] = {{"trials", jr.trials},
                      {"growth_g", bound(jr.growth_g, jr.constants.growth_g)},
                      {"lipschitz_g", bound(jr.lipschitz_g, jr.constants.lipschitz_g)},
                      {"growth_h", bound(jr.growth_h, jr.constants.growth_h)},
                      {"lipschitz_h", bound(jr.lipschitz_h, jr.constants.lipschitz_h)}};

        const auto consts = lipschitz_constants(coeffs);
        const auto lc = verify_lipschitz(coeffs, v.lipschitz_pairs, v.lipschitz_radius, stream_seed(cfg.seed, 200 + f));
        result.violations += lc.violations_l1 + lc.violations_l2;
        lip[name] = {{"pairs", lc.pairs},
                     {"l1", num(consts.l1)},
                     {"l2", num(consts.l2)},
                     {"max_ratio_l1", num(lc.max_ratio_l1)},
                     {"max_ratio_l2", num(lc.max_ratio_l2)},
                     {"violations_l1", lc.violations_l1},
                     {"violations_l2", lc.violations_l2}};
    }
    rep["jump_bounds"] = jump;
    rep["lipschitz"] = lip;

    // Cutoff: support, range and slope bound.
    {
        const double R = cfg.picard.radius;
        std::mt19937_64 rng(stream_seed(cfg.seed, 300));
        std::uniform_real_distribution<double> dist(0.0, 3.0 * R);
        std::uint64_t bad = 0;
        double max_ratio = 0.0;
        for (std::uint64_t t = 0; t < v.cutoff_pairs; ++t) {
            const double x = dist(rng);
            const double y = (t % 2 == 1) ? std::max(0.0, x + 1e-3 * R * (dist(rng) / (3.0 * R) - 0.5)) : dist(rng);
            const double tx = cutoff_theta(x, R), ty = cutoff_theta(y, R);
            if (tx < 0.0 || tx > 1.0) ++bad;
            if (x <= R && tx != 1.0) ++bad;
            if (x >= 2.0 * R && tx != 0.0) ++bad;
            const double bound = kCutoffSlope / R * std::abs(x - y);
            if (bound > 0.0) max_ratio = std::max(max_ratio, std::abs(tx - ty) / bound);
            if (std::abs(tx - ty) > bound * (1.0 + 1e-12) + 1e-15) ++bad;
        }
        result.violations += bad;
        rep["cutoff"] = {{"R", R},
                         {"pairs", v.cutoff_pairs},
                         {"slope_bound", kCutoffSlope / R},
                         {"max_ratio", num(max_ratio)},
                         {"violations", bad}};
    }

    // Noise model: sampled marks, event ordering, Poisson count and second moment.
    {
        const LevyMeasure& nu = cfg.solver.measure;
        const double horizon = 1.0;
        std::uint64_t bad_marks = 0, bad_times = 0;
        double count_sum = 0.0, count_sq = 0.0, m2_sum = 0.0, m2_sq = 0.0;
        for (std::uint64_t i = 0; i < v.sample_paths; ++i) {
            const SamplePath path = sample_path(nu, horizon, stream_seed(cfg.seed, 1000 + i));
            double prev = 0.0, m2 = 0.0;
            for (const auto& e : path.events) {
                const double r = euclidean_norm(e.mark);
                if (!(r > 0.0) || r > 1.0) ++bad_marks;
                if (!(e.time > prev) || e.time > horizon) ++bad_times;
                prev = e.time;
                m2 += r * r;
            }
            const double c = static_cast<double>(path.events.size());
            count_sum += c;
            count_sq += c * c;
            m2_sum += m2;
            m2_sq += m2 * m2;
        }
        const double n = static_cast<double>(v.sample_paths);
        auto z_score = [n](double s, double s2, double expected) {
            if (n < 2.0) return 0.0;
            const double mean = s / n;
            const double se = std::sqrt(std::max(0.0, s2 / n - mean * mean) / (n - 1.0));
            return se > 0.0 ? (mean - expected) / se : (mean == expected ? 0.0 : kInfinity);
        };
        const double zc = z_score(count_sum, count_sq, nu.total_rate() * horizon);
        const double zm = z_score(m2_sum, m2_sq, nu.second_moment() * horizon);
        const std::uint64_t bad_stats = (std::abs(zc) > 4.0) + (std::abs(zm) > 4.0);
        const std::uint64_t bad = bad_marks + bad_times + bad_stats;
        result.violations += bad;
        rep["noise_model"] = {{"paths", v.sample_paths},
                              {"total_rate", nu.total_rate()},
                              {"second_moment", nu.second_moment()},
                              {"count_z_score", num(zc)},
                              {"second_moment_z_score", num(zm)},
                              {"mark_violations", bad_marks},
                              {"time_violations", bad_times},
                              {"violations", bad}};
    }

    rep["violations"] = result.violations;
    rep["passed"] = result.violations == 0;
    result.report = rep.dump(2) + "\n";
    out.write("verify.json", result.report);
    return result;
}

}  // namespace snls
