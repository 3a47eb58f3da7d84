#include "snls/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

namespace snls {

using nlohmann::json;

namespace {

std::string format_message(const std::string& field, int line, int column, const std::string& message) {
    std::ostringstream os;
    os << "config error";
    if (line > 0) {
        os << " at line " << line;
        if (column > 0) os << ", column " << column;
    }
    if (!field.empty()) os << " in field '" << field << "'";
    os << ": " << message;
    return os.str();
}

// Best-effort source line of a dotted key path: each component is searched
// for as a quoted key after the position of its parent.
int locate_line(const std::string& text, const std::string& path) {
    std::size_t pos = 0;
    std::size_t found = std::string::npos;
    std::stringstream ss(path);
    std::string part;
    while (std::getline(ss, part, '.')) {
        const auto bracket = part.find('[');
        const std::string key = part.substr(0, bracket);
        const std::size_t at = text.find("\"" + key + "\"", pos);
        if (at == std::string::npos) break;
        found = at;
        pos = at + key.size() + 2;
    }
    if (found == std::string::npos) return 0;
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(found), '\n'));
}

class Section {
public:
    Section(const json& node, std::string path, const std::string& text)
        : node_(node), path_(std::move(path)), text_(text) {
        if (!node_.is_object()) fail(path_, "expected an object");
    }

    [[noreturn]] void fail(const std::string& field, const std::string& message) const {
        throw ConfigError(field, locate_line(text_, field), 0, message);
    }
    std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    bool has(const std::string& key) {
        used_.insert(key);
        return node_.contains(key);
    }
    const json& raw(const std::string& key) {
        used_.insert(key);
        return node_.at(key);
    }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        return as_number(node_.at(key), child(key));
    }
    double as_number(const json& v, const std::string& field) const {
        if (!v.is_number()) fail(field, "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) fail(field, "must be finite");
        return x;
    }
    long integer(const std::string& key, long fallback) {
        if (!has(key)) return fallback;
        const json& v = node_.at(key);
        if (!v.is_number_integer()) fail(child(key), "expected an integer");
        return v.get<long>();
    }
    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        const json& v = node_.at(key);
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
            fail(child(key), "expected a non-negative integer");
        return v.get<std::uint64_t>();
    }
    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = node_.at(key);
        if (!v.is_boolean()) fail(child(key), "expected true or false");
        return v.get<bool>();
    }
    std::string string(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        const json& v = node_.at(key);
        if (!v.is_string()) fail(child(key), "expected a string");
        return v.get<std::string>();
    }
    std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
        if (!has(key)) return fallback;
        const json& v = node_.at(key);
        if (!v.is_array()) fail(child(key), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], child(key) + "[" + std::to_string(i) + "]"));
        return out;
    }

    /// Rejects keys that were never queried (typos would otherwise be silently ignored).
    void finish() const {
        for (auto it = node_.begin(); it != node_.end(); ++it)
            if (!used_.count(it.key())) fail(child(it.key()), "unknown key");
    }

    const std::string& text() const { return text_; }

private:
    const json& node_;
    std::string path_;
    const std::string& text_;
    std::set<std::string> used_;
};

const json& empty_object() {
    static const json e = json::object();
    return e;
}

// Accepts a number or a string "<k>pi" / "pi".
double length_value(Section& s, const std::string& key, double fallback) {
    if (!s.has(key)) return fallback;
    const json& v = s.raw(key);
    if (v.is_string()) {
        std::string str = v.get<std::string>();
        if (str.size() >= 2 && str.substr(str.size() - 2) == "pi") {
            const std::string head = str.substr(0, str.size() - 2);
            double factor = 1.0;
            if (!head.empty()) {
                char* end = nullptr;
                factor = std::strtod(head.c_str(), &end);
                if (end == head.c_str() || *end != '\0') s.fail(s.child(key), "expected a number or '<k>pi'");
            }
            return factor * std::numbers::pi;
        }
        s.fail(s.child(key), "expected a number or '<k>pi'");
    }
    return s.as_number(v, s.child(key));
}

template <class F>
auto guarded(const Section& s, const std::string& field, F&& build) -> decltype(build()) {
    try {
        return build();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        s.fail(field, e.what());
    }
}

CoefficientFamily parse_family(const json& node, const std::string& path, const std::string& text, json& canon) {
    Section s(node, path, text);
    const std::string family = s.string("family", "");
    CoefficientFamily out;
    if (family == "constant") {
        const double c = s.number("c", 1.0);
        out = ConstantCoefficient{c};
        canon = {{"family", family}, {"c", c}};
    } else if (family == "rational") {
        const double a = s.number("a", 1.0);
        const double b = s.number("b", 1.0);
        if (b < 0.0) s.fail(s.child("b"), "must be >= 0");
        out = RationalCoefficient{a, b};
        canon = {{"family", family}, {"a", a}, {"b", b}};
    } else if (family == "saturating") {
        const double a = s.number("a", 1.0);
        out = SaturatingCoefficient{a};
        canon = {{"family", family}, {"a", a}};
    } else {
        s.fail(s.child("family"), "expected one of constant, rational, saturating");
    }
    s.finish();
    return out;
}

LevyMeasure parse_measure(const json& node, const std::string& path, const std::string& text, json& canon) {
    Section s(node, path, text);
    const std::string kind = s.string("kind", "atoms");
    if (kind == "atoms") {
        if (!s.has("atoms")) s.fail(s.child("atoms"), "missing");
        const json& list = s.raw("atoms");
        if (!list.is_array() || list.empty()) s.fail(s.child("atoms"), "expected a non-empty array");
        FiniteAtoms atoms;
        json catoms = json::array();
        int dim = -1;
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string apath = s.child("atoms") + "[" + std::to_string(i) + "]";
            Section a(list[i], apath, text);
            if (!a.has("mark")) a.fail(a.child("mark"), "missing");
            const Mark mark = a.numbers("mark", {});
            if (mark.empty()) a.fail(a.child("mark"), "must not be empty");
            if (dim >= 0 && static_cast<int>(mark.size()) != dim) a.fail(a.child("mark"), "inconsistent mark dimension");
            dim = static_cast<int>(mark.size());
            const double n = euclidean_norm(mark);
            if (!(n > 0.0) || n > 1.0) a.fail(a.child("mark"), "mark must satisfy 0 < |z| <= 1");
            if (!a.has("rate")) a.fail(a.child("rate"), "missing");
            const double rate = a.number("rate", 0.0);
            if (!(rate > 0.0)) a.fail(a.child("rate"), "must be > 0");
            a.finish();
            atoms.atoms.push_back({mark, rate});
            catoms.push_back({{"mark", mark}, {"rate", rate}});
        }
        s.finish();
        canon = {{"kind", kind}, {"atoms", catoms}};
        return guarded(s, path, [&] { return LevyMeasure(dim, std::move(atoms)); });
    }
    if (kind == "radial") {
        const long dim = s.integer("dimension", 1);
        const double alpha = s.number("alpha", 0.5);
        const double eps = s.number("epsilon", 0.25);
        const double scale = s.number("scale", 1.0);
        if (dim < 1) s.fail(s.child("dimension"), "must be >= 1");
        if (!(alpha > 0.0 && alpha < 2.0)) s.fail(s.child("alpha"), "must lie in (0, 2)");
        if (!(eps > 0.0 && eps < 1.0)) s.fail(s.child("epsilon"), "must lie in (0, 1)");
        if (!(scale > 0.0)) s.fail(s.child("scale"), "must be > 0");
        s.finish();
        canon = {{"kind", kind}, {"dimension", dim}, {"alpha", alpha}, {"epsilon", eps}, {"scale", scale}};
        return guarded(s, path, [&] {
            return LevyMeasure(static_cast<int>(dim), TruncatedRadial{alpha, eps, scale});
        });
    }
    s.fail(s.child("kind"), "expected atoms or radial");
}

json default_noise() {
    return json::parse(R"({
        "coeffs": [{"family": "rational", "a": 1.0, "b": 1.0}],
        "measure": {"kind": "atoms", "atoms": [{"mark": [0.5], "rate": 2.5}, {"mark": [-0.5], "rate": 2.5}]}
    })");
}

}  // namespace

ConfigError::ConfigError(std::string field, int line, int column, const std::string& message)
    : Error(format_message(field, line, column, message)), field_(std::move(field)), line_(line), column_(column) {}

std::string to_string(Observable o) {
    switch (o) {
        case Observable::mass: return "mass";
        case Observable::lr_norm: return "lr_norm";
        case Observable::y_norm: return "y_norm";
        case Observable::mixed_norm: return "mixed_norm";
    }
    return "?";
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string ExperimentConfig::hash() const { return fnv1a_hex(canonical); }

ComplexField make_initial(const Grid& grid, const InitialData& data) {
    const int n = grid.dimension();
    const int N = grid.points_per_axis();
    ComplexField u(grid);
    auto component = [](const std::vector<double>& v, int axis) { return axis < static_cast<int>(v.size()) ? v[axis] : 0.0; };
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        double r2 = 0.0, phase = 0.0;
        std::size_t rest = idx;
        for (int axis = n - 1; axis >= 0; --axis) {
            const int i = static_cast<int>(rest % N);
            rest /= N;
            const double x = grid.coordinate(i);
            if (data.kind == InitialData::Kind::gaussian) {
                const double d = x - component(data.center, axis);
                r2 += d * d;
                phase += component(data.momentum, axis) * x;
            } else {
                const int m = axis < static_cast<int>(data.mode.size()) ? data.mode[axis] : 0;
                phase += m * std::numbers::pi / grid.half_length() * x;
            }
        }
        const double env = data.kind == InitialData::Kind::gaussian ? std::exp(-r2 / (data.width * data.width)) : 1.0;
        u[idx] = data.amplitude * env * std::polar(1.0, phase);
    }
    return u;
}

std::optional<ComplexField> plane_wave_exact(const SolverConfig& cfg, const InitialData& data, const SamplePath& path,
                                             double t) {
    if (data.kind != InitialData::Kind::plane_wave || cfg.truncation_radius) return std::nullopt;
    const double a = data.amplitude;
    double k2 = 0.0;
    for (int m : data.mode) {
        const double k = m * std::numbers::pi / cfg.grid.half_length();
        k2 += k * k;
    }
    const double theta = a * a;
    const Mark mu = cfg.measure.first_moment();
    const Mark sums = path.mark_sum_until(t, cfg.measure.mark_dimension());
    double noise_phase = 0.0;
    for (int j = 0; j < cfg.coeffs.count(); ++j) noise_phase += cfg.coeffs.value(j, theta) * (sums[j] - mu[j] * t);
    const double omega_t = (k2 + cfg.lambda * std::pow(std::abs(a), 2.0 * cfg.sigma)) * t + noise_phase;
    ComplexField u = make_initial(cfg.grid, data);
    u *= std::polar(1.0, -omega_t);
    return u;
}

ExperimentConfig parse_config(const std::string& text, std::optional<std::uint64_t> seed_override) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t byte = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
        const std::size_t nl = text.rfind('\n', byte == 0 ? 0 : byte - 1);
        const int column = static_cast<int>(byte - (nl == std::string::npos || byte == 0 ? 0 : nl + 1)) + 1;
        throw ConfigError("", line, column, "invalid JSON");
    }
    Section top(root, "", text);
    auto section = [&](const std::string& key) -> const json& {
        return top.has(key) ? top.raw(key) : empty_object();
    };
    json canon;

    // grid
    Section g(section("grid"), "grid", text);
    const long n = g.integer("n", 1);
    const long points = g.integer("points", 512);
    const double half_length = length_value(g, "half_length", 8.0 * std::numbers::pi);
    g.finish();
    if (n != 1 && n != 2) g.fail("grid.n", "must be 1 or 2");
    if (points < 8 || (points & (points - 1)) != 0) g.fail("grid.points", "must be a power of two >= 8");
    if (!(half_length > 0.0)) g.fail("grid.half_length", "must be > 0");
    const Grid grid = guarded(g, "grid", [&] { return Grid(static_cast<int>(n), static_cast<int>(points), half_length); });
    canon["grid"] = {{"n", n}, {"points", points}, {"half_length", half_length}};

    // dynamics
    Section d(section("dynamics"), "dynamics", text);
    const double lambda = d.number("lambda", 1.0);
    const double sigma = d.number("sigma", 1.0);
    std::optional<double> radius;
    if (d.has("truncation_R") && !d.raw("truncation_R").is_null()) radius = d.number("truncation_R", 0.0);
    d.finish();
    if (!(sigma > 0.0 && sigma < 2.0 / static_cast<double>(n))) d.fail("dynamics.sigma", "must satisfy 0 < sigma < 2/n");
    if (radius && !(*radius >= 1.0)) d.fail("dynamics.truncation_R", "must be >= 1");
    canon["dynamics"] = {{"lambda", lambda}, {"sigma", sigma}};
    if (radius) canon["dynamics"]["truncation_R"] = *radius;

    // initial data
    Section in(section("initial"), "initial", text);
    InitialData init;
    const std::string kind = in.string("kind", "gaussian");
    init.amplitude = in.number("amplitude", 1.0);
    if (kind == "gaussian") {
        init.kind = InitialData::Kind::gaussian;
        init.width = in.number("width", 1.0);
        init.center = in.numbers("center", std::vector<double>(n, 0.0));
        init.momentum = in.numbers("momentum", std::vector<double>(n, 0.0));
        if (!(init.width > 0.0)) in.fail("initial.width", "must be > 0");
        if (static_cast<long>(init.center.size()) != n) in.fail("initial.center", "needs one entry per axis");
        if (static_cast<long>(init.momentum.size()) != n) in.fail("initial.momentum", "needs one entry per axis");
        canon["initial"] = {{"kind", kind}, {"amplitude", init.amplitude}, {"width", init.width},
                            {"center", init.center}, {"momentum", init.momentum}};
    } else if (kind == "plane_wave") {
        init.kind = InitialData::Kind::plane_wave;
        const std::vector<double> mode = in.numbers("mode", std::vector<double>(n, 1.0));
        if (static_cast<long>(mode.size()) != n) in.fail("initial.mode", "needs one entry per axis");
        for (double m : mode) {
            if (m != std::round(m) || std::abs(m) >= points / 2.0) in.fail("initial.mode", "entries must be integers in (-N/2, N/2)");
            init.mode.push_back(static_cast<int>(m));
        }
        canon["initial"] = {{"kind", kind}, {"amplitude", init.amplitude}, {"mode", init.mode}};
    } else {
        in.fail("initial.kind", "expected gaussian or plane_wave");
    }
    in.finish();

    // noise
    const json defaults = default_noise();
    Section nz(section("noise"), "noise", text);
    const json& coeff_list = nz.has("coeffs") ? nz.raw("coeffs") : defaults["coeffs"];
    const json& measure_node = nz.has("measure") ? nz.raw("measure") : defaults["measure"];
    nz.finish();
    if (!coeff_list.is_array() || coeff_list.empty()) nz.fail("noise.coeffs", "expected a non-empty array");
    std::vector<CoefficientFamily> families;
    json ccoeffs = json::array();
    for (std::size_t j = 0; j < coeff_list.size(); ++j) {
        json c;
        families.push_back(parse_family(coeff_list[j], "noise.coeffs[" + std::to_string(j) + "]", text, c));
        ccoeffs.push_back(c);
    }
    json cmeasure;
    LevyMeasure measure = parse_measure(measure_node, "noise.measure", text, cmeasure);
    if (measure.mark_dimension() != static_cast<int>(families.size()))
        nz.fail("noise.coeffs", "coefficient count must equal the mark dimension of noise.measure");
    canon["noise"] = {{"coeffs", ccoeffs}, {"measure", cmeasure}};

    // run
    Section run(section("run"), "run", text);
    const double horizon = run.number("T", 1.0);
    const double dt = run.number("dt", 1e-3);
    std::uint64_t seed = run.unsigned_integer("seed", 1);
    const long save_every = run.integer("save_every", 10);
    run.finish();
    if (!(horizon > 0.0)) run.fail("run.T", "must be > 0");
    if (!(dt > 0.0)) run.fail("run.dt", "must be > 0");
    guarded(run, "run.dt", [&] { return step_count(horizon, dt); });
    if (save_every < 1) run.fail("run.save_every", "must be >= 1");
    if (seed_override) seed = *seed_override;
    canon["run"] = {{"T", horizon}, {"dt", dt}, {"seed", seed}, {"save_every", save_every}};

    ExperimentConfig cfg{SolverConfig{grid, horizon, dt, lambda, sigma, NoiseCoefficients(std::move(families)),
                                      std::move(measure), static_cast<int>(save_every), radius},
                         init, seed, 1, {}, {}, {}, {}, {}};
    guarded(run, "run", [&] {
        cfg.solver.validate();
        return 0;
    });

    // ensemble
    Section en(section("ensemble"), "ensemble", text);
    const long paths = en.integer("paths", 64);
    if (paths < 1) en.fail("ensemble.paths", "must be >= 1");
    cfg.paths = static_cast<int>(paths);
    std::vector<std::string> names = {"mass", "lr_norm", "y_norm", "mixed_norm"};
    if (en.has("observables")) {
        const json& obs = en.raw("observables");
        if (!obs.is_array() || obs.empty()) en.fail("ensemble.observables", "expected a non-empty array");
        names.clear();
        for (const auto& o : obs) {
            if (!o.is_string()) en.fail("ensemble.observables", "expected strings");
            names.push_back(o.get<std::string>());
        }
    }
    en.finish();
    std::set<std::string> seen;
    for (const auto& name : names) {
        if (!seen.insert(name).second) en.fail("ensemble.observables", "duplicate observable '" + name + "'");
        if (name == "mass") cfg.observables.push_back(Observable::mass);
        else if (name == "lr_norm") cfg.observables.push_back(Observable::lr_norm);
        else if (name == "y_norm") cfg.observables.push_back(Observable::y_norm);
        else if (name == "mixed_norm") cfg.observables.push_back(Observable::mixed_norm);
        else en.fail("ensemble.observables", "unknown observable '" + name + "'");
    }
    canon["ensemble"] = {{"paths", paths}, {"observables", names}};

    // picard
    Section pc(section("picard"), "picard", text);
    cfg.picard.horizon = pc.number("T0", 0.05);
    cfg.picard.radius = pc.number("R", 10.0);
    cfg.picard.iterations = static_cast<int>(pc.integer("iterations", 8));
    cfg.picard.dt = pc.number("dt", std::min(dt, 1e-3));
    pc.finish();
    if (!(cfg.picard.horizon > 0.0)) pc.fail("picard.T0", "must be > 0");
    if (!(cfg.picard.radius >= 1.0)) pc.fail("picard.R", "must be >= 1");
    if (cfg.picard.iterations < 2) pc.fail("picard.iterations", "must be >= 2");
    if (!(cfg.picard.dt > 0.0)) pc.fail("picard.dt", "must be > 0");
    guarded(pc, "picard.dt", [&] { return step_count(cfg.picard.horizon, cfg.picard.dt); });
    canon["picard"] = {{"T0", cfg.picard.horizon}, {"R", cfg.picard.radius}, {"iterations", cfg.picard.iterations},
                       {"dt", cfg.picard.dt}};

    // probe
    Section pr(section("probe"), "probe", text);
    auto& p = cfg.probe;
    p.horizon = pr.number("T", 1.0);
    p.dt = pr.number("dt", 1e-2);
    p.trials = static_cast<int>(pr.integer("trials", 100));
    p.q = pr.number("q", 2.0);
    p.r = pr.number("r", 2.0 * sigma + 2.0);
    p.source_r = pr.number("source_r", 2.0);
    p.forcing_mode = static_cast<int>(pr.integer("forcing_mode", 1));
    const std::string modulation = pr.string("modulation", "linear");
    p.scale = pr.number("scale", 1.0);
    p.profile_width = pr.number("profile_width", 1.0);
    p.stability = pr.boolean("stability", true);
    pr.finish();
    if (!(p.horizon > 0.0)) pr.fail("probe.T", "must be > 0");
    if (!(p.dt > 0.0)) pr.fail("probe.dt", "must be > 0");
    guarded(pr, "probe.dt", [&] { return step_count(p.horizon, p.dt); });
    if (p.trials < 10) pr.fail("probe.trials", "must be >= 10");
    if (!(p.q >= 2.0)) pr.fail("probe.q", "must be >= 2");
    guarded(pr, "probe.r", [&] { return make_admissible_pair(static_cast<int>(n), p.r); });
    guarded(pr, "probe.source_r", [&] { return make_admissible_pair(static_cast<int>(n), p.source_r); });
    if (std::abs(p.forcing_mode) >= points / 2) pr.fail("probe.forcing_mode", "must lie in (-N/2, N/2)");
    if (modulation == "linear") p.modulation = MarkModulation::linear;
    else if (modulation == "quadratic") p.modulation = MarkModulation::quadratic;
    else pr.fail("probe.modulation", "expected linear or quadratic");
    if (!(p.profile_width > 0.0)) pr.fail("probe.profile_width", "must be > 0");
    canon["probe"] = {{"T", p.horizon}, {"dt", p.dt}, {"trials", p.trials}, {"q", p.q}, {"r", p.r},
                      {"source_r", p.source_r}, {"forcing_mode", p.forcing_mode}, {"modulation", modulation},
                      {"scale", p.scale}, {"profile_width", p.profile_width}, {"stability", p.stability}};

    // verify
    Section vf(section("verify"), "verify", text);
    auto& v = cfg.verify;
    v.jump_trials = vf.unsigned_integer("jump_trials", v.jump_trials);
    v.jump_radius = vf.number("jump_radius", v.jump_radius);
    v.flow_trials = vf.unsigned_integer("flow_trials", v.flow_trials);
    v.flow_radius = vf.number("flow_radius", v.flow_radius);
    v.lipschitz_pairs = vf.unsigned_integer("lipschitz_pairs", v.lipschitz_pairs);
    v.lipschitz_radius = vf.number("lipschitz_radius", v.lipschitz_radius);
    v.cutoff_pairs = vf.unsigned_integer("cutoff_pairs", v.cutoff_pairs);
    v.sample_paths = vf.unsigned_integer("sample_paths", v.sample_paths);
    vf.finish();
    for (auto [key, value] : {std::pair{"jump_radius", v.jump_radius}, std::pair{"flow_radius", v.flow_radius},
                              std::pair{"lipschitz_radius", v.lipschitz_radius}})
        if (!(value > 0.0)) vf.fail(std::string("verify.") + key, "must be > 0");
    canon["verify"] = {{"jump_trials", v.jump_trials},         {"jump_radius", v.jump_radius},
                       {"flow_trials", v.flow_trials},         {"flow_radius", v.flow_radius},
                       {"lipschitz_pairs", v.lipschitz_pairs}, {"lipschitz_radius", v.lipschitz_radius},
                       {"cutoff_pairs", v.cutoff_pairs},       {"sample_paths", v.sample_paths}};

    top.finish();
    cfg.canonical = canon.dump();
    return cfg;
}

ExperimentConfig load_config(const std::string& path, std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", 0, 0, "cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), seed_override);
}

}  // namespace snls
