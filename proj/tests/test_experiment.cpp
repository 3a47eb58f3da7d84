#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "helpers.hpp"
#include "snls/experiment.hpp"

using namespace snls;
namespace fs = std::filesystem;

namespace {

const char* kSmall = R"({
  "grid": {"n": 1, "points": 64, "half_length": "pi"},
  "dynamics": {"lambda": 1.0, "sigma": 1.0},
  "initial": {"kind": "plane_wave", "amplitude": 0.5, "mode": [2]},
  "noise": {
    "coeffs": [{"family": "rational", "a": 1.0, "b": 1.0}],
    "measure": {"kind": "atoms", "atoms": [{"mark": [0.5], "rate": 2.5}, {"mark": [-0.5], "rate": 2.5}]}
  },
  "run": {"T": 0.2, "dt": 0.001, "seed": 7, "save_every": 20},
  "ensemble": {"paths": 6, "observables": ["mass", "lr_norm", "y_norm"]},
  "picard": {"T0": 0.02, "R": 10, "iterations": 4, "dt": 0.001},
  "probe": {"T": 0.2, "dt": 0.01, "trials": 10, "stability": false},
  "verify": {"jump_trials": 2000, "flow_trials": 200, "lipschitz_pairs": 5000, "cutoff_pairs": 2000, "sample_paths": 200}
})";

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("snls_test_" + std::to_string(::getpid()) + "_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SNLS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string with(const std::string& text, const std::string& from, const std::string& to) {
    std::string s = text;
    const auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    s.replace(pos, from.size(), to);
    return s;
}

}  // namespace

TEST_CASE("configuration defaults") {
    const ExperimentConfig c = parse_config("{}");
    CHECK(c.solver.grid.dimension() == 1);
    CHECK(c.solver.grid.points_per_axis() == 512);
    CHECK(c.solver.grid.half_length() == doctest::Approx(8.0 * std::numbers::pi));
    CHECK(c.solver.lambda == 1.0);
    CHECK(c.solver.sigma == 1.0);
    CHECK(c.solver.coeffs.count() == 1);
    CHECK(c.solver.measure.total_rate() == doctest::Approx(5.0));
    CHECK(c.solver.measure.first_moment()[0] == 0.0);
    CHECK_FALSE(c.solver.truncation_radius);
    CHECK(c.verify.lipschitz_pairs == 1000000);
}

TEST_CASE("configuration parsing") {
    const ExperimentConfig c = parse_config(kSmall);
    CHECK(c.solver.grid.half_length() == doctest::Approx(std::numbers::pi));
    CHECK(c.solver.horizon == 0.2);
    CHECK(c.seed == 7);
    CHECK(c.paths == 6);
    CHECK(c.observables.size() == 3);
    CHECK(c.initial.kind == InitialData::Kind::plane_wave);
    CHECK(c.picard.iterations == 4);
    CHECK_FALSE(c.probe.stability);
    CHECK(c.probe.r == doctest::Approx(4.0));

    SUBCASE("seed override changes the hash, formatting does not") {
        const ExperimentConfig o = parse_config(kSmall, 99);
        CHECK(o.seed == 99);
        CHECK(o.hash() != c.hash());
        std::string compact = nlohmann::json::parse(kSmall).dump();
        CHECK(parse_config(compact).hash() == c.hash());
        CHECK(c.hash().size() == 16);
    }
    SUBCASE("explicit defaults hash like omitted ones") {
        CHECK(parse_config(R"({"dynamics": {"lambda": 1.0}})").hash() == parse_config("{}").hash());
    }
    SUBCASE("radial measure and two-dimensional grid") {
        const ExperimentConfig r = parse_config(R"({
          "grid": {"n": 2, "points": 32, "half_length": 5},
          "dynamics": {"sigma": 0.5, "truncation_R": 3},
          "noise": {"coeffs": [{"family": "constant", "c": 0.5}, {"family": "saturating", "a": 1}],
                    "measure": {"kind": "radial", "dimension": 2, "alpha": 0.5, "epsilon": 0.25, "scale": 1}}
        })");
        CHECK(r.solver.grid.dimension() == 2);
        CHECK(r.solver.measure.mark_dimension() == 2);
        REQUIRE(r.solver.truncation_radius);
        CHECK(*r.solver.truncation_radius == 3.0);
    }
}

TEST_CASE("configuration errors carry field and line") {
    auto error_of = [](const std::string& text) -> ConfigError {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return e;
        }
        FAIL("expected a ConfigError");
        return ConfigError("", 0, 0, "");
    };
    SUBCASE("syntax") {
        const ConfigError e = error_of("{\n  \"grid\": {\n    \"points\": 64,,\n  }\n}");
        CHECK(e.line() == 3);
        CHECK(e.column() > 0);
    }
    SUBCASE("wrong type") {
        const ConfigError e = error_of("{\n  \"run\": {\n    \"dt\": \"small\"\n  }\n}");
        CHECK(e.field() == "run.dt");
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("run.dt") != std::string::npos);
    }
    SUBCASE("unknown key") {
        const ConfigError e = error_of("{\n  \"dynamics\": {\n    \"lamda\": 1\n  }\n}");
        CHECK(e.field() == "dynamics.lamda");
        CHECK(e.line() == 3);
    }
    SUBCASE("out of range values") {
        CHECK(error_of(R"({"dynamics": {"sigma": 3}})").field().rfind("dynamics", 0) == 0);
        CHECK(error_of(R"({"grid": {"points": 100}})").field().rfind("grid", 0) == 0);
        CHECK(error_of(R"({"noise": {"coeffs": []}})").field().rfind("noise", 0) == 0);
        CHECK(error_of(R"({"noise": {"coeffs": [{"family": "rational", "a": 1, "b": -1}]}})").field().rfind("noise", 0) == 0);
        CHECK(error_of(R"({"run": {"T": 1, "dt": 0.3}})").field().rfind("run", 0) == 0);
        CHECK_FALSE(error_of(R"({"ensemble": {"observables": ["energy"]}})").field().empty());
    }
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("ensemble") {
    ExperimentConfig c = parse_config(kSmall);
    c.observables = {Observable::mass, Observable::lr_norm, Observable::y_norm, Observable::mixed_norm};
    SUBCASE("one path equals a direct evolution") {
        c.paths = 1;
        const EnsembleSummary s = run_ensemble(c, 1);
        REQUIRE(s.paths.size() == 1);
        const SamplePath path = sample_path(c.solver.measure, c.solver.horizon, stream_seed(c.seed, 0));
        const EvolveResult r = evolve(make_initial(c.solver.grid, c.initial), c.solver, path);
        CHECK(s.paths[0].seed == stream_seed(c.seed, 0));
        CHECK(s.paths[0].jumps == path.events.size());
        CHECK(s.paths[0].terminal.at(Observable::mass) == r.reports.back().mass);
        CHECK(s.paths[0].terminal.at(Observable::y_norm) == r.reports.back().y_norm);
        CHECK(s.stats.at(Observable::mass).variance == 0.0);
    }
    SUBCASE("mass is the same on every path") {
        const EnsembleSummary s = run_ensemble(c, 2);
        CHECK(s.failures == 0);
        CHECK(s.stats.at(Observable::mass).variance < 1e-22);
        CHECK(s.stats.at(Observable::y_norm).max >= s.stats.at(Observable::y_norm).min);
    }
    SUBCASE("independent of the thread count") {
        const EnsembleSummary a = run_ensemble(c, 1), b = run_ensemble(c, 4);
        CHECK(summary_json(a) == summary_json(b));
        CHECK(paths_csv(a) == paths_csv(b));
    }
    SUBCASE("statistics against a direct computation") {
        const EnsembleSummary s = run_ensemble(c, 3);
        double mean = 0.0;
        for (const auto& p : s.paths) mean += p.terminal.at(Observable::lr_norm);
        mean /= s.paths.size();
        double var = 0.0;
        for (const auto& p : s.paths) var += std::pow(p.terminal.at(Observable::lr_norm) - mean, 2);
        var /= s.paths.size() - 1;
        CHECK(s.stats.at(Observable::lr_norm).mean == doctest::Approx(mean).epsilon(1e-14));
        CHECK(s.stats.at(Observable::lr_norm).variance == doctest::Approx(var).epsilon(1e-10));
    }
}

TEST_CASE("output files") {
    const ExperimentConfig c = parse_config(kSmall);
    const SamplePath path = testing::manual_path(1.0, {{0.25, {0.5}}, {0.75, {-0.5}}});
    const std::string ev = events_csv(path, 1, c.hash());
    CHECK(ev.rfind("# config_hash=" + c.hash() + "\n", 0) == 0);
    CHECK(ev.find("time,z_1\n0.25,0.5\n0.75,-0.5\n") != std::string::npos);
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1e-300) == "1e-300");
    CHECK(std::stod(format_number(std::numbers::pi)) == std::numbers::pi);

    SUBCASE("manifest guards against mixing runs") {
        const fs::path dir = scratch("manifest");
        { const OutputDirectory out(dir, c.hash(), false); }
        CHECK_NOTHROW(OutputDirectory(dir, c.hash(), false));
        CHECK_THROWS_AS(OutputDirectory(dir, "0000000000000000", false), OutputConflict);
        CHECK_NOTHROW(OutputDirectory(dir, "0000000000000000", true));
        CHECK(slurp(dir / "manifest.json").find("0000000000000000") != std::string::npos);
        fs::remove_all(dir);
    }
}

TEST_CASE("command line") {
    const fs::path dir = scratch("cli");
    const fs::path cfg = dir / "small.json";
    std::ofstream(cfg) << kSmall;
    const std::string common = cfg.string() + " --out-dir " + (dir / "out").string();

    SUBCASE("simulate tracks the exact plane wave") {
        REQUIRE(run_cli("simulate " + common) == 0);
        for (const char* f : {"trajectory.csv", "reports.csv", "events.csv", "simulate.json", "reference.csv", "manifest.json"})
            CHECK(fs::exists(dir / "out" / f));
        const auto report = nlohmann::json::parse(slurp(dir / "out" / "simulate.json"));
        std::istringstream ref(slurp(dir / "out" / "reference.csv"));
        std::string line;
        double worst = 0.0;
        while (std::getline(ref, line))
            if (!line.empty() && std::isdigit(static_cast<unsigned char>(line[0])))
                worst = std::max(worst, std::stod(line.substr(line.find(',') + 1)));
        CHECK(worst < 1e-11);
        CHECK(report.is_object());
    }
    SUBCASE("refuses to overwrite a different configuration") {
        REQUIRE(run_cli("simulate " + common) == 0);
        CHECK(run_cli("simulate " + common + " --seed 8") == 2);
        CHECK(run_cli("simulate " + common + " --seed 8 --force") == 0);
    }
    SUBCASE("other subcommands") {
        CHECK(run_cli("ensemble --config " + cfg.string() + " --out-dir " + (dir / "e").string() + " --threads 2") == 0);
        CHECK(fs::exists(dir / "e" / "summary.json"));
        CHECK(run_cli("picard " + cfg.string() + " --out-dir " + (dir / "p").string()) == 0);
        CHECK(fs::exists(dir / "p" / "picard.csv"));
        CHECK(run_cli("probe-strichartz " + cfg.string() + " --out-dir " + (dir / "s").string()) == 0);
        CHECK(fs::exists(dir / "s" / "probe.json"));
        CHECK(run_cli("verify-lemmas " + cfg.string() + " --out-dir " + (dir / "v").string()) == 0);
        const auto v = nlohmann::json::parse(slurp(dir / "v" / "verify.json"));
        CHECK(v.is_object());
    }
    SUBCASE("configuration errors exit with 2") {
        const fs::path bad = dir / "bad.json";
        std::ofstream(bad) << "{\n  \"run\": {\"dt\": -1}\n}";
        CHECK(run_cli("simulate " + bad.string() + " --out-dir " + (dir / "b").string()) == 2);
        CHECK(run_cli("simulate /nonexistent.json --out-dir " + (dir / "b").string()) == 2);
        CHECK(run_cli("simulate --out-dir " + (dir / "b").string()) == 2);
        CHECK(run_cli("simulate " + cfg.string() + " --bogus") == 2);
    }
    SUBCASE("numerical failure exits with 3") {
        const fs::path blow = dir / "blow.json";
        std::ofstream(blow) << with(kSmall, R"("amplitude": 0.5)", R"("amplitude": 1e200)");
        CHECK(run_cli("simulate " + blow.string() + " --out-dir " + (dir / "x").string()) == 3);
    }
    fs::remove_all(dir);
}

TEST_CASE("shipped default configuration") {
    const fs::path dir = scratch("default");
    const std::string cfg = std::string(SNLS_CONFIG_DIR) + "/default.json";
    CHECK(run_cli("verify-lemmas " + cfg + " --out-dir " + (dir / "v").string()) == 0);
    REQUIRE(run_cli("ensemble " + cfg + " --out-dir " + (dir / "e").string()) == 0);
    const auto s = nlohmann::json::parse(slurp(dir / "e" / "summary.json"));
    CHECK(s["paths"].get<int>() == 64);
    CHECK(s["failures"].get<int>() == 0);
    CHECK(s["max_relative_mass_drift"].get<double>() <= 1e-11);
    CHECK(s["config_hash"].get<std::string>() == load_config(cfg).hash());
    fs::remove_all(dir);
}
