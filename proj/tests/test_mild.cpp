#include <doctest.h>

#include "helpers.hpp"
#include "snls/errors.hpp"
#include "snls/marcus.hpp"
#include "snls/mild.hpp"

using namespace snls;
using testing::max_abs_diff;
using testing::mode_field;

namespace {

// u(s) = A e_k held fixed on a uniform grid.
Trajectory frozen(const ComplexField& f, double horizon, double dt) {
    Trajectory t(f.grid());
    const long n = step_count(horizon, dt);
    for (long k = 0; k <= n; ++k) t.append(k == n ? horizon : k * dt, f);
    return t;
}

// int_0^t e^{-i k^2 (t - s)} ds
Complex kernel(double k2, double t) { return (1.0 - std::polar(1.0, -k2 * t)) / Complex(0.0, k2); }

}  // namespace

TEST_CASE("closed forms for a frozen single mode") {
    const Grid g(1, 32, std::numbers::pi);
    const FreePropagator prop(g);
    const int mode = 2;
    const double A = 0.7, T = 0.5, dt = 1e-4, k2 = mode * mode;
    const ComplexField e = mode_field(g, mode, A);
    const Trajectory u = frozen(e, T, dt);
    const double c = 1.3, rate = 2.0, z = 0.4;
    const SolverConfig cfg =
        testing::config(g, T, dt, -1.5, NoiseCoefficients({ConstantCoefficient{c}}), testing::symmetric_atoms(z, rate));
    const double kappa = 2.0 * rate * (std::cos(c * z) - 1.0);
    const double tol = 5.0 * k2 * dt;

    SUBCASE("nonlinear term") {
        const Trajectory p1 = psi1_trajectory(prop, u, cfg, std::nullopt);
        const Complex expect = Complex(0.0, 1.5 * A * A) * kernel(k2, T);
        CHECK(max_abs_diff(p1.fields().back(), expect * e) < tol);
        CHECK(max_abs_diff(psi1(u, cfg, std::nullopt, T), p1.fields().back()) < 1e-14);
    }
    SUBCASE("compensator of an empty path") {
        const Trajectory p2 = psi2_trajectory(prop, u, testing::empty_path(T), cfg);
        CHECK(max_abs_diff(p2.fields().back(), -kappa * kernel(k2, T) * e) < tol);
    }
    SUBCASE("second-order term") {
        const Trajectory p3 = psi3_trajectory(prop, u, cfg);
        CHECK(max_abs_diff(p3.fields().back(), kappa * kernel(k2, T) * e) < tol);
        const Trajectory p2 = psi2_trajectory(prop, u, testing::empty_path(T), cfg);
        // with zero mean mark the two compensators cancel
        CHECK(l2_norm(p2.fields().back() + p3.fields().back()) < 1e-13);
    }
    SUBCASE("vanishing nonlinearity") {
        SolverConfig linear = cfg;
        linear.lambda = 0.0;
        CHECK(l2_norm(psi1_trajectory(prop, u, linear, std::nullopt).fields().back()) == 0.0);
    }
    SUBCASE("truncation weight") {
        // Y >= sup L2 = y0 > 2R below
        const double y0 = l2_norm(e);
        const Trajectory full = psi1_trajectory(prop, u, cfg, std::nullopt);
        const Trajectory off = psi1_trajectory(prop, u, cfg, 0.5 * y0 / 2.5);
        CHECK(l2_norm(off.fields().back()) == 0.0);
        const Trajectory on = psi1_trajectory(prop, u, cfg, 1e3);
        CHECK(max_abs_diff(on.fields().back(), full.fields().back()) == 0.0);
    }
}

TEST_CASE("zero field gives zero terms") {
    const Grid g(1, 32, 2.0);
    const FreePropagator prop(g);
    const SolverConfig cfg = testing::config(g, 0.1, 1e-2, 1.0, NoiseCoefficients({RationalCoefficient{1.0, 1.0}}),
                                             testing::symmetric_atoms());
    const Trajectory u = frozen(ComplexField(g), 0.1, 1e-2);
    CHECK(l2_norm(psi1_trajectory(prop, u, cfg, std::nullopt).fields().back()) == 0.0);
    CHECK(l2_norm(psi2_trajectory(prop, u, testing::empty_path(0.1), cfg).fields().back()) == 0.0);
    CHECK(l2_norm(psi3_trajectory(prop, u, cfg).fields().back()) == 0.0);
}

TEST_CASE("stochastic term: recursive and event-ordered sums agree") {
    const Grid g(1, 64, std::numbers::pi);
    const FreePropagator prop(g);
    const SolverConfig cfg = testing::config(g, 0.5, 1e-3, 1.0, NoiseCoefficients({RationalCoefficient{1.0, 1.0}}),
                                             LevyMeasure(1, FiniteAtoms{{{{0.5}, 6.0}, {{-0.3}, 4.0}}}));
    const SamplePath path = sample_path(cfg.measure, 0.5, 17);
    REQUIRE(path.events.size() >= 2);
    const Trajectory u = evolve(testing::gaussian(g), cfg, path).trajectory;
    const Trajectory rec = psi2_trajectory(prop, u, path, cfg);
    for (double t : {0.5, path.events[1].time, 0.25}) {
        const ComplexField direct = psi2_direct(prop, u, path, cfg, t);
        CHECK(max_abs_diff(rec.field(rec.index_at(t)), direct) < 1e-12);
    }
    SUBCASE("a single event contributes S_{t-s} G(z, u(s-))") {
        const SamplePath one = testing::manual_path(0.5, {{0.2, {0.5}}});
        const Trajectory v = evolve(testing::gaussian(g), cfg, one).trajectory;
        const ComplexField left = v.field(v.index_at(0.2) - 1);
        ComplexField g_field(g);
        for (std::size_t i = 0; i < g.size(); ++i) g_field[i] = jump_increment(std::vector<double>{0.5}, left[i], cfg.coeffs);
        const ComplexField with = psi2_direct(prop, v, one, cfg, 0.5);
        const ComplexField without = psi2_direct(prop, v, testing::manual_path(0.5, {{0.2, {0.0}}}), cfg, 0.5);
        CHECK(max_abs_diff(with - without, prop.step(g_field, 0.3)) < 1e-12);
    }
}

TEST_CASE("gamma map without nonlinearity or mean drift is the free flow") {
    const Grid g(1, 64, std::numbers::pi);
    const FreePropagator prop(g);
    const SolverConfig cfg = testing::config(g, 0.2, 1e-3, 0.0, NoiseCoefficients({ConstantCoefficient{0.8}}),
                                             testing::symmetric_atoms());
    const ComplexField u0 = testing::gaussian(g);
    const Trajectory u = frozen(testing::random_field(g, 4), 0.2, 1e-3);
    const Trajectory out = gamma_r(u, u0, testing::empty_path(0.2), cfg, 10.0);
    REQUIRE(out.size() == u.size());
    for (std::size_t k = 0; k < out.size(); k += 50) CHECK(max_abs_diff(out.field(k), prop.step(u0, out.time(k))) < 1e-12);
}

TEST_CASE("Picard iteration") {
    const Grid g(1, 64, 2.0 * std::numbers::pi);
    SUBCASE("linear noiseless problem is a fixed point at once") {
        const SolverConfig cfg = testing::config(g, 0.05, 1e-3, 0.0, NoiseCoefficients({ConstantCoefficient{1.0}}),
                                                 testing::symmetric_atoms(0.5, 1e-12));
        const auto it = picard(testing::gaussian(g), testing::empty_path(0.05), cfg, 10.0, 5);
        REQUIRE(it.size() >= 2);
        CHECK(std::isnan(it[0].y_distance));
        CHECK(it[1].y_distance < 1e-14);
    }
    SUBCASE("contracts and approaches the solver on a short interval") {
        const SolverConfig cfg = testing::config(g, 0.05, 5e-4, 1.0, NoiseCoefficients({RationalCoefficient{1.0, 1.0}}),
                                                 testing::symmetric_atoms());
        const SamplePath path = testing::manual_path(0.05, {{0.02, {0.5}}});
        const ComplexField u0 = testing::gaussian(g);
        const auto it = picard(u0, path, cfg, 10.0, 8);
        for (std::size_t k = 2; k < it.size(); ++k)
            if (std::isfinite(it[k].ratio)) CHECK(it[k].ratio < 0.5);
        CHECK(it.back().y_distance < 1e-10);
        const Trajectory solved = evolve_truncated(u0, cfg, path, 10.0).trajectory;
        const Trajectory diff = [&] {
            Trajectory d(g);
            for (std::size_t k = 0; k < solved.size(); ++k) d.append(solved.time(k), solved.field(k) - it.back().iterate.field(k));
            return d;
        }();
        CHECK(y_norm(diff, cfg.pair()) < 0.05 * y_norm(solved, cfg.pair()));
    }
    SUBCASE("diverges for large data without truncation") {
        const SolverConfig cfg = testing::config(g, 1.0, 1e-2, -40.0, NoiseCoefficients({ConstantCoefficient{1.0}}),
                                                 testing::symmetric_atoms());
        CHECK_THROWS_AS(picard(4.0 * testing::gaussian(g), testing::empty_path(1.0), cfg, std::nullopt, 40), NotContracting);
    }
    SUBCASE("needs two iterations") {
        const SolverConfig cfg = testing::config(g, 0.05, 1e-3, 1.0, NoiseCoefficients({ConstantCoefficient{1.0}}),
                                                 testing::symmetric_atoms());
        CHECK_THROWS_AS(picard(testing::gaussian(g), testing::empty_path(0.05), cfg, 10.0, 1), InvalidArgument);
    }
}
