#include <doctest.h>

#include <functional>
#include <set>

#include "helpers.hpp"
#include "snls/errors.hpp"

using namespace snls;

namespace {

// Composite Simpson rule on [a, b].
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

// Brute-force radial integrals in m = 1 and m = 2 (polar coordinates).
Complex radial_integral(const TruncatedRadial& tr, int m, std::function<Complex(double, double)> integrand) {
    if (m == 1) {
        auto side = [&](double sign) {
            const double re = simpson([&](double r) { return integrand(sign * r, 0.0).real() * tr.scale * std::pow(r, -1.0 - tr.alpha); },
                                      tr.epsilon, 1.0);
            const double im = simpson([&](double r) { return integrand(sign * r, 0.0).imag() * tr.scale * std::pow(r, -1.0 - tr.alpha); },
                                      tr.epsilon, 1.0);
            return Complex(re, im);
        };
        return side(1.0) + side(-1.0);
    }
    const int na = 720;
    Complex total = 0.0;
    for (int k = 0; k < na; ++k) {
        const double phi = 2.0 * std::numbers::pi * (k + 0.5) / na;
        const double re = simpson([&](double r) {
            return integrand(r * std::cos(phi), r * std::sin(phi)).real() * tr.scale * std::pow(r, -2.0 - tr.alpha) * r;
        }, tr.epsilon, 1.0, 2000);
        const double im = simpson([&](double r) {
            return integrand(r * std::cos(phi), r * std::sin(phi)).imag() * tr.scale * std::pow(r, -2.0 - tr.alpha) * r;
        }, tr.epsilon, 1.0, 2000);
        total += Complex(re, im) * (2.0 * std::numbers::pi / na);
    }
    return total;
}

}  // namespace

TEST_CASE("total rate") {
    CHECK(LevyMeasure(1, FiniteAtoms{{{{0.5}, 3.0}}}).total_rate() == 3.0);
    CHECK(LevyMeasure(1, FiniteAtoms{{{{0.5}, 1.0}, {{-0.2}, 2.0}}}).total_rate() == 3.0);
    SUBCASE("truncated radial, closed form and quadrature") {
        const TruncatedRadial tr{0.5, 0.25, 1.0};
        const LevyMeasure nu(1, tr);
        CHECK(nu.total_rate() == doctest::Approx(4.0).epsilon(1e-14));
        const double quad = 2.0 * simpson([](double r) { return std::pow(r, -1.5); }, 0.25, 1.0);
        CHECK(nu.total_rate() == doctest::Approx(quad).epsilon(1e-10));
    }
    SUBCASE("radial m = 2") {
        const TruncatedRadial tr{1.2, 0.1, 0.7};
        const LevyMeasure nu(2, tr);
        const Complex oracle = radial_integral(tr, 2, [](double, double) { return Complex(1.0); });
        CHECK(nu.total_rate() == doctest::Approx(oracle.real()).epsilon(1e-8));
    }
}

TEST_CASE("moments") {
    const LevyMeasure single(1, FiniteAtoms{{{{0.5}, 2.0}}});
    CHECK(single.second_moment() == doctest::Approx(0.5));
    CHECK(single.first_moment()[0] == doctest::Approx(1.0));
    CHECK(testing::symmetric_atoms().first_moment()[0] == 0.0);

    const LevyMeasure radial(3, TruncatedRadial{0.8, 0.2, 1.5});
    for (double v : radial.first_moment()) CHECK(v == 0.0);

    SUBCASE("radial second moment and coordinate moment against quadrature") {
        const TruncatedRadial tr{0.6, 0.3, 2.0};
        const LevyMeasure nu(2, tr);
        const double m2 = radial_integral(tr, 2, [](double x, double y) { return Complex(x * x + y * y); }).real();
        CHECK(nu.second_moment() == doctest::Approx(m2).epsilon(1e-8));
        const double c3 = radial_integral(tr, 2, [](double x, double) { return Complex(std::pow(std::abs(x), 3.0)); }).real();
        CHECK(nu.coordinate_abs_moment(3.0) == doctest::Approx(c3).epsilon(1e-6));
        const LevyMeasure nu1(1, tr);
        const double c1 = radial_integral(tr, 1, [](double x, double) { return Complex(std::pow(std::abs(x), 2.5)); }).real();
        CHECK(nu1.coordinate_abs_moment(2.5) == doctest::Approx(c1).epsilon(1e-8));
    }
    SUBCASE("alpha equal to the moment order uses the logarithm") {
        const LevyMeasure nu(1, TruncatedRadial{1.0, 0.5, 1.0});
        CHECK(nu.radial_moment(1.0) == doctest::Approx(2.0 * std::log(2.0)));
    }
}

TEST_CASE("phase integral") {
    SUBCASE("atoms are summed exactly") {
        const LevyMeasure nu(1, FiniteAtoms{{{{0.5}, 3.0}, {{-0.3}, 2.0}}});
        const double a = 1.7;
        const Complex exact = 3.0 * (std::polar(1.0, -0.5 * a) - 1.0) + 2.0 * (std::polar(1.0, 0.3 * a) - 1.0);
        CHECK(std::abs(nu.phase_integral(std::vector<double>{a}) - exact) < 1e-15);
    }
    SUBCASE("radial m = 1") {
        const TruncatedRadial tr{0.5, 0.25, 1.0};
        const LevyMeasure nu(1, tr);
        for (double a : {0.3, 2.0, 11.0}) {
            const Complex oracle = radial_integral(tr, 1, [&](double x, double) { return std::polar(1.0, -x * a) - 1.0; });
            CHECK(std::abs(nu.phase_integral(std::vector<double>{a}) - oracle) < 1e-9);
        }
    }
    SUBCASE("radial m = 2") {
        const TruncatedRadial tr{1.5, 0.2, 0.5};
        const LevyMeasure nu(2, tr);
        const std::vector<double> a = {1.1, -2.3};
        const Complex oracle =
            radial_integral(tr, 2, [&](double x, double y) { return std::polar(1.0, -(x * a[0] + y * a[1])) - 1.0; });
        CHECK(std::abs(nu.phase_integral(a) - oracle) < 1e-7);
    }
    SUBCASE("zero phase vector") {
        CHECK(std::abs(LevyMeasure(2, TruncatedRadial{1.0, 0.5, 1.0}).phase_integral(std::vector<double>{0.0, 0.0})) == 0.0);
    }
    CHECK_THROWS_AS(testing::symmetric_atoms().phase_integral(std::vector<double>{1.0, 2.0}), InvalidArgument);
}

TEST_CASE("measure validation") {
    CHECK_THROWS_AS(LevyMeasure(1, FiniteAtoms{}), InvalidArgument);
    CHECK_THROWS_AS(LevyMeasure(1, FiniteAtoms{{{{1.5}, 1.0}}}), InvalidArgument);
    CHECK_THROWS_AS(LevyMeasure(1, FiniteAtoms{{{{0.0}, 1.0}}}), InvalidArgument);
    CHECK_THROWS_AS(LevyMeasure(1, FiniteAtoms{{{{0.5}, 0.0}}}), InvalidArgument);
    CHECK_THROWS_AS(LevyMeasure(2, FiniteAtoms{{{{0.5}, 1.0}}}), InvalidArgument);
    CHECK_THROWS_AS(LevyMeasure(1, TruncatedRadial{2.0, 0.5, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(LevyMeasure(1, TruncatedRadial{1.0, 1.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(LevyMeasure(1, TruncatedRadial{1.0, 0.5, 0.0}), InvalidArgument);
    CHECK_NOTHROW(LevyMeasure(1, FiniteAtoms{{{{1.0}, 1.0}}}));
}

TEST_CASE("sample paths") {
    const LevyMeasure nu = testing::symmetric_atoms();
    SUBCASE("deterministic per seed") {
        const SamplePath a = sample_path(nu, 2.0, 42), b = sample_path(nu, 2.0, 42);
        REQUIRE(a.events.size() == b.events.size());
        for (std::size_t i = 0; i < a.events.size(); ++i) {
            CHECK(a.events[i].time == b.events[i].time);
            CHECK(a.events[i].mark == b.events[i].mark);
        }
        const SamplePath c = sample_path(nu, 2.0, 43);
        CHECK((c.events.size() != a.events.size() || c.events.front().time != a.events.front().time));
    }
    SUBCASE("single atom: every mark equals it") {
        const LevyMeasure one(2, FiniteAtoms{{{{0.3, -0.4}, 7.0}}});
        const SamplePath p = sample_path(one, 3.0, 1);
        CHECK(p.events.size() > 0);
        for (const auto& e : p.events) CHECK(e.mark == Mark{0.3, -0.4});
    }
    SUBCASE("times strictly increasing in (0, T], marks in the unit ball") {
        const LevyMeasure radial(3, TruncatedRadial{1.5, 0.05, 0.2});
        for (std::uint64_t s = 0; s < 200; ++s) {
            const SamplePath p = sample_path(radial, 1.0, s);
            double prev = 0.0;
            for (const auto& e : p.events) {
                CHECK(e.time > prev);
                CHECK(e.time <= 1.0);
                prev = e.time;
                const double r = euclidean_norm(e.mark);
                CHECK(r > 0.0);
                CHECK(r <= 1.0);
                CHECK(r >= 0.05 * (1.0 - 1e-12));
            }
        }
    }
    SUBCASE("rare events: mean count") {
        const LevyMeasure rare(1, FiniteAtoms{{{{0.5}, 0.01}}});
        double sum = 0.0;
        const int n = 10000;
        for (int s = 0; s < n; ++s) sum += static_cast<double>(sample_path(rare, 1.0, stream_seed(5, s)).events.size());
        const double mean = sum / n;
        CHECK(std::abs(mean - 0.01) <= 3.0 * std::sqrt(0.01 / n));
    }
    SUBCASE("empirical moments within three standard errors") {
        const TruncatedRadial tr{0.5, 0.25, 1.0};
        const LevyMeasure radial(1, tr);
        const int n = 4000;
        double c = 0.0, c2 = 0.0, m = 0.0, m2 = 0.0;
        for (int s = 0; s < n; ++s) {
            const SamplePath p = sample_path(radial, 1.0, stream_seed(9, s));
            double q = 0.0;
            for (const auto& e : p.events) q += e.mark[0] * e.mark[0];
            c += p.events.size();
            c2 += double(p.events.size()) * p.events.size();
            m += q;
            m2 += q * q;
        }
        auto se = [n](double s, double s2) { return std::sqrt((s2 / n - (s / n) * (s / n)) / (n - 1)); };
        CHECK(std::abs(c / n - radial.total_rate()) <= 3.0 * se(c, c2));
        CHECK(std::abs(m / n - radial.second_moment()) <= 3.0 * se(m, m2));
    }
    SUBCASE("radial marks are isotropic") {
        const LevyMeasure radial(2, TruncatedRadial{1.0, 0.2, 3.0});
        double sx = 0.0, sy = 0.0;
        std::size_t count = 0;
        for (std::uint64_t s = 0; s < 500; ++s)
            for (const auto& e : sample_path(radial, 1.0, s).events) {
                sx += e.mark[0];
                sy += e.mark[1];
                ++count;
            }
        CHECK(count > 1000);
        CHECK(std::abs(sx / count) < 4.0 * 0.6 / std::sqrt(double(count)));
        CHECK(std::abs(sy / count) < 4.0 * 0.6 / std::sqrt(double(count)));
    }
}

TEST_CASE("stream seeds are distinct and reproducible") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(stream_seed(123, i));
    CHECK(seen.size() == 10000);
    CHECK(stream_seed(1, 5) == stream_seed(1, 5));
    CHECK(stream_seed(1, 5) != stream_seed(2, 5));
}

TEST_CASE("path tail and counters") {
    const SamplePath p = testing::manual_path(1.0, {{0.2, {0.5}}, {0.5, {-0.3}}, {0.9, {0.1}}});
    CHECK(p.count_until(0.5) == 2);
    CHECK(p.mark_sum_until(0.5, 1)[0] == doctest::Approx(0.2));
    const SamplePath t = p.tail(0.3);
    CHECK(t.origin == 0.3);
    REQUIRE(t.events.size() == 2);
    CHECK(t.events[0].time == 0.5);  // absolute clock retained
    CHECK(t.count_until(0.3) == 0);
    CHECK(t.count_until(1.0) == 2);
    CHECK(t.mark_sum_until(1.0, 1)[0] == doctest::Approx(-0.2));
}

TEST_CASE("coefficient families") {
    const NoiseCoefficients c({ConstantCoefficient{2.0}, RationalCoefficient{1.5, 2.0}, SaturatingCoefficient{-1.0}});
    CHECK(c.value(0, 7.0) == 2.0);
    CHECK(c.value(1, 0.5) == doctest::Approx(0.75));
    CHECK(c.value(2, 1.0) == doctest::Approx(-0.5));
    SUBCASE("derivatives against central differences") {
        for (int j = 0; j < 3; ++j)
            for (double th : {0.0 + 1e-3, 0.3, 2.0, 17.0}) {
                const double h = 1e-6 * std::max(1.0, th);
                const double fd = (c.value(j, th + h) - c.value(j, th - h)) / (2.0 * h);
                CHECK(c.derivative(j, th) == doctest::Approx(fd).epsilon(1e-6));
            }
    }
    SUBCASE("closed-form suprema dominate a brute-force scan and are attained") {
        for (int j = 0; j < 3; ++j) {
            const FamilyBounds b = c.bounds(j);
            double v = 0, slope = 0, radial = 0, lip = 0, curv = 0;
            for (int i = 0; i <= 200000; ++i) {
                const double th = std::pow(10.0, -4.0 + 9.0 * i / 200000.0);
                const double g = c.value(j, th), d = c.derivative(j, th);
                const double h = 1e-5 * th;
                const double dd = (c.derivative(j, th + h) - c.derivative(j, th - h)) / (2.0 * h);
                v = std::max(v, std::abs(g));
                slope = std::max(slope, 2.0 * th * std::abs(d));
                radial = std::max(radial, std::abs(g + 2.0 * th * d));
                lip = std::max(lip, std::abs(g) + 2.0 * th * std::abs(d));
                curv = std::max(curv, 4.0 * th * th * std::abs(dd));
            }
            CHECK(v <= b.sup_value * (1 + 1e-12));
            CHECK(slope <= b.sup_theta_slope * (1 + 1e-12));
            CHECK(radial <= b.sup_radial * (1 + 1e-12));
            CHECK(lip <= b.sup_lipschitz * (1 + 1e-12));
            CHECK(curv <= b.sup_curvature * (1 + 1e-6));
            if (j > 0) {  // the rational/saturating suprema are sharp
                CHECK(lip == doctest::Approx(b.sup_lipschitz).epsilon(1e-6));
                CHECK(curv == doctest::Approx(b.sup_curvature).epsilon(1e-4));
            }
        }
    }
    CHECK_THROWS_AS(NoiseCoefficients({}), InvalidArgument);
    CHECK_THROWS_AS(NoiseCoefficients({RationalCoefficient{1.0, -1.0}}), InvalidArgument);
    CHECK_THROWS_AS(NoiseCoefficients({ConstantCoefficient{std::nan("")}}), InvalidArgument);
}

TEST_CASE("Lipschitz constants") {
    CHECK(lipschitz_constants(NoiseCoefficients({ConstantCoefficient{1.0}})).l1 == 1.0);
    CHECK(lipschitz_constants(NoiseCoefficients({ConstantCoefficient{-3.0}})).l1 == 3.0);
    CHECK(lipschitz_constants(NoiseCoefficients({RationalCoefficient{1.0, 1.0}})).l1 == doctest::Approx(9.0 / 8.0));

    SUBCASE("linear map attains its constant") {
        const auto chk = verify_lipschitz(NoiseCoefficients({ConstantCoefficient{1.0}}), 10000, 10.0, 3);
        CHECK(chk.violations_l1 == 0);
        CHECK(chk.max_ratio_l1 == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("randomized verification, one million pairs, |x|,|y| <= 1e3") {
        const auto chk = verify_lipschitz(NoiseCoefficients({RationalCoefficient{1.0, 1.0}}), 1000000, 1000.0, 4);
        CHECK(chk.violations_l1 == 0);
        CHECK(chk.violations_l2 == 0);
        CHECK(chk.max_ratio_l1 <= 1.0);
        CHECK(chk.max_ratio_l1 > 0.5);
    }
    SUBCASE("every family and a mixed set") {
        for (const auto& coeffs :
             {NoiseCoefficients({SaturatingCoefficient{2.0}}), NoiseCoefficients({ConstantCoefficient{0.5}}),
              NoiseCoefficients({ConstantCoefficient{0.5}, RationalCoefficient{-2.0, 0.3}, SaturatingCoefficient{1.0}})}) {
            const auto chk = verify_lipschitz(coeffs, 200000, 1000.0, 5);
            CHECK(chk.violations_l1 == 0);
            CHECK(chk.violations_l2 == 0);
        }
    }
    SUBCASE("product forms") {
        const NoiseCoefficients c({RationalCoefficient{1.0, 1.0}, ConstantCoefficient{2.0}});
        const Complex y(0.6, -0.8);
        // theta = 1: gt_0 = 1/2, gt_0' = -1/4, gt_1 = 2.
        CHECK(std::abs(gauge_product(c, 0, 1, y) - 1.0 * y) < 1e-15);
        CHECK(std::abs(derivative_product(c, 0, 1, y) - 2.0 * (0.5 - 0.5) * y) < 1e-15);
        CHECK(std::abs(derivative_product(c, 1, 0, y) - 0.5 * 2.0 * y) < 1e-15);
    }
}

TEST_CASE("real derivative of g_j applied to g_k matches finite differences") {
    const NoiseCoefficients c({RationalCoefficient{1.3, 0.7}, SaturatingCoefficient{-0.9}});
    std::mt19937_64 rng(8);
    std::normal_distribution<double> n(0.0, 1.5);
    for (int t = 0; t < 50; ++t) {
        const Complex y(n(rng), n(rng));
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                const Complex dir = c.apply(k, y);
                const double h = 1e-6;
                const Complex fd = (c.apply(j, y + h * dir) - c.apply(j, y - h * dir)) / (2.0 * h);
                CHECK(std::abs(derivative_product(c, j, k, y) - fd) < 1e-6 * (1.0 + std::abs(fd)));
            }
    }
}
