#include "snls/noise.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace snls {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double standard_normal(std::mt19937_64& rng) {
    const double u1 = 1.0 - uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
struct GaussLegendre {
    static constexpr int kOrder = 24;
    std::array<double, kOrder> nodes{};
    std::array<double, kOrder> weights{};

    GaussLegendre() {
        const int n = kOrder;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

const GaussLegendre& gauss_legendre() {
    static const GaussLegendre rule;
    return rule;
}

// int_{S^{m-1}} e^{-i s w_1} dw (real by symmetry).
double spherical_average(int m, double s) {
    if (s == 0.0) return unit_sphere_area(m);
    if (m == 1) return 2.0 * std::cos(s);
    if (m == 2) return 2.0 * std::numbers::pi * std::cyl_bessel_j(0.0, s);
    const double nu = 0.5 * m - 1.0;
    return std::pow(2.0 * std::numbers::pi, 0.5 * m) * std::pow(s, -nu) * std::cyl_bessel_j(nu, s);
}

void validate_mark(const Mark& z, int m) {
    if (static_cast<int>(z.size()) != m) throw InvalidArgument("atom mark has wrong dimension");
    const double r = euclidean_norm(z);
    if (!(r > 0.0) || r > 1.0) throw InvalidArgument("atom marks must satisfy 0 < |z| <= 1");
}

}  // namespace

double euclidean_norm(std::span<const double> z) {
    double s = 0.0;
    for (double v : z) s += v * v;
    return std::sqrt(s);
}

double unit_sphere_area(int m) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m);
}

LevyMeasure::LevyMeasure(int mark_dimension, FiniteAtoms atoms)
    : dimension_(mark_dimension), variant_(std::move(atoms)) {
    if (mark_dimension < 1) throw InvalidArgument("mark dimension must be >= 1");
    const auto& list = std::get<FiniteAtoms>(variant_).atoms;
    if (list.empty()) throw InvalidArgument("finite-atom measure needs at least one atom");
    for (const auto& a : list) {
        validate_mark(a.mark, mark_dimension);
        if (!(a.rate > 0.0) || !std::isfinite(a.rate)) throw InvalidArgument("atom rates must be positive");
    }
}

LevyMeasure::LevyMeasure(int mark_dimension, TruncatedRadial radial)
    : dimension_(mark_dimension), variant_(radial) {
    if (mark_dimension < 1) throw InvalidArgument("mark dimension must be >= 1");
    if (!(radial.alpha > 0.0 && radial.alpha < 2.0)) throw InvalidArgument("alpha must lie in (0, 2)");
    if (!(radial.epsilon > 0.0 && radial.epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
    if (!(radial.scale > 0.0) || !std::isfinite(radial.scale)) throw InvalidArgument("scale must be positive");
}

double LevyMeasure::radial_moment(double k) const {
    return std::visit(overloaded{
                          [&](const FiniteAtoms& fa) {
                              double s = 0.0;
                              for (const auto& a : fa.atoms) s += a.rate * std::pow(euclidean_norm(a.mark), k);
                              return s;
                          },
                          [&](const TruncatedRadial& tr) {
                              const double e = k - tr.alpha;
                              const double radial = e == 0.0 ? -std::log(tr.epsilon)
                                                             : (1.0 - std::pow(tr.epsilon, e)) / e;
                              return tr.scale * unit_sphere_area(dimension_) * radial;
                          },
                      },
                      variant_);
}

double LevyMeasure::total_rate() const { return radial_moment(0.0); }

double LevyMeasure::second_moment() const { return radial_moment(2.0); }

Mark LevyMeasure::first_moment() const {
    Mark mu(dimension_, 0.0);
    if (const auto* fa = std::get_if<FiniteAtoms>(&variant_))
        for (const auto& a : fa->atoms)
            for (int j = 0; j < dimension_; ++j) mu[j] += a.rate * a.mark[j];
    return mu;
}

double LevyMeasure::coordinate_abs_moment(double k) const {
    if (const auto* fa = std::get_if<FiniteAtoms>(&variant_)) {
        double s = 0.0;
        for (const auto& a : fa->atoms) s += a.rate * std::pow(std::abs(a.mark[0]), k);
        return s;
    }
    // Spherical mean of |w_1|^k.
    const double m = dimension_;
    const double mean = std::tgamma(0.5 * m) * std::tgamma(0.5 * (k + 1.0)) /
                        (std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (m + k)));
    return radial_moment(k) * mean;
}

Complex LevyMeasure::phase_integral(std::span<const double> a) const {
    if (static_cast<int>(a.size()) != dimension_) throw InvalidArgument("phase vector has wrong dimension");
    if (const auto* fa = std::get_if<FiniteAtoms>(&variant_)) {
        Complex s{0.0, 0.0};
        for (const auto& atom : fa->atoms) {
            double dot = 0.0;
            for (int j = 0; j < dimension_; ++j) dot += atom.mark[j] * a[j];
            s += atom.rate * (std::polar(1.0, -dot) - 1.0);
        }
        return s;
    }
    const auto& tr = std::get<TruncatedRadial>(variant_);
    const double amp = euclidean_norm(a);
    if (amp == 0.0) return {0.0, 0.0};
    // Composite Gauss-Legendre in log r over [eps, 1].
    const auto& gl = gauss_legendre();
    const double area = unit_sphere_area(dimension_);
    const double lo = std::log(tr.epsilon);
    constexpr int kPanels = 8;
    const double width = -lo / kPanels;
    double sum = 0.0;
    for (int p = 0; p < kPanels; ++p) {
        const double mid = lo + (p + 0.5) * width;
        for (int i = 0; i < GaussLegendre::kOrder; ++i) {
            const double u = mid + 0.5 * width * gl.nodes[i];
            const double r = std::exp(u);
            // dr = r du, density r^{-1-alpha} (radial part of r^{m-1} r^{-m-alpha}).
            sum += 0.5 * width * gl.weights[i] * std::pow(r, -tr.alpha) *
                   (spherical_average(dimension_, r * amp) - area);
        }
    }
    return {tr.scale * sum, 0.0};
}

SamplePath SamplePath::tail(double t0) const {
    SamplePath out;
    out.origin = t0;
    out.horizon = horizon;
    out.seed = seed;
    for (const auto& e : events)
        if (e.time > t0) out.events.push_back(e);
    return out;
}

std::size_t SamplePath::count_until(double t) const {
    return static_cast<std::size_t>(std::count_if(events.begin(), events.end(), [&](const JumpEvent& e) {
        return e.time > origin && e.time <= t;
    }));
}

Mark SamplePath::mark_sum_until(double t, int mark_dimension) const {
    Mark s(mark_dimension, 0.0);
    for (const auto& e : events)
        if (e.time > origin && e.time <= t)
            for (int j = 0; j < mark_dimension; ++j) s[j] += e.mark[j];
    return s;
}

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(master_seed ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

SamplePath sample_path(const LevyMeasure& measure, double horizon, std::uint64_t seed) {
    if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
    std::mt19937_64 rng(seed);
    SamplePath path;
    path.horizon = horizon;
    path.seed = seed;

    const double rate = measure.total_rate();
    std::poisson_distribution<long> count_dist(rate * horizon);
    const long count = count_dist(rng);

    std::vector<double> times(static_cast<std::size_t>(count));
    for (;;) {
        for (auto& t : times) t = horizon * (1.0 - uniform01(rng));
        std::sort(times.begin(), times.end());
        if (std::adjacent_find(times.begin(), times.end()) == times.end()) break;
    }

    const int m = measure.mark_dimension();
    path.events.reserve(times.size());
    for (double t : times) {
        Mark z(m, 0.0);
        std::visit(overloaded{
                       [&](const FiniteAtoms& fa) {
                           const double target = uniform01(rng) * rate;
                           double acc = 0.0;
                           const auto* chosen = &fa.atoms.back();
                           for (const auto& a : fa.atoms) {
                               acc += a.rate;
                               if (target < acc) {
                                   chosen = &a;
                                   break;
                               }
                           }
                           z = chosen->mark;
                       },
                       [&](const TruncatedRadial& tr) {
                           const double top = std::pow(tr.epsilon, -tr.alpha);
                           const double u = uniform01(rng);
                           const double r = std::pow(top - u * (top - 1.0), -1.0 / tr.alpha);
                           if (m == 1) {
                               z[0] = (rng() >> 63) ? r : -r;
                               return;
                           }
                           double len = 0.0;
                           while (len == 0.0) {
                               for (auto& v : z) v = standard_normal(rng);
                               len = euclidean_norm(z);
                           }
                           for (auto& v : z) v *= r / len;
                       },
                   },
                   measure.variant());
        path.events.push_back({t, std::move(z)});
    }
    return path;
}

NoiseCoefficients::NoiseCoefficients(std::vector<CoefficientFamily> families) : families_(std::move(families)) {
    if (families_.empty()) throw InvalidArgument("at least one noise coefficient is required");
    for (const auto& f : families_) {
        const bool ok = std::visit(overloaded{
                                       [](const ConstantCoefficient& c) { return std::isfinite(c.c); },
                                       [](const RationalCoefficient& r) {
                                           return std::isfinite(r.a) && std::isfinite(r.b) && r.b >= 0.0;
                                       },
                                       [](const SaturatingCoefficient& s) { return std::isfinite(s.a); },
                                   },
                                   f);
        if (!ok) throw InvalidArgument("invalid noise coefficient parameters");
    }
}

double NoiseCoefficients::value(int j, double theta) const {
    return std::visit(overloaded{
                          [](const ConstantCoefficient& c) { return c.c; },
                          [&](const RationalCoefficient& r) { return r.a / (1.0 + r.b * theta); },
                          [&](const SaturatingCoefficient& s) { return s.a * theta / (1.0 + theta); },
                      },
                      families_.at(j));
}

double NoiseCoefficients::derivative(int j, double theta) const {
    return std::visit(overloaded{
                          [](const ConstantCoefficient&) { return 0.0; },
                          [&](const RationalCoefficient& r) {
                              const double d = 1.0 + r.b * theta;
                              return -r.a * r.b / (d * d);
                          },
                          [&](const SaturatingCoefficient& s) {
                              const double d = 1.0 + theta;
                              return s.a / (d * d);
                          },
                      },
                      families_.at(j));
}

FamilyBounds NoiseCoefficients::bounds(int j) const {
    return std::visit(overloaded{
                          [](const ConstantCoefficient& c) {
                              const double a = std::abs(c.c);
                              return FamilyBounds{a, 0.0, a, a, 0.0};
                          },
                          // With x = b theta: |gt| = |a|/(1+x), 2 theta|gt'| = 2|a|x/(1+x)^2 (max at x=1),
                          // gt + 2 theta gt' = a(1-x)/(1+x)^2, the sum peaks at x=1/3 with 9/8,
                          // 4 theta^2 |gt''| = 8|a|x^2/(1+x)^3 peaks at x=2 with 32/27.
                          [](const RationalCoefficient& r) {
                              const double a = std::abs(r.a);
                              if (r.b == 0.0) return FamilyBounds{a, 0.0, a, a, 0.0};
                              return FamilyBounds{a, 0.5 * a, a, 9.0 / 8.0 * a, 32.0 / 27.0 * a};
                          },
                          // |gt| < |a|, 2 theta|gt'| = 2|a|theta/(1+theta)^2, radial factor
                          // |a|(theta^2+3theta)/(1+theta)^2 peaks at theta=3 with 9/8.
                          [](const SaturatingCoefficient& s) {
                              const double a = std::abs(s.a);
                              return FamilyBounds{a, 0.5 * a, 9.0 / 8.0 * a, 9.0 / 8.0 * a, 32.0 / 27.0 * a};
                          },
                      },
                      families_.at(j));
}

double NoiseCoefficients::phase(std::span<const double> z, Complex y) const {
    const double theta = std::norm(y);
    double alpha = 0.0;
    for (int j = 0; j < count(); ++j) alpha += z[j] * value(j, theta);
    return alpha;
}

LipschitzConstants lipschitz_constants(const NoiseCoefficients& coeffs) {
    // A gauge map h(|y|^2) y has Lipschitz constant sup_theta max(|h|, |h + 2 theta h'|)
    // <= sup (|h| + 2 theta |h'|). Both product forms are gauge maps:
    //   m_jk:  h = gt_j gt_k
    //   p_jk:  h = gt_k (gt_j + 2 theta gt_j'),  h' involves 3 gt_j' + 2 theta gt_j''.
    LipschitzConstants out{0.0, 0.0};
    const int m = coeffs.count();
    for (int j = 0; j < m; ++j) {
        const FamilyBounds bj = coeffs.bounds(j);
        out.l1 = std::max(out.l1, bj.sup_lipschitz);
        for (int k = 0; k < m; ++k) {
            const FamilyBounds bk = coeffs.bounds(k);
            const double gauge = bj.sup_value * bk.sup_value + bj.sup_theta_slope * bk.sup_value +
                                 bj.sup_value * bk.sup_theta_slope;
            const double literal = bk.sup_value * bj.sup_radial + bk.sup_theta_slope * bj.sup_radial +
                                   bk.sup_value * (3.0 * bj.sup_theta_slope + bj.sup_curvature);
            out.l2 = std::max({out.l2, gauge, literal});
        }
    }
    return out;
}

Complex derivative_product(const NoiseCoefficients& coeffs, int j, int k, Complex y) {
    const double theta = std::norm(y);
    return coeffs.value(k, theta) * (coeffs.value(j, theta) + 2.0 * theta * coeffs.derivative(j, theta)) * y;
}

Complex gauge_product(const NoiseCoefficients& coeffs, int j, int k, Complex y) {
    const double theta = std::norm(y);
    return coeffs.value(j, theta) * coeffs.value(k, theta) * y;
}

LipschitzCheck verify_lipschitz(const NoiseCoefficients& coeffs, std::uint64_t pairs, double radius,
                                std::uint64_t seed) {
    const auto lip = lipschitz_constants(coeffs);
    std::mt19937_64 rng(seed);
    auto disc = [&](double rad) {
        // Log-uniform modulus so small and large |y| are both exercised.
        const double mod = rad * std::pow(10.0, -6.0 * uniform01(rng));
        return std::polar(mod, 2.0 * std::numbers::pi * uniform01(rng));
    };
    LipschitzCheck out;
    out.pairs = pairs;
    const int m = coeffs.count();
    for (std::uint64_t t = 0; t < pairs; ++t) {
        const Complex x = disc(radius);
        const Complex y = (t % 2 == 1) ? x + disc(1e-2 * std::max(1.0, std::abs(x))) : disc(radius);
        const double d = std::abs(x - y);
        if (d == 0.0) continue;
        double worst1 = 0.0, worst2 = 0.0;
        for (int j = 0; j < m; ++j) {
            worst1 = std::max(worst1, std::abs(coeffs.apply(j, x) - coeffs.apply(j, y)));
            for (int k = 0; k < m; ++k) {
                worst2 = std::max(worst2, std::abs(derivative_product(coeffs, j, k, x) -
                                                   derivative_product(coeffs, j, k, y)));
                worst2 = std::max(worst2, std::abs(gauge_product(coeffs, j, k, x) - gauge_product(coeffs, j, k, y)));
            }
        }
        // Rounding slack: the products are evaluated to a few ulps of their magnitude.
        const double slack1 = 1e-13 * lip.l1 * (std::abs(x) + std::abs(y));
        const double slack2 = 1e-13 * lip.l2 * (std::abs(x) + std::abs(y));
        if (lip.l1 > 0.0) out.max_ratio_l1 = std::max(out.max_ratio_l1, worst1 / (lip.l1 * d));
        if (lip.l2 > 0.0) out.max_ratio_l2 = std::max(out.max_ratio_l2, worst2 / (lip.l2 * d));
        if (worst1 > lip.l1 * d + slack1) ++out.violations_l1;
        if (worst2 > lip.l2 * d + slack2) ++out.violations_l2;
    }
    return out;
}

}  // namespace snls
