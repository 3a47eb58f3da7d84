#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "snls/grid.hpp"

namespace snls {

using Mark = std::vector<double>;

double euclidean_norm(std::span<const double> z);

/// Finitely many atoms z_k (0 < |z_k| <= 1) with rates lambda_k > 0.
struct FiniteAtoms {
    struct Atom {
        Mark mark;
        double rate;
    };
    std::vector<Atom> atoms;
};

/// Isotropic density c |z|^{-m-alpha} on the shell eps <= |z| <= 1.
struct TruncatedRadial {
    double alpha;
    double epsilon;
    double scale;
};

/// Finite-activity Levy measure nu on the unit ball of R^m.
class LevyMeasure {
public:
    LevyMeasure(int mark_dimension, FiniteAtoms atoms);
    LevyMeasure(int mark_dimension, TruncatedRadial radial);

    int mark_dimension() const noexcept { return dimension_; }
    const std::variant<FiniteAtoms, TruncatedRadial>& variant() const noexcept { return variant_; }
    bool is_atomic() const noexcept { return std::holds_alternative<FiniteAtoms>(variant_); }

    /// Lambda = nu(B).
    double total_rate() const;
    /// int |z|^2 nu(dz).
    double second_moment() const;
    /// mu_j = int z_j nu(dz); the compensator drift coefficients.
    Mark first_moment() const;
    /// int |z|^k nu(dz), k >= 0.
    double radial_moment(double k) const;
    /// int |z_1|^k nu(dz), k >= 0.
    double coordinate_abs_moment(double k) const;

    /// int (e^{-i z.a} - 1) nu(dz) for a real vector a of length m.
    /// Atoms are summed exactly; the radial case uses the closed-form
    /// spherical average and Gauss-Legendre quadrature in the radius.
    Complex phase_integral(std::span<const double> a) const;

private:
    int dimension_;
    std::variant<FiniteAtoms, TruncatedRadial> variant_;
};

/// Surface area of the unit sphere S^{m-1} (2 for m = 1).
double unit_sphere_area(int m);

struct JumpEvent {
    double time;
    Mark mark;
};

/// Realized jump events on (origin, horizon].
///
/// A path produced by tail(T0) keeps absolute event times and sets
/// origin = T0; its local clock t - T0 realizes N(t + T0) - N(T0).
struct SamplePath {
    double origin = 0.0;
    double horizon = 0.0;
    std::uint64_t seed = 0;
    std::vector<JumpEvent> events;

    /// Events with time > t0, as the noise restarted at t0.
    SamplePath tail(double t0) const;
    /// N(t) - N(origin): number of events in (origin, t].
    std::size_t count_until(double t) const;
    /// Sum of the marks of events in (origin, t].
    Mark mark_sum_until(double t, int mark_dimension) const;
};

/// Derives the stream seed of path `index` from a master seed; ensembles
/// are therefore independent of execution order.
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index);

/// Compound Poisson sampling: count ~ Poisson(Lambda T), sorted uniform
/// times on (0, T], marks i.i.d. from nu / Lambda.
SamplePath sample_path(const LevyMeasure& measure, double horizon, std::uint64_t seed);

/// Closed catalog of gauge coefficients g_j(y) = gt_j(|y|^2) y.
struct ConstantCoefficient {
    double c;
};
/// gt(theta) = a / (1 + b theta), b >= 0.
struct RationalCoefficient {
    double a;
    double b;
};
/// gt(theta) = a theta / (1 + theta).
struct SaturatingCoefficient {
    double a;
};
using CoefficientFamily = std::variant<ConstantCoefficient, RationalCoefficient, SaturatingCoefficient>;

/// Closed-form suprema over theta >= 0 used to build conservative constants.
struct FamilyBounds {
    double sup_value;        ///< sup |gt|
    double sup_theta_slope;  ///< sup 2 theta |gt'|
    double sup_radial;       ///< sup |gt + 2 theta gt'|
    double sup_lipschitz;    ///< sup (|gt| + 2 theta |gt'|)
    double sup_curvature;    ///< sup 4 theta^2 |gt''|
};

class NoiseCoefficients {
public:
    explicit NoiseCoefficients(std::vector<CoefficientFamily> families);

    int count() const noexcept { return static_cast<int>(families_.size()); }
    const std::vector<CoefficientFamily>& families() const noexcept { return families_; }

    double value(int j, double theta) const;       ///< gt_j(theta)
    double derivative(int j, double theta) const;  ///< gt_j'(theta)
    FamilyBounds bounds(int j) const;

    /// g_j(y).
    Complex apply(int j, Complex y) const { return value(j, std::norm(y)) * y; }
    /// sum_j z_j gt_j(|y|^2).
    double phase(std::span<const double> z, Complex y) const;

private:
    std::vector<CoefficientFamily> families_;
};

struct LipschitzConstants {
    double l1;  ///< max_j |g_j(x) - g_j(y)| <= L1 |x - y|
    double l2;  ///< max_{j,k} |g_j'(x)g_k(x) - g_j'(y)g_k(y)| <= L2 |x - y|
};

LipschitzConstants lipschitz_constants(const NoiseCoefficients& coeffs);

/// g_j'(y)[g_k(y)] with C identified with R^2 (real derivative).
Complex derivative_product(const NoiseCoefficients& coeffs, int j, int k, Complex y);
/// m_jk(y) = gt_j gt_k (|y|^2) y, the product form (i g_j)'(y)[-i g_k(y)].
Complex gauge_product(const NoiseCoefficients& coeffs, int j, int k, Complex y);

struct LipschitzCheck {
    std::uint64_t pairs = 0;
    double max_ratio_l1 = 0.0;  ///< max |g_j(x)-g_j(y)| / (L1 |x-y|)
    double max_ratio_l2 = 0.0;  ///< max over both product forms of |.(x)-.(y)| / (L2 |x-y|)
    std::uint64_t violations_l1 = 0;
    std::uint64_t violations_l2 = 0;
};

/// Randomized check of the L1/L2 inequalities on complex pairs with |x|, |y| <= radius.
LipschitzCheck verify_lipschitz(const NoiseCoefficients& coeffs, std::uint64_t pairs, double radius,
                                std::uint64_t seed);

}  // namespace snls
