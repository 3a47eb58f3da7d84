#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "snls/errors.hpp"

namespace snls {

using Complex = std::complex<double>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Periodic torus [-L, L)^n sampled with N points per axis.
///
/// Points are ordered row-major; x_i = -L + i h with h = 2L/N. The
/// Fourier wavenumbers of axis index j are (j < N/2 ? j : j - N) * pi/L,
/// i.e. the set {-N/2, ..., N/2-1} * pi/L.
class Grid {
public:
    Grid(int dimension, int points_per_axis, double half_length);

    int dimension() const noexcept { return dimension_; }
    int points_per_axis() const noexcept { return points_; }
    double half_length() const noexcept { return half_length_; }
    double spacing() const noexcept { return 2.0 * half_length_ / points_; }
    /// h^n, the quadrature weight of a single point.
    double cell_volume() const noexcept;
    std::size_t size() const noexcept;

    double coordinate(int axis_index) const noexcept { return -half_length_ + axis_index * spacing(); }
    /// Fourier wavenumber for FFT index j along one axis.
    double wavenumber(int j) const noexcept;
    /// Integer mode number for FFT index j (in [-N/2, N/2)).
    int mode_number(int j) const noexcept { return j < points_ / 2 ? j : j - points_; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int dimension_;
    int points_;
    double half_length_;
};

/// Dense grid of complex amplitudes; the discrete stand-in for u(t) in L^2.
class ComplexField {
public:
    explicit ComplexField(const Grid& grid);
    ComplexField(const Grid& grid, std::vector<Complex> values);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<Complex> values() noexcept { return values_; }
    std::span<const Complex> values() const noexcept { return values_; }
    Complex& operator[](std::size_t i) noexcept { return values_[i]; }
    const Complex& operator[](std::size_t i) const noexcept { return values_[i]; }

    bool is_finite() const noexcept;
    /// Throws CorruptField when any entry is NaN or infinite.
    void require_finite() const;

    ComplexField& operator+=(const ComplexField& other);
    ComplexField& operator-=(const ComplexField& other);
    ComplexField& operator*=(Complex scale);

    friend ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
    friend ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
    friend ComplexField operator*(Complex s, ComplexField a) { return a *= s; }

private:
    Grid grid_;
    std::vector<Complex> values_;
};

/// Exponent pair (p, r) with 2/p = n(1/2 - 1/r).
struct AdmissiblePair {
    double p;
    double r;
    int dimension;
};

/// Solves the scaling relation for p. Throws InvalidArgument("not admissible")
/// when r is outside the allowed range for the dimension.
AdmissiblePair make_admissible_pair(int dimension, double r);

/// Hoelder conjugate q/(q-1), with 1 <-> infinity.
double conjugate_exponent(double q);

double l2_norm(const ComplexField& f);
double lr_norm(const ComplexField& f, double r);

/// Fraction of the L^2 mass sitting in the outer `shell` fraction of each axis.
double boundary_mass_fraction(const ComplexField& f, double shell = 0.1);

/// Time-indexed snapshots of a field.
///
/// Times are non-decreasing; a repeated time marks a jump, the first entry
/// holding the left limit u(t-) and the second the value u(t). Time integrals
/// use left-endpoint quadrature, so a left-limit entry carries zero weight.
class Trajectory {
public:
    explicit Trajectory(const Grid& grid) : grid_(grid) {}

    void append(double time, ComplexField field);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return times_.size(); }
    bool empty() const noexcept { return times_.empty(); }
    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<ComplexField>& fields() const noexcept { return fields_; }
    const ComplexField& field(std::size_t k) const { return fields_.at(k); }
    double time(std::size_t k) const { return times_.at(k); }
    /// True when entry k is the left limit of a jump at its time.
    bool is_left_limit(std::size_t k) const noexcept {
        return k + 1 < times_.size() && times_[k + 1] == times_[k];
    }
    /// Index of the right-continuous entry at time t; throws when t is not a stored time.
    std::size_t index_at(double time) const;

    /// Snapshots with time <= t_end (a trajectory restricted to [0, t_end]).
    Trajectory prefix(double t_end) const;

private:
    Grid grid_;
    std::vector<double> times_;
    std::vector<ComplexField> fields_;
};

/// Pointwise difference of two trajectories on identical time grids.
Trajectory difference(const Trajectory& a, const Trajectory& b);

/// (sum_k ||u(t_k)||_r^p (t_{k+1}-t_k))^{1/p}; p = infinity gives the sup of ||u(t_k)||_r.
double mixed_norm(const Trajectory& traj, double p, double r);
double mixed_norm(const Trajectory& traj, const AdmissiblePair& pair);

/// sup_t ||u(t)||_{L^2} + mixed_norm(traj, pair).
double y_norm(const Trajectory& traj, const AdmissiblePair& pair);

/// Incremental Y-norm bookkeeping: running sup of L^2 and the left-endpoint
/// accumulator of ||u||_r^p dt.
class YNormTracker {
public:
    explicit YNormTracker(const AdmissiblePair& pair) : pair_(pair) {}

    /// Records a state (contributes to the sup only).
    void observe(double l2, double lr);
    /// Records a state that is held for `dt` (left endpoint of an interval).
    void advance(double l2, double lr, double dt);

    double sup_l2() const noexcept { return sup_l2_; }
    double lp_integral() const noexcept { return lp_integral_; }
    double mixed() const noexcept;
    double value() const noexcept { return sup_l2_ + mixed(); }
    const AdmissiblePair& pair() const noexcept { return pair_; }

private:
    AdmissiblePair pair_;
    double sup_l2_ = 0.0;
    double lp_integral_ = 0.0;
    double sup_lr_ = 0.0;
};

}  // namespace snls
