#include "snls/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace snls {

namespace {

constexpr std::size_t kMaxGridPoints = std::size_t{1} << 24;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(int dimension, int points_per_axis, double half_length)
    : dimension_(dimension), points_(points_per_axis), half_length_(half_length) {
    if (dimension != 1 && dimension != 2)
        throw InvalidArgument("grid dimension must be 1 or 2, got " + std::to_string(dimension));
    if (points_per_axis < 8 || !is_power_of_two(points_per_axis))
        throw InvalidArgument("grid points per axis must be a power of two >= 8, got " +
                              std::to_string(points_per_axis));
    if (!(half_length > 0.0) || !std::isfinite(half_length))
        throw InvalidArgument("grid half length must be positive");
    if (size() > kMaxGridPoints)
        throw InvalidArgument("grid exceeds the point budget");
}

double Grid::cell_volume() const noexcept {
    const double h = spacing();
    return dimension_ == 1 ? h : h * h;
}

std::size_t Grid::size() const noexcept {
    const auto n = static_cast<std::size_t>(points_);
    return dimension_ == 1 ? n : n * n;
}

double Grid::wavenumber(int j) const noexcept {
    return mode_number(j) * (std::numbers::pi / half_length_);
}

ComplexField::ComplexField(const Grid& grid) : grid_(grid), values_(grid.size()) {}

ComplexField::ComplexField(const Grid& grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw InvalidArgument("field size does not match grid");
}

bool ComplexField::is_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](const Complex& c) {
        return std::isfinite(c.real()) && std::isfinite(c.imag());
    });
}

void ComplexField::require_finite() const {
    if (!is_finite()) throw CorruptField();
}

ComplexField& ComplexField::operator+=(const ComplexField& other) {
    if (!(grid_ == other.grid_)) throw InvalidArgument("grid mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& other) {
    if (!(grid_ == other.grid_)) throw InvalidArgument("grid mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

ComplexField& ComplexField::operator*=(Complex scale) {
    for (auto& v : values_) v *= scale;
    return *this;
}

AdmissiblePair make_admissible_pair(int dimension, double r) {
    if (dimension != 1 && dimension != 2) throw InvalidArgument("not admissible: dimension");
    const bool in_range = dimension == 1 ? r >= 2.0 : (r >= 2.0 && std::isfinite(r));
    if (!in_range || std::isnan(r)) throw InvalidArgument("not admissible: r=" + std::to_string(r));
    if (r == 2.0) return {kInfinity, 2.0, dimension};
    const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
    return {2.0 / (dimension * (0.5 - inv_r)), r, dimension};
}

double conjugate_exponent(double q) {
    if (q < 1.0) throw InvalidArgument("invalid exponent");
    if (q == 1.0) return kInfinity;
    if (std::isinf(q)) return 1.0;
    return q / (q - 1.0);
}

double l2_norm(const ComplexField& f) {
    double sum = 0.0;
    for (const auto& v : f.values()) {
        const double a = std::norm(v);
        if (!std::isfinite(a)) throw CorruptField();
        sum += a;
    }
    return std::sqrt(f.grid().cell_volume() * sum);
}

double lr_norm(const ComplexField& f, double r) {
    if (!(r >= 1.0)) throw InvalidArgument("invalid exponent");
    if (r == 2.0) return l2_norm(f);
    if (std::isinf(r)) {
        double m = 0.0;
        for (const auto& v : f.values()) {
            const double a = std::abs(v);
            if (!std::isfinite(a)) throw CorruptField();
            m = std::max(m, a);
        }
        return m;
    }
    double sum = 0.0;
    for (const auto& v : f.values()) {
        const double a = std::abs(v);
        if (!std::isfinite(a)) throw CorruptField();
        sum += std::pow(a, r);
    }
    return std::pow(f.grid().cell_volume() * sum, 1.0 / r);
}

double boundary_mass_fraction(const ComplexField& f, double shell) {
    const Grid& g = f.grid();
    const int n = g.points_per_axis();
    const double cut = (1.0 - shell) * g.half_length();
    auto outside = [&](int i) { return std::abs(g.coordinate(i)) >= cut; };
    double total = 0.0;
    double edge = 0.0;
    for (std::size_t idx = 0; idx < f.size(); ++idx) {
        const double a = std::norm(f[idx]);
        total += a;
        const int i = static_cast<int>(idx % n);
        const int j = static_cast<int>(idx / n);
        if (outside(i) || (g.dimension() == 2 && outside(j))) edge += a;
    }
    return total > 0.0 ? edge / total : 0.0;
}

void Trajectory::append(double time, ComplexField field) {
    if (!(field.grid() == grid_)) throw InvalidArgument("grid mismatch");
    if (!times_.empty()) {
        if (time < times_.back()) throw InvalidArgument("trajectory times must be non-decreasing");
        if (times_.size() >= 2 && time == times_.back() && times_[times_.size() - 2] == time)
            throw InvalidArgument("at most two snapshots per time");
    }
    times_.push_back(time);
    fields_.push_back(std::move(field));
}

std::size_t Trajectory::index_at(double time) const {
    auto it = std::upper_bound(times_.begin(), times_.end(), time);
    if (it == times_.begin() || *(it - 1) != time)
        throw InvalidArgument("time " + std::to_string(time) + " is not on the trajectory grid");
    return static_cast<std::size_t>(it - times_.begin()) - 1;
}

Trajectory Trajectory::prefix(double t_end) const {
    Trajectory out(grid_);
    for (std::size_t k = 0; k < times_.size() && times_[k] <= t_end; ++k)
        out.append(times_[k], fields_[k]);
    return out;
}

Trajectory difference(const Trajectory& a, const Trajectory& b) {
    if (a.times() != b.times()) throw InvalidArgument("trajectory time grids differ");
    Trajectory out(a.grid());
    for (std::size_t k = 0; k < a.size(); ++k) out.append(a.time(k), a.field(k) - b.field(k));
    return out;
}

double mixed_norm(const Trajectory& traj, double p, double r) {
    if (traj.empty()) throw InvalidArgument("empty trajectory");
    if (!(p >= 1.0)) throw InvalidArgument("invalid exponent");
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& f : traj.fields()) m = std::max(m, lr_norm(f, r));
        return m;
    }
    double sum = 0.0;
    const auto& t = traj.times();
    for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
        const double dt = t[k + 1] - t[k];
        if (dt > 0.0) sum += std::pow(lr_norm(traj.field(k), r), p) * dt;
    }
    return std::pow(sum, 1.0 / p);
}

double mixed_norm(const Trajectory& traj, const AdmissiblePair& pair) {
    return mixed_norm(traj, pair.p, pair.r);
}

double y_norm(const Trajectory& traj, const AdmissiblePair& pair) {
    return mixed_norm(traj, kInfinity, 2.0) + mixed_norm(traj, pair);
}

void YNormTracker::observe(double l2, double lr) {
    sup_l2_ = std::max(sup_l2_, l2);
    sup_lr_ = std::max(sup_lr_, lr);
}

void YNormTracker::advance(double l2, double lr, double dt) {
    observe(l2, lr);
    if (!std::isinf(pair_.p) && dt > 0.0) lp_integral_ += std::pow(lr, pair_.p) * dt;
}

double YNormTracker::mixed() const noexcept {
    if (std::isinf(pair_.p)) return sup_lr_;
    return std::pow(lp_integral_, 1.0 / pair_.p);
}

}  // namespace snls
