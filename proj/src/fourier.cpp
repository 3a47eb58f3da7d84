#include "snls/fourier.hpp"

#include <fftw3.h>

#include <mutex>
#include <vector>

namespace snls {

namespace {

// FFTW's planner is not re-entrant; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

FourierTransform::FourierTransform(const Grid& grid) : grid_(grid) {
    std::vector<Complex> scratch(grid.size());
    const int n = grid.points_per_axis();
    std::lock_guard lock(planner_mutex());
    // Plans are created against scratch storage and run with the new-array
    // interface; FFTW_UNALIGNED lets callers pass any vector.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (grid.dimension() == 1) {
        forward_plan_ = fftw_plan_dft_1d(n, as_fftw(scratch.data()), as_fftw(scratch.data()),
                                         FFTW_FORWARD, flags);
        inverse_plan_ = fftw_plan_dft_1d(n, as_fftw(scratch.data()), as_fftw(scratch.data()),
                                         FFTW_BACKWARD, flags);
    } else {
        forward_plan_ = fftw_plan_dft_2d(n, n, as_fftw(scratch.data()), as_fftw(scratch.data()),
                                         FFTW_FORWARD, flags);
        inverse_plan_ = fftw_plan_dft_2d(n, n, as_fftw(scratch.data()), as_fftw(scratch.data()),
                                         FFTW_BACKWARD, flags);
    }
    if (!forward_plan_ || !inverse_plan_) throw Error("FFTW planning failed");
}

FourierTransform::FourierTransform(FourierTransform&& other) noexcept
    : grid_(other.grid_), forward_plan_(other.forward_plan_), inverse_plan_(other.inverse_plan_) {
    other.forward_plan_ = nullptr;
    other.inverse_plan_ = nullptr;
}

FourierTransform::~FourierTransform() {
    std::lock_guard lock(planner_mutex());
    if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void FourierTransform::forward(std::span<Complex> data) const {
    if (data.size() != grid_.size()) throw InvalidArgument("transform size mismatch");
    fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(data.data()), as_fftw(data.data()));
}

void FourierTransform::inverse(std::span<Complex> data) const {
    if (data.size() != grid_.size()) throw InvalidArgument("transform size mismatch");
    fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), as_fftw(data.data()), as_fftw(data.data()));
    const double scale = 1.0 / static_cast<double>(data.size());
    for (auto& v : data) v *= scale;
}

}  // namespace snls
