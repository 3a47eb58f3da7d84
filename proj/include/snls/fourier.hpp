#pragma once

#include <span>

#include "snls/grid.hpp"

namespace snls {

/// Owns an FFTW plan pair for one grid. Not shareable between threads;
/// every worker builds its own instance.
class FourierTransform {
public:
    explicit FourierTransform(const Grid& grid);
    ~FourierTransform();

    FourierTransform(const FourierTransform&) = delete;
    FourierTransform& operator=(const FourierTransform&) = delete;
    FourierTransform(FourierTransform&& other) noexcept;
    FourierTransform& operator=(FourierTransform&&) = delete;

    const Grid& grid() const noexcept { return grid_; }

    /// Unnormalized forward DFT, in place.
    void forward(std::span<Complex> data) const;
    /// Inverse DFT including the 1/N^n normalization, in place.
    void inverse(std::span<Complex> data) const;

private:
    Grid grid_;
    void* forward_plan_ = nullptr;
    void* inverse_plan_ = nullptr;
};

}  // namespace snls
