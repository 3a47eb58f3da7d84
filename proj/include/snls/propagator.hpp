#pragma once

#include <span>
#include <vector>

#include "snls/fourier.hpp"
#include "snls/grid.hpp"

namespace snls {

/// The free Schroedinger group S_t = exp(i t Laplacian), exact on Fourier
/// modes: mode e^{ikx} evolves to e^{i(kx - |k|^2 t)}.
///
/// Holds FFTW plans and a phase cache, so an instance belongs to one worker.
class FreePropagator {
public:
    explicit FreePropagator(const Grid& grid);

    const Grid& grid() const noexcept { return fft_.grid(); }
    std::span<const double> squared_wavenumbers() const noexcept { return k2_; }

    /// f <- S_t f. Any real t (group, not semigroup).
    void apply(ComplexField& f, double t) const;
    ComplexField step(const ComplexField& f, double t) const;

    void to_fourier(std::span<Complex> data) const { fft_.forward(data); }
    void from_fourier(std::span<Complex> data) const { fft_.inverse(data); }
    /// Multiplies a spectrum by e^{-i|k|^2 t}.
    void evolve_spectrum(std::span<Complex> spectrum, double t) const;

private:
    const std::vector<Complex>& phases(double t) const;

    FourierTransform fft_;
    std::vector<double> k2_;
    mutable double cached_time_ = 0.0;
    mutable std::vector<Complex> cached_phases_;
};

/// Convenience wrapper that plans a transform per call.
ComplexField free_step(const ComplexField& f, double t);

enum class Quadrature { left_endpoint, trapezoid };

/// Phi_f(t) = int_0^t S_{t-s} f(s) ds over the forcing's sample times.
/// Left-endpoint quadrature is first order for cadlag forcing; the
/// trapezoid option is second order for smooth forcing and needs t on the grid.
ComplexField duhamel(const FreePropagator& prop, const Trajectory& forcing, double t,
                     Quadrature rule = Quadrature::left_endpoint);

/// Phi_f at every sample time of the forcing, by recursive accumulation
/// W_{k+1} = S_{dt_k}(W_k + f_k dt_k) in Fourier space.
Trajectory duhamel_trajectory(const FreePropagator& prop, const Trajectory& forcing,
                              Quadrature rule = Quadrature::left_endpoint);

/// S_t phi sampled at t = k dt on [0, T].
Trajectory free_trajectory(const FreePropagator& prop, const ComplexField& phi, double horizon, double dt);

/// ||S_. phi||_{L^p(0,T;L^r)} / ||phi||_{L^2}. Throws on a zero phi.
double strichartz_homogeneous_probe(const ComplexField& phi, const AdmissiblePair& pair, double horizon,
                                    double dt);

/// Number of uniform steps of size dt covering [0, T]; throws unless dt divides T.
long step_count(double horizon, double dt);

}  // namespace snls
