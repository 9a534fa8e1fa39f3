#pragma once

#include <span>
#include <vector>

#include "qcle/grid.hpp"

// Transform convention: F{g}(omega) = int g(t) e^{i omega t} dt,
// g(t) = (1/2 pi) int F(omega) e^{-i omega t} d omega.
namespace qcle {

inline constexpr double kDefaultEdgeTol = 1e-3;

/// One-sided transform of a signal on [0, t_max], exact for its
/// piecewise-linear interpolant. Requires |last value| < edge_tol.
Spectrum fourier_forward(const SampledSignal& signal, const FreqGrid& grid,
                         double edge_tol = kDefaultEdgeTol);

struct ResponseSamples {
  std::vector<double> real;
  std::vector<double> imag;  ///< should vanish for a physical (Hermitian) spectrum
};

/// Inverse transform at arbitrary times (t may be negative). The regular
/// part is integrated by the trapezoid rule; beyond the grid the spectrum is
/// continued as a/omega^2 + i b/omega^3 matched at the edge, which is the
/// large-frequency form of every oscillator susceptibility.
ResponseSamples inverse_fourier(const Spectrum& chi, std::span<const double> times,
                                double edge_tol = kDefaultEdgeTol);

/// Real response R(t) on the grid; max |imaginary residue| is reported through
/// `max_imag` when non-null.
SampledSignal response_from_susceptibility(const Spectrum& chi, const TimeGrid& grid,
                                           double edge_tol = kDefaultEdgeTol,
                                           double* max_imag = nullptr);

}  // namespace qcle
