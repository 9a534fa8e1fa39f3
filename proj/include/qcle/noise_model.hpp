#pragma once

#include <cstddef>
#include <vector>

#include "qcle/grid.hpp"
#include "qcle/params.hpp"

namespace qcle {

/// Stationary noise as seen on a sampling grid: the bath spectral density
/// restricted to |omega| <= pi/dt on a periodic frequency lattice of
/// `fft_len` >= 2 n points. Samples are held constant over each step when
/// driving the dynamics. Both the moment equations and the Monte Carlo
/// sampler use this one object, so they see the same regularized noise.
struct DiscreteNoise {
  TimeGrid grid;
  std::size_t fft_len;
  /// Per-mode variance S(omega_j) / (fft_len dt) for j = 0..fft_len/2.
  std::vector<double> mode_variance;
  /// Lag covariance C_k = <xi_j xi_{j+k}> for k = 0..n-1.
  std::vector<double> covariance;

  double lag_spacing() const { return grid.dt(); }
};

DiscreteNoise make_discrete_noise(const TimeGrid& grid, const BathParams& bath);

}  // namespace qcle
