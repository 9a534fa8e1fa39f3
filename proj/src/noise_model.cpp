#include "qcle/noise_model.hpp"

#include <fftw3.h>

#include <bit>
#include <numbers>

#include "qcle/kernels.hpp"

namespace qcle {

DiscreteNoise make_discrete_noise(const TimeGrid& grid, const BathParams& bath) {
  bath.validate();
  const std::size_t n = grid.size();
  const std::size_t len = std::bit_ceil(2 * n);
  const std::size_t half = len / 2;
  const double dt = grid.dt();
  const double d_omega = 2.0 * std::numbers::pi / (static_cast<double>(len) * dt);

  DiscreteNoise out{grid, len, std::vector<double>(half + 1), std::vector<double>(n)};
  for (std::size_t j = 0; j <= half; ++j) {
    out.mode_variance[j] = noise_psd(static_cast<double>(j) * d_omega, bath.gamma, bath.temp, bath.nu) /
                           (static_cast<double>(len) * dt);
  }

  // C_k = lambda_0 + (-1)^k lambda_half + 2 sum_j lambda_j cos(2 pi j k / len): a DCT-I.
  std::vector<double> in(out.mode_variance);
  std::vector<double> res(half + 1);
  fftw_plan plan = fftw_plan_r2r_1d(static_cast<int>(half + 1), in.data(), res.data(),
                                    FFTW_REDFT00, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  for (std::size_t k = 0; k < n; ++k) out.covariance[k] = res[k];
  return out;
}

}  // namespace qcle
