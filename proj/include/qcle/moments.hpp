#pragma once

#include <cstddef>
#include <vector>

#include "qcle/djm.hpp"
#include "qcle/grid.hpp"
#include "qcle/params.hpp"

namespace qcle {

/// Settings for the frequency integral behind phi_v_cov.
struct QuadSpec {
  double cutoff = 5000.0;   ///< |omega| integration limit (regularizes the quantum tail)
  double panel = 0.25;      ///< Gauss-Legendre panel width in omega
  double rel_tol = 1e-8;    ///< accepted |I(h) - I(h/2)| / |I|
};

/// <phi_v(z) phi_v(y)> for noise switched on at t = 0, band-limited at quad.cutoff.
double phi_v_cov(double z, double y, const BathParams& bath, double eta, const QuadSpec& quad = {});

/// Contributions to sigma^2(t): thermal T chi_v^2, the noise-driven position
/// variance, and the preparation cross term built from xi_q0_corr.
struct VarianceParts {
  SampledSignal thermal;
  SampledSignal noise;
  SampledSignal cross;

  SampledSignal total() const;
};

VarianceParts variance_parts(const TimeGrid& grid, const BathParams& bath, const PotentialParams& potential);

/// sigma^2(t) on the grid; depends only on (gamma, T, nu, eta).
SampledSignal variance(const TimeGrid& grid, const BathParams& bath, const PotentialParams& potential);

struct MomentSet {
  SampledSignal mean;
  SampledSignal variance;
  double equilibrium_variance;
};

inline constexpr double kDefaultPlateauTol = 1e-4;

struct InitialState {
  double q0 = 0.0;
  double v0 = 0.0;
  /// Drop the chi_v v0 term, as in the conditional mean G(t).
  bool drop_v0 = false;
};

struct MeanTrajectory {
  SampledSignal mean;
  std::vector<double> term_norms;
  bool converged;
};

/// Solves G = chi_q q0 + chi_v v0 - eps int chi_v - alpha int chi_v(t-y) (G^3 + 3 G sigma^2)(y) dy
/// by the Daftardar-Gejji recursion. Throws NumericalError when the recursion
/// does not converge, with the term-norm history in the message.
MeanTrajectory mean_trajectory(const InitialState& init, const PotentialParams& potential,
                               const BathParams& bath, const SampledSignal& sigma2,
                               double tol = 1e-10, std::size_t k_max = 200);

/// Mean and variance together; the plateau estimate is sigma^2(t_max).
MomentSet compute_moments(const InitialState& init, const PotentialParams& potential,
                          const BathParams& bath, const TimeGrid& grid);

}  // namespace qcle

namespace qcle {

/// Splits sigma^2 = sigma2_eq + transient(t) and transforms it with the
/// transient extended evenly to t < 0: a Dirac component (0, 2 pi sigma2_eq)
/// plus a real regular part. Throws PreconditionError when no plateau is
/// visible over the last 10% of the grid.
Spectrum variance_spectrum(const SampledSignal& sigma2, const FreqGrid& grid,
                           double plateau_tol = kDefaultPlateauTol);

}  // namespace qcle
