#pragma once

#include <cstddef>
#include <vector>

#include "qcle/grid.hpp"
#include "qcle/params.hpp"

namespace qcle {

/// R'' + gamma R' + (eta + 3 alpha sigma^2) R + alpha f0^2 R^3 + eps/f0 = delta(t).
struct ResponseProblem {
  PotentialParams potential;
  BathParams bath;
  SampledSignal sigma2;
  TimeGrid grid;

  void validate() const;
};

/// f(t) = t - (eps / (2 f0)) t^2.
SampledSignal volterra_f(const TimeGrid& grid, double epsilon, double f0);

/// B(R)(t) = -int_0^t { gamma R(y) + (t - y) [(eta + 3 alpha sigma^2) R + alpha f0^2 R^3](y) } dy.
SampledSignal volterra_B(const SampledSignal& r, const ResponseProblem& problem);

struct ResponseSolution {
  SampledSignal r;
  /// Per iteration index, the largest term norm over all windows.
  std::vector<double> term_norms;
  std::vector<double> telescoping_residuals;
  std::size_t windows;
  bool converged;
};

inline constexpr std::size_t kResponseMaxTerms = 200;
inline constexpr double kResponseWindow = 1.0;

/// Runs the recursion window by window: on [a, b] the already solved history
/// on [0, a] moves into the inhomogeneity. The discrete equations are the same
/// as for one window spanning the grid; short windows keep the partial sums
/// bounded, which the cubic term needs. window <= 0 uses a single window.
ResponseSolution solve_response_djm(const ResponseProblem& problem, double tol,
                                    std::size_t k_max = kResponseMaxTerms,
                                    double window = kResponseWindow);

/// Classical RK4 on the same ODE, resampled on the problem grid.
SampledSignal integrate_duffing(const ResponseProblem& problem, double dt_sub);

/// Centered-difference residual of the ODE over interior nodes.
double ode_residual(const SampledSignal& r, const ResponseProblem& problem);

}  // namespace qcle
