#include "qcle/moments.hpp"

#include <cmath>
#include <numbers>
#include <limits>
#include <sstream>

#include "qcle/error.hpp"
#include "qcle/fourier.hpp"
#include "qcle/kernels.hpp"
#include "qcle/noise_model.hpp"
#include "qcle/simd.hpp"
#include "quadrature.hpp"

namespace qcle {
namespace {

std::vector<double> sample(const TimeGrid& grid, double (*fn)(double, double, double), double gamma,
                           double eta) {
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) out[k] = fn(grid[k], gamma, eta);
  return out;
}

std::vector<double> reversed(const std::vector<double>& v) { return {v.rbegin(), v.rend()}; }

// int_{t_{m-1}}^{t_m} chi_v for m = 1..n-1 (index 0 unused).
std::vector<double> panel_integrals_chi_v(const TimeGrid& grid, double gamma, double eta) {
  std::vector<double> w(grid.size(), 0.0);
  for (std::size_t m = 1; m < grid.size(); ++m) {
    w[m] = detail::gauss_legendre([&](double s) { return chi_v(s, gamma, eta); }, grid[m - 1], grid[m]);
  }
  return w;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& f, double dt) {
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t k = 1; k < f.size(); ++k) out[k] = out[k - 1] + 0.5 * dt * (f[k - 1] + f[k]);
  return out;
}

// Var of int_0^t chi_v(t - s) xi(s) ds for sample-and-hold noise:
// V_n = sum_{a,b=1..n} W_a W_b C_{a-b}.
std::vector<double> noise_driven_variance(const TimeGrid& grid, const BathParams& bath, double eta) {
  const std::size_t n = grid.size();
  const DiscreteNoise noise = make_discrete_noise(grid, bath);
  const std::vector<double> w = panel_integrals_chi_v(grid, bath.gamma, eta);
  const std::vector<double> crev = reversed(noise.covariance);
  std::vector<double> v(n, 0.0);
  for (std::size_t m = 1; m < n; ++m) {
    const double lagged = simd::dot({w.data() + 1, m - 1}, {crev.data() + (n - m), m - 1});
    v[m] = v[m - 1] + w[m] * (w[m] * noise.covariance[0] + 2.0 * lagged);
  }
  return v;
}

// 2 int_0^t chi_q(y) <phi_v(y) q0> dy with <phi_v(y) q0> = int_0^y chi_v_dot(y-u) X(u) du.
// X(u) = (2 gamma T / nu) ln(u) + Y(u), Y bounded; the logarithm is integrated
// against hat functions exactly on the first panel.
std::vector<double> preparation_cross_term(const TimeGrid& grid, const BathParams& bath, double eta) {
  const std::size_t n = grid.size();
  const double dt = grid.dt();
  const double nu = bath.nu;
  const double log_coeff = 2.0 * bath.gamma * bath.temp / nu;

  std::vector<double> y(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = grid[k];
    const double h = (k == 0) ? 0.0 : std::log(-std::expm1(-nu * u) / (nu * u));
    y[k] = log_coeff * (std::log(nu) + h) + xi_q0_corr_regular(u, bath.gamma, bath.temp, nu, eta);
  }

  // Hat-function weights of ln(u): left[k], right[k] for panel [k dt, (k+1) dt].
  std::vector<double> left(n, 0.0);
  std::vector<double> right(n, 0.0);
  left[0] = dt * (0.5 * std::log(dt) - 0.75);
  right[0] = dt * (0.5 * std::log(dt) - 0.25);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double a = grid[k];
    left[k] = detail::gauss_legendre([&](double u) { return std::log(u) * (a + dt - u) / dt; }, a, a + dt);
    right[k] = detail::gauss_legendre([&](double u) { return std::log(u) * (u - a) / dt; }, a, a + dt);
  }
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = left[k] + (k > 0 ? right[k - 1] : 0.0);
    w[k] = dt * y[k] + log_coeff * lambda;
  }

  const std::vector<double> dv = sample(grid, chi_v_dot, bath.gamma, eta);
  const std::vector<double> drev = reversed(dv);
  std::vector<double> integrand(n, 0.0);
  for (std::size_t m = 1; m < n; ++m) {
    double p = simd::dot({drev.data() + (n - 1 - m), m + 1}, {w.data(), m + 1});
    p -= 0.5 * dt * (dv[m] * y[0] + dv[0] * y[m]);
    p -= log_coeff * dv[0] * left[m];
    integrand[m] = chi_q(grid[m], bath.gamma, eta) * p;
  }
  std::vector<double> out = cumulative_trapezoid(integrand, dt);
  for (auto& v : out) v *= 2.0;
  return out;
}

}  // namespace

double phi_v_cov(double z, double y, const BathParams& bath, double eta, const QuadSpec& quad) {
  if (z < 0.0 || y < 0.0) throw DomainError("phi_v_cov: times must be >= 0");
  bath.validate();
  if (z == 0.0 || y == 0.0) return 0.0;
  const double gamma = bath.gamma;
  const double xz = chi_v(z, gamma, eta);
  const double dz = chi_v_dot(z, gamma, eta);
  const double xy = chi_v(y, gamma, eta);
  const double dy = chi_v_dot(y, gamma, eta);
  // int_0^z chi_v_dot(s) e^{i w s} ds = chi~(w) [i w (chi_v_dot(z) e^{i w z} - 1) + eta chi_v(z) e^{i w z}]
  auto finite_transform = [&](double w, double x, double d, double t) {
    const cplx e = std::polar(1.0, w * t);
    return chi_tilde(w, gamma, eta) * (cplx{0.0, w} * (d * e - 1.0) + eta * x * e);
  };
  auto integrand = [&](double w) {
    const cplx jz = finite_transform(w, xz, dz, z);
    const cplx jy = finite_transform(w, xy, dy, y);
    const cplx phase = std::polar(1.0, -w * (z - y));
    return noise_psd(w, gamma, bath.temp, bath.nu) * (phase * jz * std::conj(jy)).real();
  };
  // Even integrand: (1/2pi) * 2 int_0^cutoff.
  const double coarse = detail::gauss_legendre_composite(integrand, 0.0, quad.cutoff, quad.panel);
  const double fine = detail::gauss_legendre_composite(integrand, 0.0, quad.cutoff, 0.5 * quad.panel);
  if (std::abs(fine - coarse) > quad.rel_tol * std::max(std::abs(fine), 1e-300)) {
    std::ostringstream msg;
    msg << "phi_v_cov: quadrature error estimate " << std::abs(fine - coarse)
        << " exceeds tolerance at (z, y) = (" << z << ", " << y << ")";
    throw NumericalError(msg.str());
  }
  return fine / std::numbers::pi;
}

SampledSignal VarianceParts::total() const { return thermal + noise + cross; }

VarianceParts variance_parts(const TimeGrid& grid, const BathParams& bath, const PotentialParams& potential) {
  bath.validate();
  const double eta = potential.eta;
  std::vector<double> thermal(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double x = chi_v(grid[k], bath.gamma, eta);
    thermal[k] = bath.temp * x * x;
  }
  return {SampledSignal(grid, std::move(thermal)), SampledSignal(grid, noise_driven_variance(grid, bath, eta)),
          SampledSignal(grid, preparation_cross_term(grid, bath, eta))};
}

SampledSignal variance(const TimeGrid& grid, const BathParams& bath, const PotentialParams& potential) {
  return variance_parts(grid, bath, potential).total();
}

MeanTrajectory mean_trajectory(const InitialState& init, const PotentialParams& potential,
                               const BathParams& bath, const SampledSignal& sigma2, double tol,
                               std::size_t k_max) {
  bath.validate();
  const TimeGrid& grid = sigma2.grid;
  const std::size_t n = grid.size();
  const double dt = grid.dt();
  const double gamma = bath.gamma;
  const double eta = potential.eta;
  const double alpha = potential.alpha;
  if (alpha < 0.0) throw DomainError("mean_trajectory: alpha must be >= 0");

  const std::vector<double> cv = sample(grid, chi_v, gamma, eta);
  const std::vector<double> panels = panel_integrals_chi_v(grid, gamma, eta);
  SampledSignal f(grid);
  double cum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) cum += panels[k];
    const double v_term = init.drop_v0 ? 0.0 : cv[k] * init.v0;
    // -eps int_0^t chi_v: the constant force -dV/dq contributes with a minus sign.
    f[k] = chi_q(grid[k], gamma, eta) * init.q0 + v_term - potential.epsilon * cum;
  }

  const std::vector<double> cvrev = reversed(cv);
  FunctionalProblem<SampledSignal> problem{f, [&](const SampledSignal& g) {
    SampledSignal out(grid);
    if (alpha == 0.0) return out;
    std::vector<double> h(n);
    for (std::size_t k = 0; k < n; ++k) h[k] = g[k] * (g[k] * g[k] + 3.0 * sigma2[k]);
    for (std::size_t m = 1; m < n; ++m) {
      double acc = simd::dot({cvrev.data() + (n - 1 - m), m + 1}, {h.data(), m + 1});
      acc -= 0.5 * (cv[m] * h[0] + cv[0] * h[m]);
      out[m] = -alpha * dt * acc;
    }
    return out;
  }};
  auto sol = djm_solve(problem, tol, k_max);
  if (!sol.converged) {
    std::ostringstream msg;
    msg << "mean_trajectory: recursion did not converge in " << sol.k() << " terms; norms:";
    for (double v : sol.term_norms) msg << ' ' << v;
    throw NumericalError(msg.str());
  }
  return {std::move(sol.partial_sum), std::move(sol.term_norms), true};
}

MomentSet compute_moments(const InitialState& init, const PotentialParams& potential, const BathParams& bath,
                          const TimeGrid& grid) {
  SampledSignal s2 = variance(grid, bath, potential);
  MeanTrajectory g = mean_trajectory(init, potential, bath, s2);
  const double eq = s2.values.back();
  return {std::move(g.mean), std::move(s2), eq};
}

Spectrum variance_spectrum(const SampledSignal& sigma2, const FreqGrid& grid, double plateau_tol) {
  const std::size_t n = sigma2.size();
  const double last = sigma2.values.back();
  const double ref = sigma2.interpolate(0.9 * sigma2.grid.t_max());
  if (std::abs(last - ref) > plateau_tol * std::max(std::abs(last), 1e-12)) {
    std::ostringstream msg;
    msg << "variance_spectrum: no plateau (|sigma2(t_max) - sigma2(0.9 t_max)| = " << std::abs(last - ref)
        << "); extend t_max";
    throw PreconditionError(msg.str());
  }
  SampledSignal transient(sigma2.grid);
  for (std::size_t k = 0; k < n; ++k) transient[k] = sigma2[k] - last;
  const Spectrum one_sided = fourier_forward(transient, grid, std::numeric_limits<double>::infinity());
  Spectrum out(grid);
  const std::size_t h = grid.half();
  // Even extension: 2 Re of the one-sided transform, symmetric by construction.
  for (std::size_t k = 0; k <= h; ++k) {
    const double re = 2.0 * one_sided.values[h + k].real();
    out.values[h + k] = re;
    out.values[h - k] = re;
  }
  if (last != 0.0) out.add_singular(0.0, 2.0 * std::numbers::pi * last);
  return out;
}

}  // namespace qcle
