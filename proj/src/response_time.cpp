#include "qcle/response_time.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcle/djm.hpp"
#include "qcle/error.hpp"

namespace qcle {

void ResponseProblem::validate() const {
  potential.validate();
  bath.validate();
  if (potential.f0 == 0.0) throw DomainError("ResponseProblem: f0 must be nonzero");
  if (!(sigma2.grid == grid)) throw DomainError("ResponseProblem: sigma2 grid does not match problem grid");
}

SampledSignal volterra_f(const TimeGrid& grid, double epsilon, double f0) {
  if (f0 == 0.0) throw DomainError("volterra_f: f0 must be nonzero");
  SampledSignal f(grid);
  const double c = epsilon / (2.0 * f0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    f[k] = t - c * t * t;
  }
  return f;
}

SampledSignal volterra_B(const SampledSignal& r, const ResponseProblem& problem) {
  if (!(r.grid == problem.grid)) throw DomainError("volterra_B: grid mismatch");
  const auto& p = problem.potential;
  const double gamma = problem.bath.gamma;
  const double af2 = p.alpha * p.f0 * p.f0;
  const std::size_t n = r.size();
  const double dt = r.grid.dt();

  // With g = (eta + 3 alpha sigma^2) R + alpha f0^2 R^3 the integral splits into
  // gamma int R + t int g - int y g, each accumulated by the trapezoid rule.
  SampledSignal out(r.grid);
  double i1 = 0.0, i2 = 0.0, i3 = 0.0;
  double prev_r = 0.0, prev_g = 0.0, prev_yg = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = r.grid[k];
    const double rk = r[k];
    const double g = (p.eta + 3.0 * p.alpha * problem.sigma2[k]) * rk + af2 * rk * rk * rk;
    const double yg = t * g;
    if (k > 0) {
      i1 += 0.5 * dt * (prev_r + rk);
      i2 += 0.5 * dt * (prev_g + g);
      i3 += 0.5 * dt * (prev_yg + yg);
    }
    out[k] = -(gamma * i1 + t * i2 - i3);
    prev_r = rk;
    prev_g = g;
    prev_yg = yg;
  }
  return out;
}

namespace {

// Trapezoid running sums of R, g and y g up to some node.
struct History {
  double i1 = 0.0, i2 = 0.0, i3 = 0.0;
};

double nonlinear_g(const ResponseProblem& problem, std::size_t k, double r) {
  const auto& p = problem.potential;
  return (p.eta + 3.0 * p.alpha * problem.sigma2[k]) * r + p.alpha * p.f0 * p.f0 * r * r * r;
}

}  // namespace

ResponseSolution solve_response_djm(const ResponseProblem& problem, double tol, std::size_t k_max, double window) {
  problem.validate();
  const TimeGrid& grid = problem.grid;
  const std::size_t n = grid.size();
  const double dt = grid.dt();
  const double gamma = problem.bath.gamma;
  const SampledSignal f = volterra_f(grid, problem.potential.epsilon, problem.potential.f0);

  std::size_t steps = n - 1;
  if (window > 0.0) steps = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(window / dt)), 1, n - 1);

  ResponseSolution out{SampledSignal(grid), {}, {}, 0, true};
  History hist;  // integrals over [0, t_a]
  std::size_t ka = 0;
  while (ka + 1 < n) {
    const std::size_t kb = std::min(n - 1, ka + steps);
    const std::size_t m = kb - ka + 1;
    const double ta = grid[ka];
    const TimeGrid local(grid[kb] - ta, m);

    SampledSignal fw(local);
    for (std::size_t j = 0; j < m; ++j) {
      const double t = grid[ka + j];
      fw[j] = f[ka + j] - (gamma * hist.i1 + t * hist.i2 - hist.i3);
    }
    auto op = [&](const SampledSignal& r) {
      SampledSignal b(local);
      double i1 = 0.0, i2 = 0.0, i3 = 0.0;
      double pr = 0.0, pg = 0.0, pyg = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double t = grid[ka + j];
        const double g = nonlinear_g(problem, ka + j, r[j]);
        if (j > 0) {
          i1 += 0.5 * dt * (pr + r[j]);
          i2 += 0.5 * dt * (pg + g);
          i3 += 0.5 * dt * (pyg + t * g);
        }
        b[j] = -(gamma * i1 + t * i2 - i3);
        pr = r[j];
        pg = g;
        pyg = t * g;
      }
      return b;
    };
    auto sol = djm_solve(FunctionalProblem<SampledSignal>{fw, op}, tol, k_max);
    out.converged = out.converged && sol.converged;
    for (std::size_t i = 0; i < sol.term_norms.size(); ++i) {
      if (i >= out.term_norms.size()) out.term_norms.push_back(0.0);
      out.term_norms[i] = std::max(out.term_norms[i], sol.term_norms[i]);
    }
    for (std::size_t i = 0; i < sol.telescoping_residuals.size(); ++i) {
      if (i >= out.telescoping_residuals.size()) out.telescoping_residuals.push_back(0.0);
      out.telescoping_residuals[i] = std::max(out.telescoping_residuals[i], sol.telescoping_residuals[i]);
    }
    ++out.windows;

    const auto& r = sol.partial_sum;
    for (std::size_t j = 0; j < m; ++j) out.r[ka + j] = r[j];
    for (std::size_t j = 1; j < m; ++j) {
      const double t0 = grid[ka + j - 1], t1 = grid[ka + j];
      const double g0 = nonlinear_g(problem, ka + j - 1, r[j - 1]);
      const double g1 = nonlinear_g(problem, ka + j, r[j]);
      hist.i1 += 0.5 * dt * (r[j - 1] + r[j]);
      hist.i2 += 0.5 * dt * (g0 + g1);
      hist.i3 += 0.5 * dt * (t0 * g0 + t1 * g1);
    }
    ka = kb;
  }
  return out;
}

SampledSignal integrate_duffing(const ResponseProblem& problem, double dt_sub) {
  problem.validate();
  const double dt = problem.grid.dt();
  if (!(dt_sub > 0.0) || dt_sub > dt * (1.0 + 1e-12)) {
    throw PreconditionError("integrate_duffing: dt_sub must lie in (0, grid dt]");
  }
  const auto& p = problem.potential;
  const double gamma = problem.bath.gamma;
  const double af2 = p.alpha * p.f0 * p.f0;
  const double force = p.epsilon / p.f0;
  const auto steps = static_cast<std::size_t>(std::ceil(dt / dt_sub - 1e-9));
  const double h = dt / static_cast<double>(steps);
  const auto& s2 = problem.sigma2;

  auto accel = [&](double t, double r, double v) {
    return -gamma * v - (p.eta + 3.0 * p.alpha * s2.interpolate(t)) * r - af2 * r * r * r - force;
  };

  SampledSignal out(problem.grid);
  double r = 0.0, v = 1.0;
  const double blowup = 1e12;
  for (std::size_t k = 1; k < problem.grid.size(); ++k) {
    double t = problem.grid[k - 1];
    for (std::size_t j = 0; j < steps; ++j) {
      const double k1r = v, k1v = accel(t, r, v);
      const double k2r = v + 0.5 * h * k1v, k2v = accel(t + 0.5 * h, r + 0.5 * h * k1r, k2r);
      const double k3r = v + 0.5 * h * k2v, k3v = accel(t + 0.5 * h, r + 0.5 * h * k2r, k3r);
      const double k4r = v + h * k3v, k4v = accel(t + h, r + h * k3r, k4r);
      r += h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
      v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      t += h;
    }
    if (!std::isfinite(r) || !std::isfinite(v) || std::abs(r) > blowup) {
      throw NumericalError("integrate_duffing: solution blew up at t = " + std::to_string(problem.grid[k]) +
                           "; try a smaller dt_sub");
    }
    out[k] = r;
  }
  return out;
}

double ode_residual(const SampledSignal& r, const ResponseProblem& problem) {
  if (!(r.grid == problem.grid)) throw DomainError("ode_residual: grid mismatch");
  const auto& p = problem.potential;
  const double gamma = problem.bath.gamma;
  const double af2 = p.alpha * p.f0 * p.f0;
  const double dt = r.grid.dt();
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < r.size(); ++k) {
    const double rdd = (r[k + 1] - 2.0 * r[k] + r[k - 1]) / (dt * dt);
    const double rd = (r[k + 1] - r[k - 1]) / (2.0 * dt);
    const double res = rdd + gamma * rd + (p.eta + 3.0 * p.alpha * problem.sigma2[k]) * r[k] +
                       af2 * r[k] * r[k] * r[k] + p.epsilon / p.f0;
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

}  // namespace qcle
