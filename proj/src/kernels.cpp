#include "qcle/kernels.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qcle/error.hpp"
#include "quadrature.hpp"

namespace qcle {
namespace {

constexpr double kSeriesCut = 1e-3;

// sinh(z)/z with a Taylor branch near the critical-damping point.
cplx sinhc(cplx z) {
  if (std::abs(z) < kSeriesCut) {
    const cplx z2 = z * z;
    return 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sinh(z) / z;
}

struct Modes {
  double chi_v;
  double even;  // e^{-gamma t/2} cosh(omega0 t/2)
};

Modes modes(double t, double gamma, double eta) {
  if (t < 0.0 || !std::isfinite(t)) throw DomainError("kernel evaluated at t < 0");
  const cplx w = omega0(gamma, eta);
  const cplx z = 0.5 * w * t;
  const double a = 0.5 * gamma * t;
  if (std::abs(z) < kSeriesCut) {
    const double env = std::exp(-a);
    const cplx z2 = z * z;
    return {(t * env * sinhc(z)).real(), (env * (1.0 + z2 / 2.0 + z2 * z2 / 24.0)).real()};
  }
  // Separate exponentials keep the overdamped branch finite at large t.
  const cplx up = std::exp(z - a);
  const cplx down = std::exp(-z - a);
  return {((up - down) / w).real(), (0.5 * (up + down)).real()};
}

double dilog(double x) {
  // Real dilogarithm on [0, 1].
  if (x == 0.0) return 0.0;
  if (x > 0.5) {
    if (x == 1.0) return std::numbers::pi * std::numbers::pi / 6.0;
    return std::numbers::pi * std::numbers::pi / 6.0 - std::log(x) * std::log1p(-x) - dilog(1.0 - x);
  }
  double term = x;
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    const double add = term / (static_cast<double>(k) * k);
    sum += add;
    if (add < 1e-18 * sum) break;
    term *= x;
  }
  return sum;
}

void check_denominators(double gamma, double nu, double eta) {
  // nu_n^2 + gamma nu_n + eta is increasing in n, so only n = 1 can fail.
  if (nu * nu + gamma * nu + eta <= 0.0) {
    throw DomainError("Matsubara denominator nu^2 + gamma nu + eta must be positive");
  }
}

}  // namespace

cplx omega0(double gamma, double eta) { return std::sqrt(cplx{gamma * gamma - 4.0 * eta, 0.0}); }

double chi_v(double t, double gamma, double eta) { return modes(t, gamma, eta).chi_v; }

double chi_v_dot(double t, double gamma, double eta) {
  const Modes m = modes(t, gamma, eta);
  return m.even - 0.5 * gamma * m.chi_v;
}

double chi_q(double t, double gamma, double eta) {
  const Modes m = modes(t, gamma, eta);
  return m.even + 0.5 * gamma * m.chi_v;
}

double chi_v_integral(double t, double gamma, double eta) {
  if (t < 0.0) throw DomainError("chi_v_integral: t < 0");
  return detail::gauss_legendre_composite([&](double s) { return chi_v(s, gamma, eta); }, 0.0, t, 0.5);
}

cplx chi_tilde(double omega, double gamma, double eta) {
  if (omega < 0.0) return std::conj(chi_tilde(-omega, gamma, eta));
  const cplx den{eta - omega * omega, -gamma * omega};
  if (den == cplx{}) throw DomainError("chi_tilde: singular denominator (eta = 0, omega = 0)");
  return 1.0 / den;
}

double noise_psd(double omega, double gamma, double temp, double nu) {
  const double w = std::abs(omega);
  const double x = std::numbers::pi * w / nu;
  if (x < 1e-4) return 2.0 * gamma * temp * (1.0 + x * x / 3.0);
  return 2.0 * std::numbers::pi * gamma * temp / nu * w / std::tanh(x);
}

double noise_correlation(double tau, double gamma, double temp, double nu, double tau_min) {
  if (std::abs(tau) < tau_min) {
    throw DomainError("noise_correlation: |tau| below " + std::to_string(tau_min) +
                      " where the regular part diverges; use noise_psd");
  }
  const double s = std::sinh(0.5 * nu * std::abs(tau));
  return -0.5 * gamma * temp * nu / (s * s);
}

MatsubaraSum xi_q0_corr(double t, double gamma, double temp, double nu, double eta, double tol) {
  if (!(t > 0.0)) throw DomainError("xi_q0_corr: t must be > 0 (sum diverges at t = 0)");
  if (!(tol > 0.0)) throw DomainError("xi_q0_corr: tol must be > 0");
  check_denominators(gamma, nu, eta);
  const double q = std::exp(-nu * t);
  double sum = 0.0;
  std::size_t n = 0;
  while (true) {
    // Bound on the tail n+1, n+2, ...: each term <= e^{-nu_k t} / d_min.
    const double next = nu * static_cast<double>(n + 1);
    const double d_min = next + gamma + std::min(0.0, eta / next);
    const double tail = 2.0 * gamma * temp * std::exp(-next * t) / (d_min * (1.0 - q));
    if (d_min > 0.0 && tail < tol) break;
    ++n;
    const double vn = nu * static_cast<double>(n);
    sum += vn / (vn * vn + gamma * vn + eta) * std::exp(-vn * t);
    if (n > 100000000) throw NumericalError("xi_q0_corr: Matsubara sum did not reach tolerance");
  }
  return {-2.0 * gamma * temp * sum, n};
}

double xi_q0_corr_regular(double t, double gamma, double temp, double nu, double eta, double tol) {
  if (t < 0.0) throw DomainError("xi_q0_corr_regular: t < 0");
  check_denominators(gamma, nu, eta);
  const double q = std::exp(-nu * t);
  // The 1/nu_n^2 part sums to a dilogarithm; the remainder decays like 1/n^3.
  double sum = gamma / (nu * nu) * dilog(q);
  const double c = std::abs(eta - gamma * gamma) + std::abs(gamma * eta);
  double qn = 1.0;
  for (std::size_t n = 1; n < 2000000; ++n) {
    const double vn = nu * static_cast<double>(n);
    qn *= q;
    const double den = vn * vn + gamma * vn + eta;
    sum += ((eta - gamma * gamma) * vn - gamma * eta) / (vn * vn * den) * qn;
    // For k > n: |remainder_k| <= c (1 + 1/nu_{n+1}) / (nu_k^2 d_min).
    const double next = vn + nu;
    const double d_min = next + gamma + std::min(0.0, eta / next);
    const double tail_power = c * (1.0 + 1.0 / next) / (d_min * nu * vn);
    const double tail_geom = c * (1.0 + 1.0 / next) / (next * next * d_min) * qn * q / (1.0 - q + 1e-300);
    if (d_min > 0.0 && 2.0 * gamma * temp * std::min(tail_power, tail_geom) < tol) break;
  }
  return 2.0 * gamma * temp * sum;
}

}  // namespace qcle
