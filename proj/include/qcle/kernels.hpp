#pragma once

#include <complex>
#include <cstddef>

#include "qcle/grid.hpp"

// Closed-form linear kernels of the damped oscillator s^2 + gamma s + eta and
// the bath correlation functions.
namespace qcle {

/// Principal square root of gamma^2 - 4 eta (purely imaginary when underdamped).
cplx omega0(double gamma, double eta);

/// Velocity susceptibility chi_v(t) = (2/omega0) e^{-gamma t/2} sinh(omega0 t/2).
double chi_v(double t, double gamma, double eta);
/// Time derivative of chi_v.
double chi_v_dot(double t, double gamma, double eta);
/// chi_q(t) = chi_v_dot(t) + gamma chi_v(t).
double chi_q(double t, double gamma, double eta);
/// Integral of chi_v over [0, t].
double chi_v_integral(double t, double gamma, double eta);

/// (eta - omega^2 - i gamma omega)^{-1}; Hermitian by construction.
cplx chi_tilde(double omega, double gamma, double eta);

/// Symmetrized bath spectral density (2 pi gamma T / nu) omega coth(pi omega / nu).
double noise_psd(double omega, double gamma, double temp, double nu);

inline constexpr double kNoiseTauMin = 1e-8;

/// Regular part -(gamma T nu / 2) sinh^{-2}(nu tau / 2) of the noise correlation.
/// Throws DomainError for |tau| < tau_min; use noise_psd near coincidence.
double noise_correlation(double tau, double gamma, double temp, double nu,
                         double tau_min = kNoiseTauMin);

struct MatsubaraSum {
  double value;
  std::size_t terms;
};

/// Noise / initial-position correlation as a truncated Matsubara sum whose
/// omitted tail is bounded by `tol`.
MatsubaraSum xi_q0_corr(double t, double gamma, double temp, double nu, double eta,
                        double tol);

/// Same quantity split as (2 gamma T / nu) ln(1 - e^{-nu t}) + regular(t); this
/// returns only the bounded remainder, which is finite at t = 0.
double xi_q0_corr_regular(double t, double gamma, double temp, double nu, double eta,
                          double tol = 1e-15);

}  // namespace qcle
