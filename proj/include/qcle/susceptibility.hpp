#pragma once

#include <cstddef>
#include <vector>

#include "qcle/grid.hpp"
#include "qcle/params.hpp"

namespace qcle {

struct SusceptibilityProblem {
  PotentialParams potential;
  BathParams bath;
  Spectrum sigma2_spec;  ///< from variance_spectrum, on `grid`
  FreqGrid grid;

  void validate() const;
};

/// Grid convolution (a * b)(omega) = int a(omega') b(omega - omega') d omega',
/// zero outside the grid. Dirac components are convolved exactly.
Spectrum convolve(const Spectrum& a, const Spectrum& b);

/// chi~(omega) (1 - (eps/f0) 2 pi delta(omega)).
Spectrum phi_omega(const SusceptibilityProblem& problem);

/// psi[chi] = -chi~ (1/2pi) chi * (3 alpha sigma2^ + (alpha f0^2 / 2pi) chi * chi).
Spectrum psi_operator(const Spectrum& chi, const SusceptibilityProblem& problem);

struct SusceptibilitySolution {
  Spectrum chi;
  std::vector<double> term_norms;
  std::vector<double> telescoping_residuals;
  std::size_t terms;
  bool converged;
};

inline constexpr std::size_t kSusceptibilityMaxTerms = 200;

/// chi = phi + psi[chi] by the Daftardar-Gejji recursion.
SusceptibilitySolution solve_susceptibility(const SusceptibilityProblem& problem, double tol,
                                            std::size_t k_max = kSusceptibilityMaxTerms);

/// chi~ sampled on a grid with exact Hermitian symmetry.
Spectrum chi_tilde_spectrum(const FreqGrid& grid, double gamma, double eta);

}  // namespace qcle
