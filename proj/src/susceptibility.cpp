#include "qcle/susceptibility.hpp"

#include <cmath>
#include <numbers>

#include "qcle/djm.hpp"
#include "qcle/error.hpp"
#include "qcle/kernels.hpp"
#include "qcle/simd.hpp"

namespace qcle {
namespace {

// Regular-times-regular part of the convolution at storage index s.
cplx regular_conv_at(const std::vector<double>& ar, const std::vector<double>& ai,
                     const std::vector<double>& br_rev, const std::vector<double>& bi_rev,
                     std::size_t s, std::size_t m, std::size_t h) {
  // c[s] = sum_p a[p] b[s - p + h], with 0 <= s - p + h <= m - 1.
  const long lo = std::max<long>(0, static_cast<long>(s + h) - static_cast<long>(m - 1));
  const long hi = std::min<long>(static_cast<long>(m - 1), static_cast<long>(s + h));
  if (hi < lo) return {};
  const auto p0 = static_cast<std::size_t>(lo);
  const auto len = static_cast<std::size_t>(hi - lo + 1);
  // b[s - p + h] = b_rev[m - 1 - s - h + p]
  const std::size_t q0 = m - 1 - s - h + p0;
  double re = 0.0, im = 0.0;
  simd::kernels().cdot(ar.data() + p0, ai.data() + p0, br_rev.data() + q0, bi_rev.data() + q0, len, &re, &im);
  return {re, im};
}

}  // namespace

void SusceptibilityProblem::validate() const {
  potential.validate();
  bath.validate();
  if (!(sigma2_spec.grid == grid)) throw DomainError("SusceptibilityProblem: sigma2 spectrum grid mismatch");
}

Spectrum chi_tilde_spectrum(const FreqGrid& grid, double gamma, double eta) {
  Spectrum out(grid);
  const std::size_t h = grid.half();
  for (std::size_t k = 0; k <= h; ++k) {
    const cplx v = chi_tilde(grid.at(h + k), gamma, eta);
    out.values[h + k] = v;
    out.values[h - k] = std::conj(v);
  }
  return out;
}

Spectrum convolve(const Spectrum& a, const Spectrum& b) {
  if (!(a.grid == b.grid)) throw DomainError("convolve: grid mismatch");
  const FreqGrid& grid = a.grid;
  const std::size_t m = grid.size();
  const std::size_t h = grid.half();
  const double dw = grid.d_omega();

  std::vector<double> ar(m), ai(m), br_rev(m), bi_rev(m);
  for (std::size_t i = 0; i < m; ++i) {
    ar[i] = a.values[i].real();
    ai[i] = a.values[i].imag();
    br_rev[m - 1 - i] = b.values[i].real();
    bi_rev[m - 1 - i] = b.values[i].imag();
  }

  Spectrum out(grid);
  // Hermitian inputs give a Hermitian result; mirroring makes that exact.
  const bool mirror = a.is_hermitian() && b.is_hermitian();
  const std::size_t first = mirror ? h : 0;
  for (std::size_t s = first; s < m; ++s) out.values[s] = dw * regular_conv_at(ar, ai, br_rev, bi_rev, s, m, h);

  auto shifted_add = [&](const SingularComponent& c, const Spectrum& reg) {
    for (std::size_t s = first; s < m; ++s) {
      const long src = static_cast<long>(s) - c.offset;
      if (src >= 0 && src < static_cast<long>(m)) out.values[s] += c.weight * reg.values[static_cast<std::size_t>(src)];
    }
  };
  for (const auto& c : a.singular) shifted_add(c, b);
  for (const auto& c : b.singular) shifted_add(c, a);
  if (mirror) {
    for (std::size_t k = 1; k <= h; ++k) out.values[h - k] = std::conj(out.values[h + k]);
    out.values[h] = out.values[h].real();
  }

  for (const auto& ca : a.singular) {
    for (const auto& cb : b.singular) {
      const long off = ca.offset + cb.offset;
      if (std::abs(off) <= static_cast<long>(h)) out.singular.push_back({off, ca.weight * cb.weight});
    }
  }
  out.normalize_singular();
  return out;
}

Spectrum phi_omega(const SusceptibilityProblem& problem) {
  problem.validate();
  const auto& p = problem.potential;
  if (p.eta == 0.0 && p.epsilon != 0.0) {
    throw DomainError("phi_omega: eta = 0 with eps != 0 puts the Dirac term on the pole of chi~");
  }
  Spectrum out = chi_tilde_spectrum(problem.grid, problem.bath.gamma, p.eta);
  if (p.epsilon != 0.0) {
    const cplx at0 = chi_tilde(0.0, problem.bath.gamma, p.eta);
    out.add_singular(0.0, -2.0 * std::numbers::pi * (p.epsilon / p.f0) * at0);
  }
  return out;
}

Spectrum psi_operator(const Spectrum& chi, const SusceptibilityProblem& problem) {
  if (!(chi.grid == problem.grid)) throw DomainError("psi_operator: grid mismatch");
  const auto& p = problem.potential;
  const double two_pi = 2.0 * std::numbers::pi;
  Spectrum inner = (3.0 * p.alpha) * problem.sigma2_spec;
  if (p.alpha * p.f0 * p.f0 != 0.0) inner += (p.alpha * p.f0 * p.f0 / two_pi) * convolve(chi, chi);
  Spectrum out = convolve(chi, inner);

  const std::size_t h = problem.grid.half();
  for (std::size_t k = 0; k <= h; ++k) {
    const cplx ct = chi_tilde(problem.grid.at(h + k), problem.bath.gamma, p.eta);
    const cplx f = -ct / two_pi;
    out.values[h + k] *= f;
    if (k > 0) out.values[h - k] *= std::conj(f);
  }
  for (auto& s : out.singular) s.weight *= -chi_tilde(out.location(s), problem.bath.gamma, p.eta) / two_pi;
  out.normalize_singular();
  return out;
}

SusceptibilitySolution solve_susceptibility(const SusceptibilityProblem& problem, double tol, std::size_t k_max) {
  problem.validate();
  FunctionalProblem<Spectrum> fp{phi_omega(problem),
                                 [&](const Spectrum& chi) { return psi_operator(chi, problem); }};
  auto sol = djm_solve(fp, tol, k_max);
  const std::size_t terms = sol.terms.size();
  return {std::move(sol.partial_sum), std::move(sol.term_norms), std::move(sol.telescoping_residuals), terms,
          sol.converged};
}

}  // namespace qcle
