#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcle/error.hpp"

// Daftardar-Gejji recursion for u = f + B(u):
//   u_0 = f,  u_1 = B(u_0),  u_{m+1} = B(u_0 + ... + u_m) - B(u_0 + ... + u_{m-1}).
// Each step costs one evaluation of B; the previous B value is carried over.
namespace qcle {

/// Elements need vector-space arithmetic and a sup norm found by ADL.
template <class E>
concept NormedElement = std::copyable<E> && requires(E a, const E& b) {
  { a + b } -> std::convertible_to<E>;
  { a - b } -> std::convertible_to<E>;
  { sup_norm(b) } -> std::convertible_to<double>;
};

template <NormedElement E>
struct FunctionalProblem {
  E f;
  std::function<E(const E&)> op;
};

template <NormedElement E>
struct DjmSolution {
  std::vector<E> terms;
  E partial_sum;
  std::vector<double> term_norms;
  /// sup |(u_0 + ... + u_{m+1}) - f - B(u_0 + ... + u_m)| per step.
  std::vector<double> telescoping_residuals;
  bool converged = false;

  /// Number of correction terms beyond u_0.
  std::size_t k() const { return terms.empty() ? 0 : terms.size() - 1; }
};

inline constexpr std::size_t kDefaultDjmMaxTerms = 25;

/// Runs the recursion until the newest term's norm drops below `tol` or
/// `k_max` corrections were produced. Reaching k_max is reported through
/// `converged == false`; non-finite terms throw NumericalError.
template <NormedElement E>
DjmSolution<E> djm_solve(const FunctionalProblem<E>& problem, double tol,
                         std::size_t k_max = kDefaultDjmMaxTerms) {
  if (!(tol > 0.0)) throw DomainError("djm_solve: tol must be > 0");
  if (k_max < 1) throw DomainError("djm_solve: k_max must be >= 1");

  DjmSolution<E> sol{{problem.f}, problem.f, {sup_norm(problem.f)}, {}, false};
  if (!std::isfinite(sol.term_norms.front())) {
    throw NumericalError("djm_solve: inhomogeneity contains non-finite values");
  }

  std::optional<E> prev_b;  // B(u_0 + ... + u_{m-1})
  for (std::size_t m = 0; m < k_max; ++m) {
    E b = problem.op(sol.partial_sum);
    E term = prev_b ? E(b - *prev_b) : b;
    const double norm = sup_norm(term);
    if (!std::isfinite(norm)) {
      throw NumericalError("djm_solve: non-finite values in term " + std::to_string(m + 1));
    }
    sol.partial_sum = sol.partial_sum + term;
    sol.telescoping_residuals.push_back(sup_norm(E(sol.partial_sum - (problem.f + b))));
    sol.terms.push_back(std::move(term));
    sol.term_norms.push_back(norm);
    prev_b = std::move(b);
    if (norm < tol) {
      sol.converged = true;
      break;
    }
  }
  return sol;
}

/// Norm of the last computed term.
template <NormedElement E>
double max_error_remainder(const DjmSolution<E>& sol) {
  if (sol.term_norms.empty()) throw DomainError("max_error_remainder: empty solution");
  return sol.term_norms.back();
}

}  // namespace qcle
