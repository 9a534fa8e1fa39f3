#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qcle/fourier.hpp"
#include "qcle/kernels.hpp"
#include "qcle/moments.hpp"
#include "qcle/susceptibility.hpp"

using namespace qcle;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const BathParams kBath{1.0, 0.25, 1e4};

Spectrum flat_variance(const FreqGrid& g, double c) {
  Spectrum s(g);
  if (c != 0.0) s.add_singular(0.0, kTwoPi * c);
  return s;
}

}  // namespace

TEST(PhiOmega, WithoutForceIsChiTilde) {
  const FreqGrid g = FreqGrid::with_step(10.0, 0.1);
  const SusceptibilityProblem p{PotentialParams::parabolic(), kBath, Spectrum(g), g};
  const auto phi = phi_omega(p);
  EXPECT_TRUE(phi.singular.empty());
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(phi.values[i], chi_tilde(g.at(i), 1.0, 1.0));
  EXPECT_TRUE(phi.is_hermitian());
}

TEST(PhiOmega, ConstantForceAddsDelta) {
  const FreqGrid g = FreqGrid::with_step(10.0, 0.1);
  const SusceptibilityProblem p{{2.0, 0.0, 0.4, 0.5}, kBath, Spectrum(g), g};
  const auto phi = phi_omega(p);
  ASSERT_EQ(phi.singular.size(), 1u);
  EXPECT_EQ(phi.singular[0].offset, 0);
  EXPECT_NEAR(phi.singular[0].weight.real(), -kTwoPi * 0.8 / 2.0, 1e-15);
  const SusceptibilityProblem bad{{0.0, 1.0, 0.4, 0.5}, kBath, Spectrum(g), g};
  EXPECT_THROW(phi_omega(bad), DomainError);
}

TEST(Convolve, DiracAlgebra) {
  const FreqGrid g = FreqGrid::with_step(5.0, 0.5);
  Spectrum a(g), b(g);
  a.add_singular(1.0, {2.0, 0.0});
  b.add_singular(-0.5, {0.0, 3.0});
  auto c = convolve(a, b);
  ASSERT_EQ(c.singular.size(), 1u);
  EXPECT_DOUBLE_EQ(c.location(c.singular[0]), 0.5);
  EXPECT_EQ(c.singular[0].weight, cplx(0.0, 6.0));

  Spectrum f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = {g.at(i), 1.0};
  c = convolve(a, f);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double w = g.at(i);
    const cplx expect = (w - 1.0 >= -5.0) ? 2.0 * cplx(w - 1.0, 1.0) : cplx{};
    EXPECT_NEAR(std::abs(c.values[i] - expect), 0.0, 1e-14) << w;
  }
}

TEST(Convolve, GaussianPair) {
  // exp(-w^2) with itself gives sqrt(pi / 2) exp(-w^2 / 2).
  const FreqGrid g = FreqGrid::with_step(12.0, 0.02);
  Spectrum a(g);
  for (std::size_t i = 0; i < g.size(); ++i) a.values[i] = std::exp(-g.at(i) * g.at(i));
  const auto c = convolve(a, a);
  for (std::size_t i = 0; i < g.size(); i += 25) {
    const double w = g.at(i);
    if (std::abs(w) > 6.0) continue;
    EXPECT_NEAR(c.values[i].real(), std::sqrt(std::numbers::pi / 2.0) * std::exp(-0.5 * w * w), 1e-10) << w;
  }
  EXPECT_TRUE(c.is_hermitian());
}

TEST(PsiOperator, VanishesWithoutAnharmonicity) {
  const FreqGrid g = FreqGrid::with_step(10.0, 0.1);
  const SusceptibilityProblem p{PotentialParams::parabolic(), kBath, flat_variance(g, 0.5), g};
  EXPECT_EQ(sup_norm(psi_operator(chi_tilde_spectrum(g, 1.0, 1.0), p)), 0.0);
}

TEST(PsiOperator, MatchesTimeDomainProduct) {
  // psi / (-chi~) is the transform of 3 alpha sigma2 R + alpha f0^2 R^3.
  const double alpha = 0.3, f0 = 0.7, c = 0.5;
  const FreqGrid g = FreqGrid::with_step(60.0, 0.02);
  Spectrum chi(g);
  for (std::size_t i = 0; i < g.size(); ++i) chi.values[i] = 1.0 / (cplx(1.0, -g.at(i)) * cplx(1.0, -g.at(i)) + 1.0);
  const SusceptibilityProblem p{{1.0, alpha, 0.0, f0}, kBath, flat_variance(g, c), g};
  const auto psi = psi_operator(chi, p);

  const TimeGrid tg = TimeGrid::with_step(40.0, 1e-3);
  SampledSignal h(tg);
  for (std::size_t k = 0; k < tg.size(); ++k) {
    const double r = std::exp(-tg[k]) * std::sin(tg[k]);
    h[k] = 3.0 * alpha * c * r + alpha * f0 * f0 * r * r * r;
  }
  const auto ref = fourier_forward(h, g);
  for (std::size_t i = 0; i < g.size(); i += 10) {
    const double w = g.at(i);
    if (std::abs(w) > 10.0) continue;
    const cplx got = -psi.values[i] / chi_tilde(w, kBath.gamma, 1.0);
    EXPECT_LT(std::abs(got - ref.values[i]), 1e-3) << w;
  }
}

TEST(Susceptibility, HarmonicIsExact) {
  const FreqGrid g = FreqGrid::with_step(20.0, 0.05);
  const SusceptibilityProblem p{PotentialParams::parabolic(), kBath, flat_variance(g, 0.25), g};
  const auto sol = solve_susceptibility(p, 1e-12);
  ASSERT_TRUE(sol.converged);
  EXPECT_EQ(sol.terms, 2u);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(sol.chi.values[i], chi_tilde(g.at(i), 1.0, 1.0));
}

TEST(Susceptibility, FlatVarianceShiftsTheWell) {
  const FreqGrid g = FreqGrid::with_step(20.0, 0.05);
  const SusceptibilityProblem p{{1.0, 0.2, 0.0, 1e-7}, kBath, flat_variance(g, 0.5), g};
  const auto sol = solve_susceptibility(p, 1e-13);
  ASSERT_TRUE(sol.converged);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_LT(std::abs(sol.chi.values[i] - chi_tilde(g.at(i), 1.0, 1.3)), 1e-9) << g.at(i);
  }
}

TEST(Susceptibility, NonlinearIsHermitianAndCausal) {
  const PotentialParams pot{1.0, 0.3, 0.0, 0.1};
  const auto s2 = variance(TimeGrid::with_step(30.0, 1e-2), kBath, pot);
  const FreqGrid g = FreqGrid::with_step(50.0, 0.05);
  const SusceptibilityProblem p{pot, kBath, variance_spectrum(s2, g), g};
  const auto sol = solve_susceptibility(p, 1e-12);
  ASSERT_TRUE(sol.converged);
  EXPECT_TRUE(sol.chi.is_hermitian());
  for (double r : sol.telescoping_residuals) EXPECT_LT(r, 1e-10);
  const double t[] = {-0.5, -2.0, -8.0};
  const auto back = inverse_fourier(sol.chi, t);
  for (double v : back.real) EXPECT_LT(std::abs(v), 1e-3);
}

TEST(Susceptibility, ArgumentChecks) {
  const FreqGrid g = FreqGrid::with_step(10.0, 0.1);
  const SusceptibilityProblem p{{1.0, 0.3, 0.0, 1.0}, kBath, Spectrum(FreqGrid::with_step(5.0, 0.1)), g};
  EXPECT_THROW(solve_susceptibility(p, 1e-10), DomainError);
  const SusceptibilityProblem q{{1.0, 0.3, 0.0, 1.0}, kBath, Spectrum(g), g};
  EXPECT_THROW(solve_susceptibility(q, 0.0), DomainError);
}
