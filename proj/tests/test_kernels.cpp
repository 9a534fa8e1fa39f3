#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qcle/error.hpp"
#include "qcle/kernels.hpp"
#include "qcle/params.hpp"

using namespace qcle;

namespace {

// Closed forms written out independently of the library's complex-rate path.
double chi_v_underdamped(double t, double gamma, double eta) {
  const double w = std::sqrt(4.0 * eta - gamma * gamma);
  return 2.0 / w * std::exp(-gamma * t / 2.0) * std::sin(w * t / 2.0);
}

double simpson(auto f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST(Params, Presets) {
  EXPECT_EQ(PotentialParams::parabolic().eta, 1.0);
  EXPECT_EQ(PotentialParams::parabolic().alpha, 0.0);
  const auto asym = PotentialParams::asymmetric_bistable(0.5, 0.1);
  EXPECT_EQ(asym.eta, -1.0);
  EXPECT_EQ(asym.alpha, 0.5);
  EXPECT_EQ(asym.epsilon, 0.1);
  EXPECT_NO_THROW(asym.validate());
  EXPECT_NO_THROW(PotentialParams::bistable(0.3).validate());
}

TEST(Params, Validation) {
  EXPECT_THROW((PotentialParams{1.0, -0.1, 0.0, 1.0}.validate()), DomainError);
  EXPECT_THROW((PotentialParams{1.0, 0.1, 0.0, 0.0}.validate()), DomainError);
  EXPECT_THROW((PotentialParams{-1.0, 0.0, 0.0, 1.0}.validate()), DomainError);
  EXPECT_THROW((BathParams{0.0, 1.0, 1.0}.validate()), DomainError);
  EXPECT_THROW((BathParams{1.0, -1.0, 1.0}.validate()), DomainError);
  EXPECT_THROW((BathParams{1.0, 1.0, 0.0}.validate()), DomainError);
}

TEST(Params, Nondimensionalize) {
  // kappa q_m^2 = k_B T -> T = 1
  const double temp_k = 300.0;
  const double kappa = 2.0;
  const double qm = std::sqrt(kBoltzmann * temp_k / kappa);
  EXPECT_NEAR(nondimensionalize(1.0, kappa, qm, temp_k, 1.0).temp, 1.0, 1e-12);
  EXPECT_NEAR(nondimensionalize(1.0, kappa, 2.0 * qm, temp_k, 1.0).temp, 0.25, 1e-12);
  EXPECT_DOUBLE_EQ(nondimensionalize(1.0, 1.0, 1.0, 1.0, 0.5).gamma, 0.5);
  EXPECT_DOUBLE_EQ(nondimensionalize(4.0, 1.0, 1.0, 1.0, 0.5).gamma, 1.0);
  EXPECT_THROW(nondimensionalize(0.0, 1.0, 1.0, 1.0, 1.0), DomainError);
  EXPECT_THROW(nondimensionalize(1.0, 1.0, 1.0, -1.0, 1.0), DomainError);
}

TEST(Kernels, Omega0) {
  EXPECT_EQ(omega0(2.0, 1.0), cplx(0.0, 0.0));
  EXPECT_EQ(omega0(3.0, 2.0), cplx(1.0, 0.0));
  EXPECT_NEAR(std::abs(omega0(1.0, 1.0) - cplx(0.0, std::sqrt(3.0))), 0.0, 1e-15);
}

TEST(Kernels, ChiVFrozenValues) {
  EXPECT_NEAR(chi_v(1.0, 1.0, 1.0), 0.533507195114692983, 1e-14);
  EXPECT_NEAR(chi_q(1.0, 1.0, 1.0), 0.659700153391701662, 1e-14);
  EXPECT_NEAR(chi_v(1.0, 3.0, 2.0), 0.232544157934829630, 1e-14);
  EXPECT_NEAR(chi_v_integral(2.0, 1.0, 1.0), 0.849425634854112386, 1e-12);
  EXPECT_NEAR(chi_v(1.5, 2.0, 1.0), 1.5 * std::exp(-1.5), 1e-14);
  EXPECT_EQ(chi_v(0.0, 1.0, 1.0), 0.0);
  EXPECT_EQ(chi_q(0.0, 1.0, 1.0), 1.0);
  EXPECT_EQ(chi_v_dot(0.0, 0.7, 3.0), 1.0);
  EXPECT_THROW(chi_v(-0.1, 1.0, 1.0), DomainError);
}

TEST(Kernels, ChiVMatchesClosedFormUnderdamped) {
  for (double t = 0.0; t <= 20.0; t += 0.37) {
    EXPECT_NEAR(chi_v(t, 0.4, 2.0), chi_v_underdamped(t, 0.4, 2.0), 1e-13) << t;
  }
}

TEST(Kernels, ChiQIdentity) {
  for (double gamma : {0.3, 1.0, 2.0, 5.0}) {
    for (double t = 0.0; t <= 10.0; t += 0.01) {
      ASSERT_NEAR(chi_q(t, gamma, 1.0), chi_v_dot(t, gamma, 1.0) + gamma * chi_v(t, gamma, 1.0), 1e-6);
    }
  }
}

TEST(Kernels, ChiVDotFiniteDifference) {
  const double h = 1e-5;
  for (double t : {0.1, 1.0, 3.3, 7.0}) {
    for (double gamma : {0.5, 2.0, 4.0}) {
      const double fd = (chi_v(t + h, gamma, 1.0) - chi_v(t - h, gamma, 1.0)) / (2.0 * h);
      EXPECT_NEAR(chi_v_dot(t, gamma, 1.0), fd, 1e-8);
    }
  }
}

TEST(Kernels, NegativeStiffnessGrows) {
  // eta < 0: one rate is positive, chi_v grows without bound.
  EXPECT_GT(chi_v(10.0, 1.0, -1.0), 100.0);
  const double lp = (-1.0 + std::sqrt(5.0)) / 2.0, lm = (-1.0 - std::sqrt(5.0)) / 2.0;
  EXPECT_NEAR(chi_v(2.0, 1.0, -1.0), (std::exp(lp * 2.0) - std::exp(lm * 2.0)) / std::sqrt(5.0), 1e-12);
}

TEST(Kernels, ContinuityAtCriticalDamping) {
  for (double d : {1e-8, -1e-8}) {
    const double gamma = std::sqrt(4.0 + d);
    for (double t : {0.1, 1.0, 5.0}) {
      EXPECT_NEAR(chi_v(t, gamma, 1.0), chi_v(t, 2.0, 1.0), 1e-6);
      EXPECT_NEAR(chi_q(t, gamma, 1.0), chi_q(t, 2.0, 1.0), 1e-6);
    }
  }
}

TEST(Kernels, ChiTilde) {
  EXPECT_NEAR(std::abs(chi_tilde(1.0, 1.0, 1.0) - cplx(0.0, 1.0)), 0.0, 1e-15);
  EXPECT_EQ(chi_tilde(0.0, 1.0, 2.0), cplx(0.5, 0.0));
  for (double w : {0.1, 0.7, 3.0, 40.0}) {
    EXPECT_EQ(chi_tilde(-w, 0.8, 1.0), std::conj(chi_tilde(w, 0.8, 1.0)));
    EXPECT_GT(chi_tilde(w, 0.8, 1.0).imag(), 0.0);
  }
}

TEST(Kernels, NoisePsd) {
  EXPECT_DOUBLE_EQ(noise_psd(0.0, 1.5, 0.4, 3.0), 2.0 * 1.5 * 0.4);
  EXPECT_NEAR(noise_psd(1.0, 1.0, 1.0, 1e4) / 2.0, 1.0, 1e-6);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.01, 10.0), w(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double om = w(rng), g = u(rng), t = u(rng), nu = u(rng) * 100.0;
    const double s = noise_psd(om, g, t, nu);
    ASSERT_GE(s, 0.0);
    ASSERT_EQ(s, noise_psd(-om, g, t, nu));
  }
}

TEST(Kernels, NoisePsdInverseTransformMatchesCorrelation) {
  // C(tau) = (1/pi) int_0^inf [S - s_inf w] cos(w tau) dw - (2 gamma T / nu) / tau^2,
  // with s_inf w the large-frequency asymptote whose transform is the last term.
  const double gamma = 1.0, temp = 1.0, nu = 5.0, tau = 1.0;
  const double s_inf = 2.0 * std::numbers::pi * gamma * temp / nu;
  auto integrand = [&](double w) { return (noise_psd(w, gamma, temp, nu) - s_inf * w) * std::cos(w * tau); };
  const double c = simpson(integrand, 0.0, 60.0, 60000) / std::numbers::pi - 2.0 * gamma * temp / nu / (tau * tau);
  EXPECT_NEAR(c / -0.0682967288019205656 - 1.0, 0.0, 1e-3);
  EXPECT_NEAR(noise_correlation(tau, gamma, temp, nu), -0.0682967288019205656, 1e-15);
}

TEST(Kernels, NoiseCorrelation) {
  EXPECT_NEAR(noise_correlation(1.0, 1.0, 1.0, 2.0), -0.724061660966310466, 1e-15);
  EXPECT_EQ(noise_correlation(0.3, 1.0, 1.0, 2.0), noise_correlation(-0.3, 1.0, 1.0, 2.0));
  EXPECT_LT(noise_correlation(0.3, 1.0, 1.0, 2.0), 0.0);
  EXPECT_NEAR(noise_correlation(60.0, 1.0, 1.0, 2.0), 0.0, 1e-40);
  EXPECT_THROW(noise_correlation(1e-9, 1.0, 1.0, 2.0), DomainError);
}

TEST(Kernels, XiQ0CorrFrozen) {
  EXPECT_NEAR(xi_q0_corr(1.0, 1.0, 1.0, 2.0, 1.0, 1e-14).value, -0.0850863494241538416, 1e-13);
  EXPECT_NEAR(xi_q0_corr(0.5, 1.0, 1.0, 2.0, 1.0, 1e-14).value, -0.281454326761693964, 1e-13);
  EXPECT_LT(xi_q0_corr(0.5, 1.0, 1.0, 2.0, 1.0, 1e-8).value, 0.0);
  EXPECT_THROW(xi_q0_corr(0.0, 1.0, 1.0, 2.0, 1.0, 1e-8), DomainError);
  EXPECT_THROW(xi_q0_corr(1.0, 1.0, 1.0, 2.0, 1.0, 0.0), DomainError);
}

TEST(Kernels, XiQ0CorrTailBound) {
  const double bound = 2.0 * 2.0 * std::exp(-20.0) / (4.0 + 2.0 + 1.0) / (1.0 - std::exp(-20.0));
  EXPECT_LT(std::abs(xi_q0_corr(10.0, 1.0, 1.0, 2.0, 1.0, 1e-30).value), bound);
}

TEST(Kernels, XiQ0CorrToleranceConsistency) {
  for (double t : {0.01, 0.2, 1.0, 4.0}) {
    const auto coarse = xi_q0_corr(t, 1.0, 1.0, 3.0, 1.0, 1e-6);
    const auto fine = xi_q0_corr(t, 1.0, 1.0, 3.0, 1.0, 1e-12);
    EXPECT_NEAR(coarse.value, fine.value, 1e-6);
    EXPECT_LE(coarse.terms, fine.terms);
  }
}

TEST(Kernels, XiQ0CorrMonotone) {
  double prev = -INFINITY;
  for (double t = 0.01; t < 8.0; t += 0.05) {
    const double v = xi_q0_corr(t, 1.0, 1.0, 2.0, 1.5, 1e-13).value;
    ASSERT_GT(v, prev) << t;
    prev = v;
  }
}

TEST(Kernels, XiQ0CorrRegularSplit) {
  const double g = 0.7, temp = 0.6, nu = 3.0, eta = 1.2;
  for (double t : {0.05, 0.3, 1.0, 2.5}) {
    const double log_part = 2.0 * g * temp / nu * std::log(1.0 - std::exp(-nu * t));
    EXPECT_NEAR(log_part + xi_q0_corr_regular(t, g, temp, nu, eta), xi_q0_corr(t, g, temp, nu, eta, 1e-14).value,
                1e-12);
  }
  EXPECT_TRUE(std::isfinite(xi_q0_corr_regular(0.0, g, temp, nu, eta)));
}
