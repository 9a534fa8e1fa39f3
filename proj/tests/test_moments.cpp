#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qcle/fourier.hpp"
#include "qcle/kernels.hpp"
#include "qcle/moments.hpp"

using namespace qcle;

namespace {

constexpr double kPi = std::numbers::pi;

// Deterministic RK4 for G'' + gamma G' + eta G = -eps - alpha (G^3 + 3 G s2(t)).
SampledSignal mean_ode(const InitialState& init, const PotentialParams& p, double gamma, const SampledSignal& s2,
                       int sub) {
  const TimeGrid& g = s2.grid;
  SampledSignal out(g);
  double q = init.q0, v = init.drop_v0 ? 0.0 : init.v0;
  out[0] = q;
  const double h = g.dt() / sub;
  auto acc = [&](double t, double x, double u) {
    const double s = s2.interpolate(t);
    return -gamma * u - p.eta * x - p.epsilon - p.alpha * (x * x * x + 3.0 * x * s);
  };
  for (std::size_t k = 1; k < g.size(); ++k) {
    for (int j = 0; j < sub; ++j) {
      const double t = g[k - 1] + j * h;
      const double k1q = v, k1v = acc(t, q, v);
      const double k2q = v + 0.5 * h * k1v, k2v = acc(t + 0.5 * h, q + 0.5 * h * k1q, k2q);
      const double k3q = v + 0.5 * h * k2v, k3v = acc(t + 0.5 * h, q + 0.5 * h * k2q, k3q);
      const double k4q = v + h * k3v, k4v = acc(t + h, q + h * k3q, k4q);
      q += h / 6.0 * (k1q + 2 * k2q + 2 * k3q + k4q);
      v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    }
    out[k] = q;
  }
  return out;
}

const BathParams kClassical{1.0, 1.0, 1e4};

}  // namespace

TEST(PhiVCov, ZeroTimeAndSymmetry) {
  EXPECT_EQ(phi_v_cov(0.0, 1.3, kClassical, 1.0), 0.0);
  EXPECT_EQ(phi_v_cov(2.0, 0.0, kClassical, 1.0), 0.0);
  const BathParams b{0.7, 0.4, 3.0};
  EXPECT_NEAR(phi_v_cov(1.1, 2.3, b, 1.0), phi_v_cov(2.3, 1.1, b, 1.0), 1e-9);
  EXPECT_THROW(phi_v_cov(-1.0, 1.0, b, 1.0), DomainError);
}

TEST(PhiVCov, ClassicalValue) {
  // Independent value from a white-noise double integral over chi_v_dot.
  EXPECT_NEAR(phi_v_cov(1.0, 1.0, kClassical, 1.0), 0.699445410042150059, 7e-4);
}

TEST(Variance, StartsAtZeroAndReachesEquipartition) {
  const auto s2 = variance(TimeGrid::with_step(20.0, 1e-3), kClassical, PotentialParams::parabolic());
  EXPECT_EQ(s2[0], 0.0);
  EXPECT_NEAR(s2.values.back(), 1.0, 0.02);
}

TEST(Variance, NonNegativeOnCoarseGrid) {
  const auto s2 = variance(TimeGrid::with_step(20.0, 0.01), {1.0, 0.5, 5.0}, PotentialParams::parabolic());
  EXPECT_GE(*std::min_element(s2.values.begin(), s2.values.end()), 0.0);
}

TEST(Variance, FineGridDipIsBounded) {
  // Deterministic q0 with a correlated quantum bath gives a small negative
  // dip of order (2 gamma T / nu) dt^2 |ln(nu dt)| at the first nodes.
  const BathParams b{1.0, 0.5, 5.0};
  for (double dt : {1e-3, 5e-4}) {
    const auto s2 = variance(TimeGrid::with_step(2.0, dt), b, PotentialParams::parabolic());
    const double lo = *std::min_element(s2.values.begin(), s2.values.end());
    const double bound = 2.0 * (2.0 * b.gamma * b.temp / b.nu) * dt * dt * std::abs(std::log(b.nu * dt));
    EXPECT_GE(lo, -bound) << dt;
  }
}

TEST(Variance, IndependentOfMeanParameters) {
  const TimeGrid g = TimeGrid::with_step(5.0, 0.01);
  const BathParams b{0.8, 0.3, 20.0};
  const auto a = variance(g, b, {1.0, 0.0, 0.0, 1.0});
  const auto c = variance(g, b, {1.0, 0.7, -0.4, 0.2});
  EXPECT_EQ(a.values, c.values);
}

TEST(Variance, PartsAddUp) {
  const TimeGrid g = TimeGrid::with_step(5.0, 0.01);
  const auto p = variance_parts(g, {1.0, 0.5, 5.0}, PotentialParams::parabolic());
  const auto s = variance(g, {1.0, 0.5, 5.0}, PotentialParams::parabolic());
  EXPECT_EQ(p.total().values, s.values);
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_GE(p.thermal[k], 0.0);
}

TEST(VarianceSpectrum, ConstantIsPureDelta) {
  const TimeGrid g = TimeGrid::with_step(30.0, 0.01);
  const FreqGrid fg = FreqGrid::with_step(10.0, 0.05);
  const auto s = variance_spectrum(SampledSignal(g, std::vector<double>(g.size(), 0.75)), fg);
  for (const auto& v : s.values) EXPECT_EQ(std::abs(v), 0.0);
  ASSERT_EQ(s.singular.size(), 1u);
  EXPECT_EQ(s.singular[0].offset, 0);
  EXPECT_DOUBLE_EQ(s.singular[0].weight.real(), 1.5 * kPi);
}

TEST(VarianceSpectrum, ExponentialTransient) {
  const TimeGrid g = TimeGrid::with_step(30.0, 1e-3);
  const FreqGrid fg = FreqGrid::with_step(10.0, 0.05);
  SampledSignal s2(g);
  for (std::size_t k = 0; k < g.size(); ++k) s2[k] = 2.0 + std::exp(-g[k]);
  const auto s = variance_spectrum(s2, fg);
  EXPECT_TRUE(s.is_hermitian());
  for (std::size_t i = 0; i < fg.size(); ++i) {
    const double w = fg.at(i);
    EXPECT_NEAR(s.values[i].real(), 2.0 / (1.0 + w * w), 1e-6) << w;
    EXPECT_EQ(s.values[i].imag(), 0.0);
  }
  ASSERT_EQ(s.singular.size(), 1u);
  EXPECT_NEAR(s.singular[0].weight.real(), 4.0 * kPi, 1e-10);
}

TEST(VarianceSpectrum, RequiresPlateau) {
  const TimeGrid g = TimeGrid::with_step(5.0, 0.01);
  SampledSignal s2(g);
  for (std::size_t k = 0; k < g.size(); ++k) s2[k] = 1.0 - std::exp(-0.2 * g[k]);
  EXPECT_THROW(variance_spectrum(s2, FreqGrid::with_step(10.0, 0.1)), PreconditionError);
}

TEST(VarianceSpectrum, RoundTripAtOrigin) {
  const auto s2 = variance(TimeGrid::with_step(40.0, 1e-3), kClassical, PotentialParams::parabolic());
  const auto s = variance_spectrum(s2, FreqGrid::with_step(50.0, 0.05));
  const double t[] = {0.0, 1.0};
  const auto back = inverse_fourier(s, t, std::numeric_limits<double>::infinity());
  EXPECT_NEAR(back.real[0], s2[0], 1e-3);
  EXPECT_NEAR(back.real[1], s2.interpolate(1.0), 1e-3);
}

TEST(MeanTrajectory, LinearCaseIsExact) {
  const TimeGrid g = TimeGrid::with_step(10.0, 1e-3);
  const SampledSignal s2(g);
  const InitialState init{1.0, 0.5, false};
  const auto m = mean_trajectory(init, PotentialParams::parabolic(), {0.5, 1.0, 1e4}, s2);
  EXPECT_EQ(m.term_norms.size(), 2u);
  for (std::size_t k = 0; k < g.size(); k += 50) {
    const double t = g[k];
    EXPECT_NEAR(m.mean[k], chi_q(t, 0.5, 1.0) + 0.5 * chi_v(t, 0.5, 1.0), 1e-14);
  }
}

TEST(MeanTrajectory, ConstantForceShiftsEquilibrium) {
  const TimeGrid g = TimeGrid::with_step(40.0, 1e-3);
  const PotentialParams p{2.0, 0.0, 0.3, 1.0};
  const auto m = mean_trajectory({0.0, 0.0, true}, p, {1.0, 1.0, 1e4}, SampledSignal(g));
  EXPECT_NEAR(m.mean.values.back(), -0.3 / 2.0, 1e-8);
}

TEST(MeanTrajectory, MatchesNonlinearOde) {
  const TimeGrid g = TimeGrid::with_step(10.0, 1e-3);
  const BathParams b{1.0, 0.25, 1e4};
  const PotentialParams p{1.0, 0.2, 0.1, 1.0};
  const auto s2 = variance(g, b, p);
  const InitialState init{1.0, 0.0, false};
  const auto m = mean_trajectory(init, p, b, s2);
  const auto ref = mean_ode(init, p, b.gamma, s2, 4);
  EXPECT_LT(sup_distance(m.mean, ref), 1e-5);
  const auto zero = mean_trajectory(init, p, b, SampledSignal(g));
  EXPECT_LT(sup_distance(zero.mean, mean_ode(init, p, b.gamma, SampledSignal(g), 4)), 1e-5);
}

TEST(MeanTrajectory, LinearInInitialStateWhenAlphaVanishes) {
  const TimeGrid g = TimeGrid::with_step(10.0, 1e-2);
  const PotentialParams p{1.5, 0.0, 0.0, 1.0};
  const BathParams b{0.3, 1.0, 1e4};
  const auto a = mean_trajectory({1.0, 0.0, false}, p, b, SampledSignal(g)).mean;
  const auto c = mean_trajectory({0.0, 1.0, false}, p, b, SampledSignal(g)).mean;
  const auto ac = mean_trajectory({2.0, -3.0, false}, p, b, SampledSignal(g)).mean;
  EXPECT_LT(sup_distance(ac, 2.0 * a - 3.0 * c), 1e-9);
}

TEST(MeanTrajectory, DivergenceThrows) {
  const TimeGrid g = TimeGrid::with_step(10.0, 1e-2);
  EXPECT_THROW(mean_trajectory({20.0, 0.0, false}, {1.0, 5.0, 0.0, 1.0}, kClassical, SampledSignal(g)),
               NumericalError);
}

TEST(ComputeMoments, PlateauIsLastVariance) {
  const auto m = compute_moments({1.0, 0.0, false}, PotentialParams::parabolic(), kClassical,
                                 TimeGrid::with_step(20.0, 0.01));
  EXPECT_EQ(m.equilibrium_variance, m.variance.values.back());
  EXPECT_EQ(m.mean.size(), m.variance.size());
}
