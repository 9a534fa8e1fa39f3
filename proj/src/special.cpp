#include "qcle/special.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "qcle/error.hpp"

namespace qcle {

double sine_integral(double x) {
  if (x < 0.0) return -sine_integral(-x);
  if (x == 0.0) return 0.0;
  constexpr double kEps = 1e-16;
  if (x < 2.0) {
    // Power series; converges quickly below the continued-fraction crossover.
    double term = x;
    double sum = x;
    const double x2 = x * x;
    for (int k = 1; k < 60; ++k) {
      term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
      const double add = term / (2.0 * k + 1.0);
      sum += add;
      if (std::abs(add) < kEps * std::abs(sum)) break;
    }
    return sum;
  }
  // Modified Lentz evaluation of E1(i x); Si = pi/2 + Im[e^{-ix} h].
  using C = std::complex<double>;
  constexpr double kTiny = std::numeric_limits<double>::min() * 1e10;
  C b{1.0, x};
  C c{1.0 / kTiny, 0.0};
  C d = 1.0 / b;
  C h = d;
  for (int i = 2; i < 100000; ++i) {
    const double a = -static_cast<double>((i - 1) * (i - 1));
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const C del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < kEps) break;
  }
  h *= C{std::cos(x), -std::sin(x)};
  return std::numbers::pi / 2.0 + h.imag();
}

double tail_cos_over_w2(double omega_cut, double t) {
  if (!(omega_cut > 0.0)) throw DomainError("tail_cos_over_w2: cutoff must be positive");
  if (t == 0.0) return 1.0 / omega_cut;
  const double s = std::abs(t);
  const double x = omega_cut * s;
  return s * (std::cos(x) / x - (std::numbers::pi / 2.0 - sine_integral(x)));
}

double tail_sin_over_w3(double omega_cut, double t) {
  if (!(omega_cut > 0.0)) throw DomainError("tail_sin_over_w3: cutoff must be positive");
  if (t == 0.0) return 0.0;
  const double s = std::abs(t);
  const double x = omega_cut * s;
  const double inner = std::sin(x) / (2.0 * x * x) +
                       0.5 * (std::cos(x) / x - (std::numbers::pi / 2.0 - sine_integral(x)));
  return (t < 0.0 ? -1.0 : 1.0) * s * s * inner;
}

}  // namespace qcle
