#pragma once

#include <array>
#include <cstddef>

namespace qcle::detail {

// 8-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 8> kGlNodes{
    -0.96028985649753618, -0.79666647741362673, -0.52553240991632899, -0.18343464249564978,
    0.18343464249564978,  0.52553240991632899,  0.79666647741362673,  0.96028985649753618};
inline constexpr std::array<double, 8> kGlWeights{
    0.10122853629037669, 0.22238103445337434, 0.31370664587788705, 0.36268378337836177,
    0.36268378337836177, 0.31370664587788705, 0.22238103445337434, 0.10122853629037669};

template <class F>
double gauss_legendre(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < kGlNodes.size(); ++i) acc += kGlWeights[i] * f(mid + half * kGlNodes[i]);
  return half * acc;
}

/// Composite Gauss-Legendre with panels no wider than `panel`.
template <class F>
double gauss_legendre_composite(F&& f, double a, double b, double panel) {
  if (b <= a) return 0.0;
  auto n = static_cast<std::size_t>((b - a) / panel) + 1;
  const double h = (b - a) / static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += gauss_legendre(f, a + h * static_cast<double>(i), a + h * static_cast<double>(i + 1));
  return acc;
}

}  // namespace qcle::detail
