#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops. Every kernel has a scalar reference and an AVX2
// variant; the active table is chosen once from CPUID unless overridden.
namespace qcle::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
  /// sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// sum_i (ar + i ai)[i] * (br + i bi)[i], written to (*out_re, *out_im)
  void (*cdot)(const double* ar, const double* ai, const double* br, const double* bi,
               std::size_t n, double* out_re, double* out_im);
  /// Horner evaluation of p(z) = sum_k c[k] z^k at n_points complex points.
  void (*poly_eval)(const double* c_re, const double* c_im, std::size_t n_coeff,
                    const double* z_re, const double* z_im, std::size_t n_points,
                    double* out_re, double* out_im);
};

const KernelTable& scalar_kernels();
/// Null when the AVX2 variant was not compiled in.
const KernelTable* avx2_kernels();

bool cpu_has_avx2();
Isa active_isa();
/// Forces a kernel set. Returns false (and changes nothing) if unsupported.
bool set_isa(Isa isa);
std::string_view isa_name(Isa isa);

const KernelTable& kernels();

inline double dot(std::span<const double> a, std::span<const double> b) {
  return kernels().dot(a.data(), b.data(), a.size());
}

}  // namespace qcle::simd
