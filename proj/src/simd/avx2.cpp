#include "qcle/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define QCLE_HAVE_AVX2_VARIANT 1
#include <immintrin.h>
#else
#define QCLE_HAVE_AVX2_VARIANT 0
#endif

namespace qcle::simd {

#if QCLE_HAVE_AVX2_VARIANT
namespace {

#define QCLE_AVX2 __attribute__((target("avx2,fma")))

QCLE_AVX2 inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

QCLE_AVX2 double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

QCLE_AVX2 void cdot_avx2(const double* ar, const double* ai, const double* br,
                         const double* bi, std::size_t n, double* out_re, double* out_im) {
  __m256d rr = _mm256_setzero_pd();
  __m256d ii = _mm256_setzero_pd();
  __m256d ri = _mm256_setzero_pd();
  __m256d ir = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xr = _mm256_loadu_pd(ar + i);
    const __m256d xi = _mm256_loadu_pd(ai + i);
    const __m256d yr = _mm256_loadu_pd(br + i);
    const __m256d yi = _mm256_loadu_pd(bi + i);
    rr = _mm256_fmadd_pd(xr, yr, rr);
    ii = _mm256_fmadd_pd(xi, yi, ii);
    ri = _mm256_fmadd_pd(xr, yi, ri);
    ir = _mm256_fmadd_pd(xi, yr, ir);
  }
  double re = hsum(rr) - hsum(ii);
  double im = hsum(ri) + hsum(ir);
  for (; i < n; ++i) {
    re += ar[i] * br[i] - ai[i] * bi[i];
    im += ar[i] * bi[i] + ai[i] * br[i];
  }
  *out_re = re;
  *out_im = im;
}

// Four evaluation points per lane group; the coefficient loop stays serial.
QCLE_AVX2 void poly_eval_avx2(const double* c_re, const double* c_im, std::size_t n_coeff,
                              const double* z_re, const double* z_im, std::size_t n_points,
                              double* out_re, double* out_im) {
  std::size_t p = 0;
  for (; p + 4 <= n_points; p += 4) {
    const __m256d zr = _mm256_loadu_pd(z_re + p);
    const __m256d zi = _mm256_loadu_pd(z_im + p);
    __m256d re = _mm256_setzero_pd();
    __m256d im = _mm256_setzero_pd();
    for (std::size_t k = n_coeff; k-- > 0;) {
      const __m256d cr = _mm256_set1_pd(c_re[k]);
      const __m256d ci = _mm256_set1_pd(c_im[k]);
      const __m256d nr = _mm256_fmadd_pd(re, zr, _mm256_fnmadd_pd(im, zi, cr));
      const __m256d ni = _mm256_fmadd_pd(re, zi, _mm256_fmadd_pd(im, zr, ci));
      re = nr;
      im = ni;
    }
    _mm256_storeu_pd(out_re + p, re);
    _mm256_storeu_pd(out_im + p, im);
  }
  if (p < n_points) {
    scalar_kernels().poly_eval(c_re, c_im, n_coeff, z_re + p, z_im + p, n_points - p,
                               out_re + p, out_im + p);
  }
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{dot_avx2, cdot_avx2, poly_eval_avx2};
  return &table;
}

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

#else

const KernelTable* avx2_kernels() { return nullptr; }
bool cpu_has_avx2() { return false; }

#endif

}  // namespace qcle::simd
