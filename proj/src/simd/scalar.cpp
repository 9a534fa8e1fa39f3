#include "qcle/simd.hpp"

namespace qcle::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void cdot_scalar(const double* ar, const double* ai, const double* br, const double* bi,
                 std::size_t n, double* out_re, double* out_im) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += ar[i] * br[i] - ai[i] * bi[i];
    im += ar[i] * bi[i] + ai[i] * br[i];
  }
  *out_re = re;
  *out_im = im;
}

void poly_eval_scalar(const double* c_re, const double* c_im, std::size_t n_coeff,
                      const double* z_re, const double* z_im, std::size_t n_points,
                      double* out_re, double* out_im) {
  for (std::size_t p = 0; p < n_points; ++p) {
    double re = 0.0;
    double im = 0.0;
    const double zr = z_re[p];
    const double zi = z_im[p];
    for (std::size_t k = n_coeff; k-- > 0;) {
      const double nr = re * zr - im * zi + c_re[k];
      const double ni = re * zi + im * zr + c_im[k];
      re = nr;
      im = ni;
    }
    out_re[p] = re;
    out_im[p] = im;
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{dot_scalar, cdot_scalar, poly_eval_scalar};
  return table;
}

}  // namespace qcle::simd
