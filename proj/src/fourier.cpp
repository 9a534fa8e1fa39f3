#include "qcle/fourier.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qcle/error.hpp"
#include "qcle/simd.hpp"
#include "qcle/special.hpp"

namespace qcle {
namespace {

// A = int_0^1 (1-x) e^{i theta x} dx, B = int_0^1 x e^{i theta x} dx.
std::pair<cplx, cplx> hat_moments(double theta) {
  if (std::abs(theta) < 0.5) {
    cplx a{}, b{};
    cplx p{1.0, 0.0};  // (i theta)^j / j!
    for (int j = 0; j < 25; ++j) {
      a += p / static_cast<double>((j + 1) * (j + 2));
      b += p / static_cast<double>(j + 2);
      p *= cplx{0.0, theta} / static_cast<double>(j + 1);
    }
    return {a, b};
  }
  const cplx e = std::polar(1.0, theta);
  const cplx it{0.0, theta};
  const cplx b = e / it + (e - 1.0) / (theta * theta);
  return {(e - 1.0) / it - b, b};
}

}  // namespace

Spectrum fourier_forward(const SampledSignal& signal, const FreqGrid& grid, double edge_tol) {
  const std::size_t n = signal.size();
  const double last = signal.values.back();
  if (!(std::abs(last) < edge_tol)) {
    std::ostringstream msg;
    msg << "fourier_forward: signal has not decayed at t_max (|s| = " << std::abs(last) << ")";
    throw PreconditionError(msg.str());
  }
  const double dt = signal.grid.dt();
  const std::size_t h = grid.half();

  std::vector<double> z_re(h + 1), z_im(h + 1);
  for (std::size_t j = 0; j <= h; ++j) {
    const double theta = grid.at(h + j) * dt;
    z_re[j] = std::cos(theta);
    z_im[j] = std::sin(theta);
  }
  const std::vector<double> zeros(n, 0.0);
  std::vector<double> p_re(h + 1), p_im(h + 1);
  simd::kernels().poly_eval(signal.values.data(), zeros.data(), n, z_re.data(), z_im.data(), h + 1,
                            p_re.data(), p_im.data());

  Spectrum out(grid);
  const double t_last = signal.grid[n - 1];
  for (std::size_t j = 0; j <= h; ++j) {
    const double omega = grid.at(h + j);
    const double theta = omega * dt;
    const auto [a, b] = hat_moments(theta);
    const double x = 0.5 * theta;
    const double sinc = (x == 0.0) ? 1.0 : std::sin(x) / x;
    cplx v = sinc * sinc * cplx{p_re[j], p_im[j]};
    v -= a * last * std::polar(1.0, omega * t_last);
    v -= std::polar(1.0, -theta) * b * signal.values.front();
    v *= dt;
    out.values[h + j] = v;
    out.values[h - j] = std::conj(v);
  }
  out.values[h] = out.values[h].real();
  return out;
}

ResponseSamples inverse_fourier(const Spectrum& chi, std::span<const double> times, double edge_tol) {
  const std::size_t m = chi.size();
  const std::size_t h = chi.grid.half();
  const double dw = chi.grid.d_omega();
  const double cut = chi.grid.at(m - 1);
  const cplx edge_hi = chi.values[m - 1];
  if (!(std::abs(edge_hi) < edge_tol) || !(std::abs(chi.values[0]) < edge_tol)) {
    std::ostringstream msg;
    msg << "inverse_fourier: |chi| at the grid edge (" << std::max(std::abs(edge_hi), std::abs(chi.values[0]))
        << ") exceeds edge tolerance " << edge_tol << "; widen the frequency grid";
    throw PreconditionError(msg.str());
  }

  std::vector<double> c_re(m), c_im(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double w = (j == 0 || j + 1 == m) ? 0.5 : 1.0;
    c_re[j] = w * chi.values[j].real();
    c_im[j] = w * chi.values[j].imag();
  }
  const std::size_t nt = times.size();
  std::vector<double> z_re(nt), z_im(nt), p_re(nt), p_im(nt);
  for (std::size_t i = 0; i < nt; ++i) {
    z_re[i] = std::cos(dw * times[i]);
    z_im[i] = -std::sin(dw * times[i]);
  }
  simd::kernels().poly_eval(c_re.data(), c_im.data(), m, z_re.data(), z_im.data(), nt, p_re.data(), p_im.data());

  const double a = edge_hi.real() * cut * cut;
  const double b = edge_hi.imag() * cut * cut * cut;
  ResponseSamples out{std::vector<double>(nt), std::vector<double>(nt)};
  for (std::size_t i = 0; i < nt; ++i) {
    const double t = times[i];
    cplx acc = dw * std::polar(1.0, static_cast<double>(h) * dw * t) * cplx{p_re[i], p_im[i]};
    acc += 2.0 * (a * tail_cos_over_w2(cut, t) + b * tail_sin_over_w3(cut, t));
    for (const auto& s : chi.singular) acc += s.weight * std::polar(1.0, -chi.location(s) * t);
    acc /= 2.0 * std::numbers::pi;
    out.real[i] = acc.real();
    out.imag[i] = acc.imag();
  }
  return out;
}

SampledSignal response_from_susceptibility(const Spectrum& chi, const TimeGrid& grid, double edge_tol,
                                           double* max_imag) {
  std::vector<double> times(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) times[k] = grid[k];
  ResponseSamples r = inverse_fourier(chi, times, edge_tol);
  if (max_imag != nullptr) {
    double m = 0.0;
    for (double v : r.imag) m = std::max(m, std::abs(v));
    *max_imag = m;
  }
  return SampledSignal(grid, std::move(r.real));
}

}  // namespace qcle
